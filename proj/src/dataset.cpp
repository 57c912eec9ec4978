// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csiup/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace csiup {

namespace {

constexpr char magic[4] = {'C', 'S', 'I', 'D'};
constexpr std::size_t header_bytes = 4 + 4 * 3 + 8 + 4 * 3;

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    void put(std::uint64_t v, int n) {
        for (int b = 0; b < n; ++b) out_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
    std::vector<std::uint8_t>& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    [[nodiscard]] std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::uint64_t get(int n) {
        if (remaining() < static_cast<std::size_t>(n)) {
            throw DatasetError(DatasetErrc::truncated, "dataset: truncated payload at byte " + std::to_string(pos_));
        }
        std::uint64_t v = 0;
        for (int b = 0; b < n; ++b) v |= static_cast<std::uint64_t>(in_[pos_ + b]) << (8 * b);
        pos_ += n;
        return v;
    }
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void check_block(const CsiMatrix& m, const SystemConfig& cfg, const char* which, std::size_t k) {
    if (m.rows() != cfg.n_ant || m.cols() != cfg.n_sub || m.domain() != Domain::AF) {
        throw DatasetError(DatasetErrc::shape_mismatch,
                           std::string("dataset: record ") + std::to_string(k) + " " + which + " is " +
                               std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " " +
                               std::string(to_string(m.domain())) + ", expected " + std::to_string(cfg.n_ant) +
                               "x" + std::to_string(cfg.n_sub) + " AF");
    }
}

void put_block(Writer& w, const CMatrix& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        w.f32(static_cast<float>(m.data()[k].real()));
        w.f32(static_cast<float>(m.data()[k].imag()));
    }
}

CsiMatrix get_block(Reader& r, const SystemConfig& cfg) {
    CMatrix m(cfg.n_ant, cfg.n_sub);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const float re = r.f32();
        const float im = r.f32();
        m.data()[k] = cdouble(re, im);
    }
    return {std::move(m), Domain::AF};
}

}  // namespace

std::vector<std::uint8_t> encode_dataset(const SystemConfig& cfg, std::span<const ChannelPair> records) {
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw DatasetError(DatasetErrc::shape_mismatch, std::string("dataset: ") + e.what());
    }
    for (std::size_t k = 0; k < records.size(); ++k) {
        check_block(records[k].dl, cfg, "DL", k);
        check_block(records[k].ul, cfg, "UL", k);
    }
    std::vector<std::uint8_t> out;
    const std::size_t block = static_cast<std::size_t>(cfg.n_ant) * cfg.n_sub * 8;
    out.reserve(header_bytes + records.size() * (8 + 2 * block));
    out.insert(out.end(), std::begin(magic), std::end(magic));
    Writer w(out);
    w.u32(dataset_version);
    w.u32(cfg.n_ant);
    w.u32(cfg.n_sub);
    w.f64(cfg.subcarrier_spacing_hz);
    w.u32(cfg.pilot_spacing);
    w.u32(cfg.n_pilots);
    w.u32(static_cast<std::uint32_t>(records.size()));
    for (const auto& rec : records) {
        w.u64(rec.seed);
        put_block(w, rec.dl.data());
        put_block(w, rec.ul.data());
    }
    return out;
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw DatasetError(DatasetErrc::truncated, "dataset: file shorter than magic");
    if (std::memcmp(bytes.data(), magic, 4) != 0) throw DatasetError(DatasetErrc::bad_magic, "dataset: bad magic");
    Reader r(bytes.subspan(4));
    const std::uint32_t version = r.u32();
    if (version != dataset_version) {
        throw DatasetError(DatasetErrc::version_mismatch,
                           "dataset: version " + std::to_string(version) + ", expected " +
                               std::to_string(dataset_version));
    }
    Dataset ds;
    ds.cfg.n_ant = r.u32();
    ds.cfg.n_sub = r.u32();
    ds.cfg.subcarrier_spacing_hz = r.f64();
    ds.cfg.pilot_spacing = r.u32();
    ds.cfg.n_pilots = r.u32();
    const std::uint32_t count = r.u32();
    try {
        ds.cfg.validate();
    } catch (const InvalidArgument& e) {
        throw DatasetError(DatasetErrc::shape_mismatch, std::string("dataset: ") + e.what());
    }
    const std::uint64_t record_bytes = 8 + 16ULL * ds.cfg.n_ant * ds.cfg.n_sub;
    if (r.remaining() < record_bytes * count) {
        throw DatasetError(DatasetErrc::truncated, "dataset: header announces " + std::to_string(count) +
                                                       " records but payload is short");
    }
    if (r.remaining() > record_bytes * count) {
        throw DatasetError(DatasetErrc::shape_mismatch, "dataset: trailing bytes after the last record");
    }
    ds.records.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        ChannelPair rec;
        rec.seed = r.u64();
        rec.dl = get_block(r, ds.cfg);
        rec.ul = get_block(r, ds.cfg);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

void write_dataset(const std::filesystem::path& path, const SystemConfig& cfg, std::span<const ChannelPair> records) {
    const auto bytes = encode_dataset(cfg, records);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError(DatasetErrc::io, "dataset: cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DatasetError(DatasetErrc::io, "dataset: write to " + path.string() + " failed");
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError(DatasetErrc::io, "dataset: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_dataset(bytes);
}

ChannelPair quantize_to_storage(const ChannelPair& pair) {
    auto round = [](const CsiMatrix& m) {
        CMatrix q = m.data().unaryExpr([](const cdouble& z) {
            return cdouble(static_cast<float>(z.real()), static_cast<float>(z.imag()));
        });
        return CsiMatrix(std::move(q), m.domain());
    };
    return {round(pair.dl), round(pair.ul), pair.truth, pair.seed};
}

}  // namespace csiup
