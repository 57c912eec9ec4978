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

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "csiup/dataset.hpp"
#include "oracle.hpp"

using namespace csiup;

namespace {

std::vector<ChannelPair> random_records(const SystemConfig& cfg, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ChannelPair> out;
    for (std::size_t k = 0; k < n; ++k) {
        ChannelPair p;
        p.dl = CsiMatrix(oracle::random_matrix(cfg.n_ant, cfg.n_sub, rng), Domain::AF);
        p.ul = CsiMatrix(oracle::random_matrix(cfg.n_ant, cfg.n_sub, rng), Domain::AF);
        p.seed = rng();
        out.push_back(quantize_to_storage(p));
    }
    return out;
}

DatasetErrc decode_error(const std::vector<std::uint8_t>& bytes) {
    try {
        (void)decode_dataset(bytes);
    } catch (const DatasetError& e) {
        return e.code();
    }
    FAIL("decode succeeded");
    return DatasetErrc::io;
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / (std::string("csiup_test_") + name);
}

}  // namespace

TEST_CASE("header layout is little-endian and unpadded") {
    const SystemConfig cfg = make_config(2, 12, 3, 30e3);
    const auto bytes = encode_dataset(cfg, {});
    REQUIRE(bytes.size() == 36);
    CHECK(std::memcmp(bytes.data(), "CSID", 4) == 0);
    const std::vector<std::uint8_t> version{1, 0, 0, 0}, n_ant{2, 0, 0, 0}, n_sub{12, 0, 0, 0};
    CHECK(std::equal(version.begin(), version.end(), bytes.begin() + 4));
    CHECK(std::equal(n_ant.begin(), n_ant.end(), bytes.begin() + 8));
    CHECK(std::equal(n_sub.begin(), n_sub.end(), bytes.begin() + 12));
    double scs = 0.0;
    std::memcpy(&scs, bytes.data() + 16, 8);  // host is little-endian in CI
    CHECK(scs == 30e3);
    CHECK(bytes[24] == 3);
    CHECK(bytes[28] == 4);
    CHECK(bytes[32] == 0);

    const auto one = encode_dataset(cfg, random_records(cfg, 1, 0));
    CHECK(one.size() == 36 + 8 + 2 * 2 * 12 * 8);
}

TEST_CASE("write then read round-trips bit-exactly") {
    const SystemConfig cfg = make_config(4, 24, 4);
    const auto recs = random_records(cfg, 3, 1);
    const auto path = temp_file("roundtrip.csid");
    write_dataset(path, cfg, recs);
    const Dataset ds = read_dataset(path);
    CHECK(ds.cfg == cfg);
    REQUIRE(ds.records.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(ds.records[k].seed == recs[k].seed);
        CHECK(ds.records[k].dl.data() == recs[k].dl.data());
        CHECK(ds.records[k].ul.data() == recs[k].ul.data());
        CHECK(ds.records[k].dl.domain() == Domain::AF);
    }
    // Re-encoding what was read reproduces the file byte for byte.
    std::ifstream in(path, std::ios::binary);
    const std::vector<std::uint8_t> file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(encode_dataset(ds.cfg, ds.records) == file);
    std::filesystem::remove(path);
}

TEST_CASE("empty record list") {
    const SystemConfig cfg = make_config(2, 8, 2);
    const Dataset ds = decode_dataset(encode_dataset(cfg, {}));
    CHECK(ds.records.empty());
    CHECK(ds.cfg == cfg);
}

TEST_CASE("each corruption maps to its own error") {
    const SystemConfig cfg = make_config(2, 8, 2);
    const auto good = encode_dataset(cfg, random_records(cfg, 2, 2));

    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(decode_error(bad_magic) == DatasetErrc::bad_magic);

    auto version = good;
    version[4] = 2;
    CHECK(decode_error(version) == DatasetErrc::version_mismatch);

    auto truncated = good;
    truncated.resize(good.size() - 1);
    CHECK(decode_error(truncated) == DatasetErrc::truncated);
    CHECK(decode_error(std::vector<std::uint8_t>(good.begin(), good.begin() + 20)) == DatasetErrc::truncated);
    CHECK(decode_error({'C', 'S'}) == DatasetErrc::truncated);

    auto trailing = good;
    trailing.push_back(0);
    CHECK(decode_error(trailing) == DatasetErrc::shape_mismatch);

    auto zero_ant = good;
    zero_ant[8] = 0;
    CHECK(decode_error(zero_ant) == DatasetErrc::shape_mismatch);

    auto wrong = random_records(cfg, 1, 3);
    wrong[0].ul = CsiMatrix::zeros(2, 6, Domain::AF);
    CHECK_THROWS_AS(encode_dataset(cfg, wrong), DatasetError);
    try {
        (void)encode_dataset(cfg, wrong);
    } catch (const DatasetError& e) {
        CHECK(e.code() == DatasetErrc::shape_mismatch);
    }
}

TEST_CASE("missing file is an io error") {
    try {
        (void)read_dataset(temp_file("does_not_exist.csid"));
        FAIL("expected an error");
    } catch (const DatasetError& e) {
        CHECK(e.code() == DatasetErrc::io);
    }
}

TEST_CASE("quantize_to_storage matches a write/read cycle") {
    const SystemConfig cfg = make_config(2, 8, 2);
    std::mt19937_64 rng(4);
    ChannelPair p;
    p.dl = CsiMatrix(oracle::random_matrix(2, 8, rng), Domain::AF);
    p.ul = CsiMatrix(oracle::random_matrix(2, 8, rng), Domain::AF);
    p.seed = 99;
    const ChannelPair q = quantize_to_storage(p);
    const Dataset ds = decode_dataset(encode_dataset(cfg, std::span<const ChannelPair>(&p, 1)));
    CHECK(ds.records[0].dl.data() == q.dl.data());
    CHECK(ds.records[0].ul.data() == q.ul.data());
}
