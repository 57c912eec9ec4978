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

#include "csiup/pilots.hpp"

#include <algorithm>
#include <string>

namespace csiup {

namespace {

void check_indices(const PilotPattern& p) {
    for (std::size_t k = 0; k < p.indices.size(); ++k) {
        if (p.indices[k] >= p.n_sub) {
            throw InvalidArgument("PilotPattern: index " + std::to_string(p.indices[k]) +
                                  " out of range for n_sub=" + std::to_string(p.n_sub));
        }
        if (k > 0 && p.indices[k] <= p.indices[k - 1]) {
            throw InvalidArgument("PilotPattern: indices must be strictly increasing");
        }
    }
}

PilotPattern uniform_part(const SystemConfig& cfg) {
    cfg.validate();
    if (static_cast<std::uint64_t>(cfg.pilot_spacing) * (cfg.n_pilots - 1) >= cfg.n_sub) {
        throw InvalidArgument("build_pattern: last CSI-RS pilot falls outside the band");
    }
    PilotPattern p;
    p.n_sub = cfg.n_sub;
    p.uniform_spacing = cfg.pilot_spacing;
    p.uniform_count = cfg.n_pilots;
    p.indices.reserve(cfg.n_pilots);
    for (std::uint32_t m = 0; m < cfg.n_pilots; ++m) p.indices.push_back(m * cfg.pilot_spacing);
    return p;
}

}  // namespace

bool PilotPattern::is_pure_uniform() const {
    if (!uniform_spacing || !uniform_count) return false;
    if (virtual_len && *virtual_len > 0) return false;
    return *uniform_spacing * *uniform_count == n_sub && indices.size() == *uniform_count;
}

std::vector<std::uint32_t> PilotPattern::uniform_indices() const {
    std::vector<std::uint32_t> out;
    if (!uniform_spacing || !uniform_count) return out;
    for (std::uint32_t m = 0; m < *uniform_count; ++m) out.push_back(m * *uniform_spacing);
    return out;
}

PilotPattern build_pattern(const SystemConfig& cfg, UniformKind) { return uniform_part(cfg); }

PilotPattern build_pattern(const SystemConfig& cfg, NonuniformKind kind) {
    PilotPattern p = uniform_part(cfg);
    if (static_cast<std::uint64_t>(kind.virtual_start) + kind.virtual_len > cfg.n_sub) {
        throw InvalidArgument("build_pattern: virtual block [" + std::to_string(kind.virtual_start) +
                              ", " + std::to_string(kind.virtual_start + kind.virtual_len) +
                              ") exceeds n_sub=" + std::to_string(cfg.n_sub));
    }
    p.virtual_start = kind.virtual_start;
    p.virtual_len = kind.virtual_len;
    for (std::uint32_t k = 0; k < kind.virtual_len; ++k) p.indices.push_back(kind.virtual_start + k);
    std::sort(p.indices.begin(), p.indices.end());
    p.indices.erase(std::unique(p.indices.begin(), p.indices.end()), p.indices.end());
    return p;
}

PilotPattern pattern_from_indices(std::uint32_t n_sub, std::vector<std::uint32_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    PilotPattern p;
    p.n_sub = n_sub;
    p.indices = std::move(indices);
    check_indices(p);
    return p;
}

CMatrix sample(const CsiMatrix& h, const PilotPattern& pattern, SampleForm form) {
    h.require(Domain::AF, "sample");
    if (h.cols() != static_cast<Eigen::Index>(pattern.n_sub)) {
        throw InvalidArgument("sample: channel has " + std::to_string(h.cols()) +
                              " subcarriers, pattern expects " + std::to_string(pattern.n_sub));
    }
    const CMatrix& src = h.data();
    if (form == SampleForm::compact) {
        CMatrix out(src.rows(), static_cast<Eigen::Index>(pattern.size()));
        for (std::size_t k = 0; k < pattern.size(); ++k) {
            out.col(static_cast<Eigen::Index>(k)) = src.col(pattern.indices[k]);
        }
        return out;
    }
    CMatrix out = CMatrix::Zero(src.rows(), src.cols());
    for (auto idx : pattern.indices) out.col(idx) = src.col(idx);
    return out;
}

CMatrix embed(const CMatrix& compact, const PilotPattern& pattern) {
    if (compact.cols() != static_cast<Eigen::Index>(pattern.size())) {
        throw InvalidArgument("embed: " + std::to_string(compact.cols()) +
                              " columns for a pattern of " + std::to_string(pattern.size()));
    }
    CMatrix out = CMatrix::Zero(compact.rows(), pattern.n_sub);
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        out.col(pattern.indices[k]) = compact.col(static_cast<Eigen::Index>(k));
    }
    return out;
}

}  // namespace csiup
