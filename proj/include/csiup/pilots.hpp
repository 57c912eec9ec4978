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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csiup/types.hpp"

namespace csiup {

/// Observed subcarrier set: uniform CSI-RS comb, optionally joined with a
/// contiguous block of virtual pilots (synchronization/broadcast subcarriers).
struct PilotPattern {
    std::uint32_t n_sub = 0;
    std::vector<std::uint32_t> indices;  // strictly increasing, all < n_sub
    std::optional<std::uint32_t> uniform_spacing;
    std::optional<std::uint32_t> uniform_count;
    std::optional<std::uint32_t> virtual_start;
    std::optional<std::uint32_t> virtual_len;

    [[nodiscard]] std::size_t size() const { return indices.size(); }

    /// Uniform comb only, anchored at 0 and covering n_sub exactly.
    [[nodiscard]] bool is_pure_uniform() const;

    /// Subcarriers of the uniform part, {0, D, ..., (M-1)D}.
    [[nodiscard]] std::vector<std::uint32_t> uniform_indices() const;

    friend bool operator==(const PilotPattern&, const PilotPattern&) = default;
};

struct UniformKind {};
struct NonuniformKind {
    std::uint32_t virtual_start = 0;  // I
    std::uint32_t virtual_len = 0;    // P
};

PilotPattern build_pattern(const SystemConfig& cfg, UniformKind);
PilotPattern build_pattern(const SystemConfig& cfg, NonuniformKind kind);

/// Pattern from an explicit index list; sorted and deduplicated.
PilotPattern pattern_from_indices(std::uint32_t n_sub, std::vector<std::uint32_t> indices);

enum class SampleForm { compact, zero_filled };

/// Column selection of an AF-domain channel: n_ant x |pattern| (compact) or
/// n_ant x n_sub with zeros off-pattern (zero_filled).
CMatrix sample(const CsiMatrix& h, const PilotPattern& pattern, SampleForm form);

/// Scatter compact pilot columns into an n_ant x n_sub zero matrix.
CMatrix embed(const CMatrix& compact, const PilotPattern& pattern);

}  // namespace csiup
