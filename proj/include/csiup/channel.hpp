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
#include <vector>

#include "csiup/transforms.hpp"
#include "csiup/types.hpp"

namespace csiup {

/// One propagation path. Integral delay_tap/beam values lie on the DFT grid;
/// fractional ones leak across neighbouring bins. DL and UL share geometry
/// (delay, beam) and differ only in the complex gain.
struct PathSpec {
    double delay_tap = 0.0;  // [0, n_sub)
    double beam = 0.0;       // [0, n_ant)
    cdouble gain_dl{1.0, 0.0};
    cdouble gain_ul{1.0, 0.0};

    friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

struct MultipathSpec {
    std::vector<PathSpec> paths;

    [[nodiscard]] bool on_grid() const;

    friend bool operator==(const MultipathSpec&, const MultipathSpec&) = default;
};

/// Random geometry drawn by the built-in generator.
struct GeneratorParams {
    std::uint32_t n_paths = 10;
    double rms_delay_spread_s = 300e-9;
    bool on_grid = true;
};

struct ChannelPair {
    CsiMatrix dl;
    CsiMatrix ul;
    std::optional<MultipathSpec> truth;
    std::uint64_t seed = 0;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-record seed: splitmix64(base + (index + 1) * golden_gamma). Independent
/// of generation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Draw a path geometry: exponential delays rescaled so the power-weighted
/// RMS spread equals the request (before on-grid rounding), first path at 0,
/// beams uniform, |gain_ul| == |gain_dl| with independent phases.
MultipathSpec draw_multipath(const GeneratorParams& params, const SystemConfig& cfg, std::uint64_t seed);

/// Build DL/UL channels from a given geometry.
ChannelPair synth_channel_pair(const MultipathSpec& spec, const SystemConfig& cfg, std::uint64_t seed);

/// draw_multipath followed by synth_channel_pair.
ChannelPair synth_channel_pair(const GeneratorParams& params, const SystemConfig& cfg, std::uint64_t seed);

/// `count` pairs with seeds derive_seed(seed, k). Uses up to `threads` workers.
std::vector<ChannelPair> synth_dataset(const GeneratorParams& params, const SystemConfig& cfg,
                                       std::size_t count, std::uint64_t seed, unsigned threads = 1);

/// Adds CN(0, s2) noise, s2 = mean |h|^2 / 10^(snr_db/10). snr_db = +inf is a no-op.
CsiMatrix add_estimation_noise(const CsiMatrix& h, double snr_db, std::uint64_t seed);

/// Rotate the beam axis by `shift` (mod n_ant) and return to the antenna domain.
CsiMatrix circular_shift_augment(const CsiMatrix& h, std::int64_t shift, const TransformPlan& plan);

}  // namespace csiup
