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

#include "csiup/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "csiup/detail/parallel.hpp"

namespace csiup {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
constexpr int max_draw_attempts = 64;

bool integral(double v) { return std::floor(v) == v; }

double power_weighted_std(const std::vector<double>& delays, const std::vector<double>& powers) {
    double total = 0.0, mean = 0.0;
    for (std::size_t p = 0; p < delays.size(); ++p) {
        total += powers[p];
        mean += powers[p] * delays[p];
    }
    mean /= total;
    double var = 0.0;
    for (std::size_t p = 0; p < delays.size(); ++p) var += powers[p] * (delays[p] - mean) * (delays[p] - mean);
    return std::sqrt(var / total);
}

void validate_spec(const MultipathSpec& spec, const SystemConfig& cfg) {
    if (spec.paths.empty()) throw InvalidArgument("synth_channel_pair: no paths");
    bool any_gain = false;
    for (const auto& p : spec.paths) {
        if (!(p.delay_tap >= 0.0 && p.delay_tap < cfg.n_sub)) {
            throw InvalidArgument("synth_channel_pair: delay tap " + std::to_string(p.delay_tap) +
                                  " outside [0, " + std::to_string(cfg.n_sub) + ")");
        }
        if (!(p.beam >= 0.0 && p.beam < cfg.n_ant)) {
            throw InvalidArgument("synth_channel_pair: beam " + std::to_string(p.beam) + " outside [0, " +
                                  std::to_string(cfg.n_ant) + ")");
        }
        any_gain = any_gain || p.gain_dl != 0.0 || p.gain_ul != 0.0;
    }
    if (!any_gain) throw InvalidArgument("synth_channel_pair: all path gains are zero");
}

CMatrix grid_channel(const MultipathSpec& spec, const SystemConfig& cfg, const TransformPlan& plan, bool dl) {
    CMatrix bd = CMatrix::Zero(cfg.n_ant, cfg.n_sub);
    for (const auto& p : spec.paths) {
        bd(static_cast<Eigen::Index>(p.beam), static_cast<Eigen::Index>(p.delay_tap)) += dl ? p.gain_dl : p.gain_ul;
    }
    return bd_inverse(CsiMatrix(std::move(bd), Domain::BD), plan).data();
}

CMatrix leaky_channel(const MultipathSpec& spec, const SystemConfig& cfg, bool dl) {
    const double na = cfg.n_ant, nf = cfg.n_sub;
    const double scale = 1.0 / std::sqrt(na * nf);
    CMatrix h = CMatrix::Zero(cfg.n_ant, cfg.n_sub);
    Eigen::Matrix<cdouble, Eigen::Dynamic, 1> steer(cfg.n_ant);
    Eigen::Matrix<cdouble, 1, Eigen::Dynamic> freq(cfg.n_sub);
    for (const auto& p : spec.paths) {
        for (std::uint32_t a = 0; a < cfg.n_ant; ++a) {
            steer(a) = std::polar(1.0, 2.0 * std::numbers::pi * a * p.beam / na);
        }
        for (std::uint32_t f = 0; f < cfg.n_sub; ++f) {
            freq(f) = std::polar(1.0, -2.0 * std::numbers::pi * f * p.delay_tap / nf);
        }
        h.noalias() += ((dl ? p.gain_dl : p.gain_ul) * scale) * (steer * freq);
    }
    return h;
}

}  // namespace

bool MultipathSpec::on_grid() const {
    return std::all_of(paths.begin(), paths.end(),
                       [](const PathSpec& p) { return integral(p.delay_tap) && integral(p.beam); });
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += golden_gamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base + (index + 1) * golden_gamma);
}

MultipathSpec draw_multipath(const GeneratorParams& params, const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (params.n_paths == 0) throw InvalidArgument("draw_multipath: n_paths must be at least 1");
    if (!(params.rms_delay_spread_s >= 0.0) || !std::isfinite(params.rms_delay_spread_s)) {
        throw InvalidArgument("draw_multipath: RMS delay spread must be finite and non-negative");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> shadow_db(0.0, 3.0);
    const double two_pi = 2.0 * std::numbers::pi;
    const std::size_t n = params.n_paths;

    for (int attempt = 0; attempt < max_draw_attempts; ++attempt) {
        std::vector<double> delays(n), powers(n);
        for (auto& d : delays) d = -std::log1p(-unit(rng));
        const double first = *std::min_element(delays.begin(), delays.end());
        for (std::size_t p = 0; p < n; ++p) {
            delays[p] -= first;
            powers[p] = std::exp(-delays[p]) * std::pow(10.0, shadow_db(rng) / 10.0);
        }
        const double spread = power_weighted_std(delays, powers);
        const double scale = (spread > 0.0 && params.rms_delay_spread_s > 0.0)
                                 ? params.rms_delay_spread_s / spread / cfg.tap_seconds()
                                 : 0.0;
        double total = 0.0;
        for (double p : powers) total += p;

        MultipathSpec spec;
        spec.paths.reserve(n);
        bool fits = true;
        for (std::size_t p = 0; p < n; ++p) {
            PathSpec path;
            path.delay_tap = delays[p] * scale;
            path.beam = unit(rng) * cfg.n_ant;
            if (params.on_grid) {
                path.delay_tap = std::round(path.delay_tap);
                path.beam = std::min(std::floor(path.beam), cfg.n_ant - 1.0);
            }
            const double mag = std::sqrt(powers[p] / total);
            path.gain_dl = std::polar(mag, two_pi * unit(rng));
            path.gain_ul = std::polar(mag, two_pi * unit(rng));
            fits = fits && path.delay_tap < cfg.n_sub;
            spec.paths.push_back(path);
        }
        if (fits) return spec;
    }
    throw InvalidArgument("draw_multipath: RMS delay spread " + std::to_string(params.rms_delay_spread_s * 1e9) +
                          " ns keeps producing delays beyond " + std::to_string(cfg.n_sub) + " taps");
}

ChannelPair synth_channel_pair(const MultipathSpec& spec, const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    validate_spec(spec, cfg);
    ChannelPair pair;
    pair.seed = seed;
    pair.truth = spec;
    if (spec.on_grid()) {
        const TransformPlan plan(cfg);
        pair.dl = CsiMatrix(grid_channel(spec, cfg, plan, true), Domain::AF);
        pair.ul = CsiMatrix(grid_channel(spec, cfg, plan, false), Domain::AF);
    } else {
        pair.dl = CsiMatrix(leaky_channel(spec, cfg, true), Domain::AF);
        pair.ul = CsiMatrix(leaky_channel(spec, cfg, false), Domain::AF);
    }
    return pair;
}

ChannelPair synth_channel_pair(const GeneratorParams& params, const SystemConfig& cfg, std::uint64_t seed) {
    return synth_channel_pair(draw_multipath(params, cfg, seed), cfg, seed);
}

std::vector<ChannelPair> synth_dataset(const GeneratorParams& params, const SystemConfig& cfg,
                                       std::size_t count, std::uint64_t seed, unsigned threads) {
    std::vector<ChannelPair> out(count);
    detail::parallel_for(count, threads,
                         [&](std::size_t k) { out[k] = synth_channel_pair(params, cfg, derive_seed(seed, k)); });
    return out;
}

CsiMatrix add_estimation_noise(const CsiMatrix& h, double snr_db, std::uint64_t seed) {
    h.require(Domain::AF, "add_estimation_noise");
    if (std::isinf(snr_db) && snr_db > 0) return h;
    const double signal = h.data().squaredNorm() / static_cast<double>(h.data().size());
    const double sigma = std::sqrt(signal / std::pow(10.0, snr_db / 10.0) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    CMatrix out = h.data();
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        out.data()[k] += cdouble(re, im);
    }
    return {std::move(out), Domain::AF};
}

CsiMatrix circular_shift_augment(const CsiMatrix& h, std::int64_t shift, const TransformPlan& plan) {
    h.require(Domain::AF, "circular_shift_augment");
    CMatrix beams = h.data();
    plan.beam_transform(beams, true);
    const auto n = static_cast<std::int64_t>(plan.n_ant());
    const auto s = ((shift % n) + n) % n;
    CMatrix rolled(beams.rows(), beams.cols());
    for (std::int64_t b = 0; b < n; ++b) rolled.row((b + s) % n) = beams.row(b);
    plan.beam_transform(rolled, false);
    return {std::move(rolled), Domain::AF};
}

}  // namespace csiup
