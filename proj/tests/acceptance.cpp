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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "csiup/bench.hpp"
#include "csiup/dataset.hpp"
#include "oracle.hpp"

using namespace csiup;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

PilotPattern random_pattern(std::uint32_t n_sub, std::mt19937_64& rng) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t k = 0; k < n_sub; ++k) {
        if (rng() % 2 == 0) idx.push_back(k);
    }
    if (idx.empty()) idx.push_back(static_cast<std::uint32_t>(rng() % n_sub));
    return pattern_from_indices(n_sub, idx);
}

// 1
Outcome fold_identity() {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> cases{{16, 2}, {24, 3}, {64, 4}, {660, 12}};
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const auto [n_sub, d_rs] = cases[n % cases.size()];
        const std::uint32_t n_ant = 1 + static_cast<std::uint32_t>(rng() % 8);
        const SystemConfig cfg = make_config(n_ant, n_sub, d_rs);
        const TransformPlan plan(cfg);
        const auto pattern = build_pattern(cfg, UniformKind{});
        const CsiMatrix h(oracle::random_matrix(n_ant, n_sub, rng), Domain::AF);
        const CMatrix lhs = bd_forward(zero_insert(sample(h, pattern, SampleForm::compact), pattern), plan).data();
        const CMatrix rhs = aliasing_fold(bd_forward(h, plan), d_rs).data();
        worst = std::max(worst, max_abs(lhs - rhs));
    }
    return {worst <= 1e-10, fmt("1000 channels, max elementwise error %.3g (limit 1e-10)", worst)};
}

// 2
Outcome exact_recovery() {
    const SystemConfig cfg = make_config(8, 240, 12);
    const TransformPlan plan(cfg);
    const auto pattern = build_pattern(cfg, UniformKind{});
    const std::vector<double> spreads{300e-9, 800e-9, 1500e-9, 3000e-9};
    int kept = 0, aliased = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; kept < 500; ++seed) {
        const GeneratorParams gp{8, spreads[seed % spreads.size()], true};
        const auto pair = synth_channel_pair(gp, cfg, derive_seed(202, seed));
        const CsiMatrix bd = bd_forward(pair.dl, plan);
        if (!bin_isolated(bd, cfg.pilot_spacing, 1e-12)) continue;
        ++kept;
        bool beyond = false;
        for (const auto& p : pair.truth->paths) beyond = beyond || p.delay_tap >= cfg.n_pilots;
        aliased += beyond;
        const FilterMask mask = build_oracle_mask(pair.dl, plan, MaskConfig{});
        const CsiMatrix est = masked_upsample(sample(pair.dl, pattern, SampleForm::compact), pattern, mask, plan);
        worst = std::max(worst, (est.data() - pair.dl.data()).norm() / pair.dl.data().norm());
    }
    return {worst <= 1e-10, fmt("500 channels (%d with paths beyond the fold period), worst relative error %.3g "
                                "(limit 1e-10)",
                                aliased, worst)};
}

// 3
Outcome transform_hygiene() {
    std::mt19937_64 rng(303);
    double round_trip = 0.0, parseval = 0.0;
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes{{1, 16}, {4, 64}, {8, 240}, {8, 660},
                                                                      {3, 667}, {32, 96}};
    for (const auto& [na, nf] : shapes) {
        const TransformPlan plan(na, nf);
        for (int t = 0; t < 5; ++t) {
            const CsiMatrix h(oracle::random_matrix(na, nf, rng), Domain::AF);
            const double scale = h.data().cwiseAbs().maxCoeff();
            const CsiMatrix bd = bd_forward(h, plan);
            const CsiMatrix ad = ad_forward(h, plan);
            round_trip = std::max(round_trip, max_abs(bd_inverse(bd, plan).data() - h.data()) / scale);
            round_trip = std::max(round_trip, max_abs(ad_inverse(ad, plan).data() - h.data()) / scale);
            parseval = std::max(parseval, std::abs(bd.data().norm() - h.data().norm()) / h.data().norm());
            parseval = std::max(parseval, std::abs(ad.data().norm() - h.data().norm()) / h.data().norm());
        }
    }
    double adjoint = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::uint32_t n_sub = 8 + static_cast<std::uint32_t>(rng() % 120);
        const std::uint32_t n_ant = 1 + static_cast<std::uint32_t>(rng() % 8);
        const TransformPlan plan(n_ant, n_sub);
        const auto p = random_pattern(n_sub, rng);
        const CsiMatrix x(oracle::random_matrix(n_ant, n_sub, rng), Domain::AD);
        const CMatrix y = oracle::random_matrix(n_ant, static_cast<Eigen::Index>(p.size()), rng);
        const cdouble lhs = (sensing_apply(x, p, plan).array() * y.array().conjugate()).sum();
        const cdouble rhs = (x.data().array() * sensing_adjoint(y, p, plan).data().array().conjugate()).sum();
        adjoint = std::max(adjoint, std::abs(lhs - rhs) / (x.data().norm() * y.norm()));
    }
    const SystemConfig cfg = make_config(8, 240, 12);
    const TransformPlan plan(cfg);
    const auto p = build_pattern(cfg, NonuniformKind{100, 48});
    CsiMatrix v(oracle::random_matrix(8, 240, rng), Domain::AD);
    double norm = 0.0;
    for (int it = 0; it < 100; ++it) {
        const CsiMatrix w = sensing_adjoint(sensing_apply(v, p, plan), p, plan);
        norm = std::sqrt(w.data().norm() / v.data().norm());
        v = CsiMatrix(w.data() / w.data().norm(), Domain::AD);
    }
    const bool ok = round_trip <= 1e-12 && parseval <= 1e-12 && adjoint <= 1e-12 && std::abs(norm - 1.0) <= 1e-9;
    return {ok, fmt("round trip %.3g, Parseval %.3g, adjoint %.3g (limits 1e-12), operator norm %.12f", round_trip,
                    parseval, adjoint, norm)};
}

struct SmallInstance {
    TransformPlan plan;
    PilotPattern pattern;
    CMatrix y;
};

SmallInstance small_instance(std::mt19937_64& rng) {
    const std::uint32_t n_sub = 8 + static_cast<std::uint32_t>(rng() % 25);
    const std::uint32_t n_ant = 1 + static_cast<std::uint32_t>(rng() % 4);
    auto pattern = random_pattern(n_sub, rng);
    CMatrix y = oracle::random_matrix(n_ant, static_cast<Eigen::Index>(pattern.size()), rng);
    return {TransformPlan(n_ant, n_sub), std::move(pattern), std::move(y)};
}

// 4
Outcome ista_oracle() {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto inst = small_instance(rng);
        IstaConfig cfg;
        cfg.phases = 30;
        cfg.steps = {t % 2 ? 1.0 : 0.7};
        cfg.theta0_rel = 0.05;
        cfg.decay = 0.93;
        const oracle::Mat tm = oracle::sensing_matrix(static_cast<int>(inst.pattern.n_sub), inst.pattern.indices);
        const auto ref = oracle::ista(inst.y, tm, 30, cfg.steps[0], cfg.theta0_rel, cfg.decay);
        // Without a mask the schedule of phase k does not depend on K, so a
        // k-phase solve yields the k-th iterate.
        for (std::uint32_t k = 1; k <= 30; ++k) {
            IstaConfig ck = cfg;
            ck.phases = k;
            const auto res = solve(inst.y, inst.pattern, inst.plan, ck);
            worst = std::max(worst, max_abs(res.state.x.data() - ref[k - 1]));
        }
    }
    return {worst <= 1e-9, fmt("50 instances x 30 phases, max iterate deviation %.3g (limit 1e-9)", worst)};
}

// 5
Outcome objective_monotone() {
    std::mt19937_64 rng(505);
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
        const auto inst = small_instance(rng);
        IstaConfig cfg;
        cfg.phases = 50;
        cfg.steps = {1.0};
        cfg.decay = 1.0;
        cfg.theta0_rel = 0.01 + 0.02 * (t % 10);
        const auto res = solve(inst.y, inst.pattern, inst.plan, cfg);
        for (std::size_t k = 1; k < res.state.trace.size(); ++k) {
            worst_rise = std::max(worst_rise, res.state.trace[k].objective - res.state.trace[k - 1].objective);
        }
    }
    return {worst_rise <= 1e-10, fmt("100 instances, largest phase-to-phase change %.3g (slack 1e-10)", worst_rise)};
}

// 6
constexpr double sparse_theta0 = 0.3;
constexpr double sparse_decay = 0.965;
constexpr std::uint32_t sparse_block_start = 24;

Outcome sparse_recovery() {
    const SystemConfig cfg = make_config(1, 64, 4);
    const TransformPlan plan(cfg);
    const auto pattern = build_pattern(cfg, NonuniformKind{sparse_block_start, 16});
    IstaConfig ic;
    ic.phases = 200;
    ic.steps = {1.0};
    ic.theta0_rel = sparse_theta0;
    ic.decay = sparse_decay;
    int ok = 0;
    std::vector<double> scores;
    for (int s = 0; s < 200; ++s) {
        std::mt19937_64 rng(derive_seed(606, s));
        std::vector<int> taps(64);
        std::iota(taps.begin(), taps.end(), 0);
        std::shuffle(taps.begin(), taps.end(), rng);
        std::normal_distribution<double> n(0.0, 1.0);
        CMatrix ad = CMatrix::Zero(1, 64);
        for (int k = 0; k < 6; ++k) ad(0, taps[k]) = cdouble(n(rng), n(rng));
        const CsiMatrix h = ad_inverse(CsiMatrix(ad, Domain::AD), plan);
        const auto res = solve(sample(h, pattern, SampleForm::compact), pattern, plan, ic);
        const double e = nmse_db(res.h_hat, h);
        scores.push_back(e);
        ok += e <= -60.0;
    }
    std::sort(scores.begin(), scores.end());
    const double rate = ok / 200.0;
    return {rate >= 0.9, fmt("%d/200 seeds at or below -60 dB (%.1f%%, need 90%%), median %.1f dB, |pattern| %zu, "
                             "theta0 %.2f decay %.3f",
                             ok, 100.0 * rate, scores[100], pattern.size(), sparse_theta0, sparse_decay)};
}

// 7-9 share two synthetic sets.
struct TrendSet {
    std::string label;
    BenchReport report;
};

const std::vector<double> r_grid{0.25, 0.5, 1.0, 2.0, 4.0};

TrendSet run_trend_set(const std::string& label, double target_ds) {
    const SystemConfig cfg = make_config(8, 240, 12);
    const auto data = synth_dataset(GeneratorParams{10, target_ds, false}, cfg, 500, derive_seed(707, target_ds > 1e-6));
    std::string methods = "interp";
    for (double r : r_grid) methods += fmt(",ulmask:R=%g", r);
    methods += ",ista:K=50,ista_ra:K=50:R=1";
    BenchOptions opts;
    opts.virtual_start = 100;
    opts.virtual_len = 48;
    opts.master_seed = 7;
    return {label, run_benchmark(cfg, data, parse_methods(methods), opts)};
}

double mean_db(const TrendSet& s, const std::string& method) {
    return s.report.methods.at(method).at("ALL").mean_nmse_db;
}

std::pair<double, double> best_r(const TrendSet& s) {
    double best = std::numeric_limits<double>::infinity(), arg = r_grid.front();
    for (double r : r_grid) {
        const double v = mean_db(s, fmt("ulmask:R=%g", r));
        if (v < best) best = v, arg = r;
    }
    return {arg, best};
}

std::string composition(const TrendSet& s) {
    const auto& st = s.report.methods.at("interp");
    return fmt("measured CL1/CL2/CL3 %zu/%zu/%zu", st.at("CL1").count, st.at("CL2").count, st.at("CL3").count);
}

Outcome anti_aliasing_trend(const TrendSet& cl1, const TrendSet& cl3) {
    const auto [r1, u1] = best_r(cl1);
    const auto [r3, u3] = best_r(cl3);
    const double gap1 = mean_db(cl1, "interp") - u1;
    const double gap3 = mean_db(cl3, "interp") - u3;
    return {gap3 >= 3.0 && gap1 < gap3,
            fmt("CL3-analog: interp %.2f dB, ulmask(R=%g) %.2f dB, gain %.2f dB (need >= 3); CL1-analog: interp %.2f "
                "dB, ulmask(R=%g) %.2f dB, gain %.2f dB (need < CL3 gain)",
                mean_db(cl3, "interp"), r3, u3, gap3, mean_db(cl1, "interp"), r1, u1, gap1)};
}

Outcome r_sweep_trend(const TrendSet& cl1, const TrendSet& cl3) {
    std::string curve;
    for (const auto* s : {&cl1, &cl3}) {
        curve += s->label + " [";
        for (double r : r_grid) curve += fmt(" %g:%.2f", r, mean_db(*s, fmt("ulmask:R=%g", r)));
        curve += " ] ";
    }
    const double r1 = best_r(cl1).first, r3 = best_r(cl3).first;
    return {r3 >= r1, fmt("best R CL3-analog %g >= CL1-analog %g; %s", r3, r1, curve.c_str())};
}

Outcome ra_benefit(const TrendSet& cl3) {
    const double plain = mean_db(cl3, "ista:K=50");
    const double ra = mean_db(cl3, "ista_ra:K=50:R=1");
    return {plain - ra >= 3.0,
            fmt("CL3-analog: ista %.2f dB, ista_ra %.2f dB, gain %.2f dB (need >= 3)", plain, ra, plain - ra)};
}

// 10
Outcome clusters_and_round_trips() {
    bool ok = true;
    std::string why;
    auto expect = [&](bool cond, const char* what) {
        if (!cond) {
            ok = false;
            why += std::string(" ") + what;
        }
    };
    expect(cluster(std::nextafter(500e-9, 0.0)) == Cluster::CL1, "below-500");
    expect(cluster(500e-9) == Cluster::CL2, "at-500");
    expect(cluster(1000e-9) == Cluster::CL2, "at-1000");
    expect(cluster(std::nextafter(1000e-9, 1.0)) == Cluster::CL3, "above-1000");
    expect(cluster(400e-9) == Cluster::CL1 && cluster(700e-9) == Cluster::CL2 && cluster(1500e-9) == Cluster::CL3,
           "examples");

    const SystemConfig cfg = make_config(4, 96, 12);
    const GeneratorParams gp{6, 700e-9, false};
    const auto a = synth_dataset(gp, cfg, 30, 1010);
    const auto b = synth_dataset(gp, cfg, 30, 1010, 4);
    const auto bytes_a = encode_dataset(cfg, a);
    expect(bytes_a == encode_dataset(cfg, b), "dataset-determinism");
    const Dataset back = decode_dataset(bytes_a);
    expect(encode_dataset(back.cfg, back.records) == bytes_a, "dataset-round-trip");

    const auto methods = parse_methods("interp,ulmask:R=1,oraclemask:eps=1e-5,ista:K=20,ista_ra:K=20:R=1");
    BenchOptions opts;
    opts.virtual_start = 40;
    opts.virtual_len = 16;
    opts.master_seed = 11;
    opts.snr_db = 25.0;
    const auto ra = report_to_json(run_benchmark(back.cfg, back.records, methods, opts));
    opts.threads = 3;
    const auto rb = report_to_json(run_benchmark(back.cfg, back.records, methods, opts));
    expect(ra == rb, "report-determinism");
    expect(report_to_json(report_from_json(ra)) == ra, "report-round-trip");
    return {ok, ok ? fmt("boundaries exact; dataset (%zu bytes) and report (%zu bytes) round trips byte-identical",
                         bytes_a.size(), ra.size())
                   : "failed:" + why};
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& run, double limit_s) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        std::string timing = fmt("%.2f s", secs);
        if (limit_s > 0) {
            timing += fmt(" (limit %.0f s)", limit_s);
            if (secs >= limit_s) {
                o.pass = false;
                o.detail += "; too slow";
            }
        }
        failures += !o.pass;
        std::printf("[%s] %2d %-28s %s [%s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    };

    report(1, "fold identity", fold_identity, 30);
    report(2, "exact masked recovery", exact_recovery, 30);
    report(3, "transform hygiene", transform_hygiene, 0);
    report(4, "ISTA oracle equivalence", ista_oracle, 0);
    report(5, "ISTA objective monotone", objective_monotone, 0);
    report(6, "sparse recovery", sparse_recovery, 120);

    const auto t0 = clock::now();
    TrendSet cl1, cl3;
    std::string set_error;
    try {
        cl1 = run_trend_set("CL1-analog", 200e-9);
        cl3 = run_trend_set("CL3-analog", 2000e-9);
        std::printf("       trend sets: 2 x 500 off-grid channels, 8 x 240, D_RS 12, target RMS spread 200 / 2000 ns "
                    "(%s | %s) [%.2f s]\n",
                    composition(cl1).c_str(), composition(cl3).c_str(),
                    std::chrono::duration<double>(clock::now() - t0).count());
    } catch (const std::exception& e) {
        set_error = e.what();
    }
    auto on_sets = [&](auto fn) {
        return [&, fn]() -> Outcome {
            if (!set_error.empty()) return {false, "trend sets unavailable: " + set_error};
            return fn();
        };
    };
    report(7, "anti-aliasing trend", on_sets([&] { return anti_aliasing_trend(cl1, cl3); }), 0);
    report(8, "R-sweep trend", on_sets([&] { return r_sweep_trend(cl1, cl3); }), 0);
    report(9, "reciprocity-assist benefit", on_sets([&] { return ra_benefit(cl3); }), 0);
    report(10, "clusters and round trips", clusters_and_round_trips, 0);

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
