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

#include "csiup/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "csiup/detail/parallel.hpp"

namespace csiup {

namespace {

using json = nlohmann::json;

const std::array<std::string, 4> cluster_keys{"ALL", "CL1", "CL2", "CL3"};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("method option " + key + "=" + value + " is not a number");
    }
}

std::uint32_t to_count(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (v < 1.0 || v != std::floor(v) || v > 1e7) {
        throw InvalidArgument("method option " + key + "=" + value + " must be a positive integer");
    }
    return static_cast<std::uint32_t>(v);
}

json number_or_tag(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double from_number_or_tag(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InvalidArgument("report: unexpected value " + s);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsiMatrix truncate(const CsiMatrix& h, std::uint32_t n_sub) {
    if (h.cols() == static_cast<Eigen::Index>(n_sub)) return h;
    return {h.data().leftCols(n_sub), h.domain()};
}

SystemConfig checked_truncation(const SystemConfig& cfg) {
    cfg.validate();
    return cfg.truncated();
}

}  // namespace

MethodSpec parse_method(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.empty() || parts[0].empty()) throw InvalidArgument("empty method spec");
    MethodSpec m;
    m.name = spec;
    const std::string& kind = parts[0];
    if (kind == "interp") m.kind = MethodKind::interp;
    else if (kind == "ulmask") m.kind = MethodKind::ulmask;
    else if (kind == "oraclemask") m.kind = MethodKind::oraclemask;
    else if (kind == "ista") m.kind = MethodKind::ista;
    else if (kind == "ista_ra") m.kind = MethodKind::ista_ra;
    else throw InvalidArgument("unknown method '" + kind + "'");

    const bool mask_opts = m.kind == MethodKind::ulmask || m.kind == MethodKind::oraclemask ||
                           m.kind == MethodKind::ista_ra;
    for (std::size_t p = 1; p < parts.size(); ++p) {
        const auto eq = parts[p].find('=');
        if (eq == std::string::npos) throw InvalidArgument("method option '" + parts[p] + "' lacks '='");
        const std::string key = parts[p].substr(0, eq);
        const std::string value = parts[p].substr(eq + 1);
        if (mask_opts && key == "R") {
            m.mask.r_level = to_double(key, value);
            if (!(m.mask.r_level >= 0.0)) throw InvalidArgument("R must be non-negative");
        } else if (mask_opts && key == "eps") {
            m.mask.epsilon = to_double(key, value);
        } else if ((m.kind == MethodKind::ulmask || m.kind == MethodKind::oraclemask) && key == "scale") {
            if (value == "drs") m.scale = UpsampleScale::pilot_spacing;
            else if (value == "none") m.scale = UpsampleScale::none;
            else throw InvalidArgument("scale must be drs or none");
        } else if (m.uses_virtual_pilots() && key == "K") {
            m.ista.phases = to_count(key, value);
        } else if (m.uses_virtual_pilots() && key == "step") {
            m.ista.steps = {to_double(key, value)};
        } else if (m.uses_virtual_pilots() && key == "theta") {
            m.ista.theta0_rel = to_double(key, value);
        } else if (m.uses_virtual_pilots() && key == "decay") {
            m.ista.decay = to_double(key, value);
        } else if (m.uses_virtual_pilots() && key == "w0") {
            m.ista.w0 = to_double(key, value);
        } else if (m.uses_virtual_pilots() && key == "blend") {
            if (value == "linear") m.ista.blend = BlendMode::linear_decay;
            else if (value == "const") m.ista.blend = BlendMode::constant;
            else throw InvalidArgument("blend must be linear or const");
        } else if (m.uses_virtual_pilots() && key == "tol") {
            m.ista.stop_tol = to_double(key, value);
        } else {
            throw InvalidArgument("option '" + key + "' not valid for method " + kind);
        }
    }
    if (m.uses_virtual_pilots()) m.ista.validate();
    return m;
}

std::vector<MethodSpec> parse_methods(const std::string& comma_list) {
    std::vector<MethodSpec> out;
    for (const auto& s : split(comma_list, ',')) {
        if (!s.empty()) out.push_back(parse_method(s));
    }
    return out;
}

BenchContext::BenchContext(const SystemConfig& dataset_cfg, const BenchOptions& opts)
    : cfg(checked_truncation(dataset_cfg)),
      n_sub_original(dataset_cfg.n_sub),
      plan(cfg),
      uniform(build_pattern(cfg, UniformKind{})),
      augmented(opts.virtual_len > 0 ? build_pattern(cfg, NonuniformKind{opts.virtual_start, opts.virtual_len})
                                     : uniform) {}

ChannelObservation observe(const BenchContext& ctx, const ChannelPair& pair, std::size_t index,
                           const BenchOptions& opts) {
    if (pair.dl.rows() != ctx.cfg.n_ant || pair.dl.cols() != ctx.n_sub_original ||
        pair.ul.rows() != pair.dl.rows() || pair.ul.cols() != pair.dl.cols()) {
        throw InvalidArgument("benchmark: channel " + std::to_string(index) + " does not match the dataset config");
    }
    ChannelObservation obs;
    obs.dl = truncate(pair.dl, ctx.cfg.n_sub);
    obs.ul = add_estimation_noise(truncate(pair.ul, ctx.cfg.n_sub), opts.ul_snr_db,
                                  derive_seed(derive_seed(opts.master_seed, 1), index));
    obs.dl_obs = add_estimation_noise(obs.dl, opts.snr_db, derive_seed(derive_seed(opts.master_seed, 0), index));
    return obs;
}

Recovery recover(const BenchContext& ctx, const ChannelObservation& obs, const MethodSpec& method, bool with_trace) {
    Recovery out;
    switch (method.kind) {
        case MethodKind::interp: {
            out.h_hat = linear_interp(sample(obs.dl_obs, ctx.uniform, SampleForm::compact), ctx.uniform);
            break;
        }
        case MethodKind::ulmask:
        case MethodKind::oraclemask: {
            const FilterMask mask = method.kind == MethodKind::ulmask
                                        ? build_ul_mask(obs.ul, ctx.plan, method.mask).mask
                                        : build_oracle_mask(obs.dl, ctx.plan, method.mask);
            out.h_hat = masked_upsample(sample(obs.dl_obs, ctx.uniform, SampleForm::compact), ctx.uniform, mask,
                                        ctx.plan, method.scale);
            break;
        }
        case MethodKind::ista:
        case MethodKind::ista_ra: {
            const CMatrix y = sample(obs.dl_obs, ctx.augmented, SampleForm::compact);
            std::optional<FilterMask> mask;
            if (method.kind == MethodKind::ista_ra) mask = build_ul_mask(obs.ul, ctx.plan, method.mask).mask;
            auto res = solve(y, ctx.augmented, ctx.plan, method.ista, mask ? &*mask : nullptr,
                             with_trace ? &obs.dl : nullptr);
            out.h_hat = std::move(res.h_hat);
            if (with_trace) out.state = std::move(res.state);
            break;
        }
    }
    out.nmse_db = nmse_db(out.h_hat, obs.dl);
    return out;
}

ClusterStats aggregate(std::span<const double> values) {
    ClusterStats s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0, ratio = 0.0;
    for (double v : values) {
        sum += v;
        ratio += std::pow(10.0, v / 10.0);
    }
    s.mean_nmse_db = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean_nmse_db) * (v - s.mean_nmse_db);
    s.std_nmse_db = std::isfinite(s.mean_nmse_db) ? std::sqrt(var / static_cast<double>(values.size()))
                                                   : std::numeric_limits<double>::quiet_NaN();
    s.ratio_nmse_db = ratio > 0.0 ? 10.0 * std::log10(ratio / static_cast<double>(values.size()))
                                  : -std::numeric_limits<double>::infinity();
    return s;
}

BenchReport run_benchmark(const SystemConfig& cfg, std::span<const ChannelPair> dataset,
                          const std::vector<MethodSpec>& methods, const BenchOptions& opts) {
    if (methods.empty()) throw InvalidArgument("run_benchmark: no methods given");
    if (dataset.empty()) throw InvalidArgument("run_benchmark: empty dataset");
    std::set<std::string> names;
    for (const auto& m : methods) {
        if (!names.insert(m.name).second) throw InvalidArgument("run_benchmark: duplicate method " + m.name);
        if (m.uses_virtual_pilots()) m.ista.validate();
    }
    const BenchContext ctx(cfg, opts);

    BenchReport report;
    report.channels.resize(dataset.size());
    detail::parallel_for(dataset.size(), opts.threads, [&](std::size_t k) {
        const ChannelObservation obs = observe(ctx, dataset[k], k, opts);
        ChannelScore& score = report.channels[k];
        score.delay_spread_s = rms_delay_spread_s(obs.dl, ctx.plan, ctx.cfg.subcarrier_spacing_hz);
        score.cluster = cluster(score.delay_spread_s);
        score.nmse_db.reserve(methods.size());
        for (const auto& m : methods) score.nmse_db.push_back(recover(ctx, obs, m).nmse_db);
    });

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        std::array<std::vector<double>, 4> buckets;
        for (const auto& ch : report.channels) {
            buckets[0].push_back(ch.nmse_db[mi]);
            buckets[1 + static_cast<int>(ch.cluster)].push_back(ch.nmse_db[mi]);
        }
        MethodStats stats;
        for (std::size_t c = 0; c < cluster_keys.size(); ++c) stats[cluster_keys[c]] = aggregate(buckets[c]);
        report.methods[methods[mi].name] = std::move(stats);
    }

    report.pattern = ctx.augmented.indices;
    json seeds = json::array();
    for (const auto& rec : dataset) seeds.push_back(rec.seed);
    json method_list = json::array();
    for (const auto& m : methods) method_list.push_back(m.name);
    report.config = {
        {"n_ant", ctx.cfg.n_ant},
        {"n_sub", ctx.cfg.n_sub},
        {"n_sub_original", ctx.n_sub_original},
        {"truncated", ctx.cfg.n_sub != ctx.n_sub_original},
        {"pilot_spacing", ctx.cfg.pilot_spacing},
        {"n_pilots", ctx.cfg.n_pilots},
        {"subcarrier_spacing_hz", ctx.cfg.subcarrier_spacing_hz},
        {"virtual_start", opts.virtual_start},
        {"virtual_len", opts.virtual_len},
        {"master_seed", opts.master_seed},
        {"snr_db", number_or_tag(opts.snr_db)},
        {"ul_snr_db", number_or_tag(opts.ul_snr_db)},
        {"channel_count", dataset.size()},
        {"channel_seeds", seeds},
        {"methods", method_list},
        {"uniform_pattern", ctx.uniform.indices},
        {"ratio_aggregate", "10*log10(sum(ratio)/count)"},
    };
    return report;
}

std::string report_to_json(const BenchReport& report) {
    json methods = json::object();
    for (const auto& [name, stats] : report.methods) {
        json per = json::object();
        for (const auto& [key, s] : stats) {
            per[key] = {{"count", s.count},
                        {"mean_nmse_db", number_or_tag(s.mean_nmse_db)},
                        {"std_nmse_db", number_or_tag(s.std_nmse_db)},
                        {"ratio_nmse_db", number_or_tag(s.ratio_nmse_db)}};
        }
        methods[name] = per;
    }
    const json doc = {{"config", report.config},
                      {"pattern", report.pattern},
                      {"methods", methods},
                      {"aggregation", report.aggregation}};
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const BenchReport& report) {
    std::string out = "method,cluster,count,mean_nmse_db,std_nmse_db\n";
    for (const auto& [name, stats] : report.methods) {
        for (const auto& key : cluster_keys) {
            const auto it = stats.find(key);
            if (it == stats.end()) continue;
            const auto& s = it->second;
            out += name + "," + key + "," + std::to_string(s.count) + "," + format_number(s.mean_nmse_db) + "," +
                   format_number(s.std_nmse_db) + "\n";
        }
    }
    return out;
}

BenchReport report_from_json(const std::string& text) {
    const json doc = json::parse(text);
    BenchReport report;
    report.config = doc.at("config");
    report.pattern = doc.at("pattern").get<std::vector<std::uint32_t>>();
    report.aggregation = doc.at("aggregation").get<std::string>();
    for (const auto& [name, per] : doc.at("methods").items()) {
        MethodStats stats;
        for (const auto& [key, s] : per.items()) {
            ClusterStats cs;
            cs.count = s.at("count").get<std::size_t>();
            cs.mean_nmse_db = from_number_or_tag(s.at("mean_nmse_db"));
            cs.std_nmse_db = from_number_or_tag(s.at("std_nmse_db"));
            if (s.contains("ratio_nmse_db")) cs.ratio_nmse_db = from_number_or_tag(s.at("ratio_nmse_db"));
            stats[key] = cs;
        }
        report.methods[name] = std::move(stats);
    }
    return report;
}

void export_report(const BenchReport& report, const std::filesystem::path& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("export_report: cannot open " + path.string());
    out << (format == ReportFormat::json ? report_to_json(report) : report_to_csv(report));
    if (!out) throw std::runtime_error("export_report: write to " + path.string() + " failed");
}

nlohmann::json trace_to_json(const SolverState& state) {
    json phases = json::array();
    for (std::size_t k = 0; k < state.trace.size(); ++k) {
        const auto& rec = state.trace[k];
        json row = {{"phase", k},
                    {"objective", number_or_tag(rec.objective)},
                    {"iterate_delta", number_or_tag(rec.iterate_delta)},
                    {"theta", number_or_tag(rec.theta)}};
        row["nmse_db"] = rec.nmse_db ? number_or_tag(*rec.nmse_db) : json(nullptr);
        phases.push_back(row);
    }
    return {{"phases_run", state.k}, {"trace", phases}};
}

}  // namespace csiup
