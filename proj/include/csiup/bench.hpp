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
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csiup/antialias.hpp"
#include "csiup/channel.hpp"
#include "csiup/ista.hpp"
#include "csiup/metrics.hpp"

namespace csiup {

enum class MethodKind { interp, ulmask, oraclemask, ista, ista_ra };

/// One recovery method as named on the command line, e.g.
/// "interp", "ulmask:R=1.0", "oraclemask", "ista:K=50", "ista_ra:K=50:R=1.0".
struct MethodSpec {
    std::string name;  // the original spec string; unique within a run
    MethodKind kind = MethodKind::interp;
    MaskConfig mask;
    UpsampleScale scale = UpsampleScale::pilot_spacing;
    IstaConfig ista;

    [[nodiscard]] bool uses_virtual_pilots() const {
        return kind == MethodKind::ista || kind == MethodKind::ista_ra;
    }
};

/// Keys: R, eps, scale=drs|none (mask methods); K, step, theta, decay, w0,
/// blend=linear|const, tol (ISTA methods). Throws InvalidArgument.
MethodSpec parse_method(const std::string& spec);
std::vector<MethodSpec> parse_methods(const std::string& comma_list);

struct BenchOptions {
    std::uint32_t virtual_start = 0;
    std::uint32_t virtual_len = 0;
    std::uint64_t master_seed = 0;
    double snr_db = std::numeric_limits<double>::infinity();     // DL pilot estimation noise
    double ul_snr_db = std::numeric_limits<double>::infinity();  // UL used for masks
    unsigned threads = 1;
};

/// Everything a run needs that is fixed across channels.
struct BenchContext {
    SystemConfig cfg;         // after truncation to n_pilots * pilot_spacing
    std::uint32_t n_sub_original = 0;
    TransformPlan plan;
    PilotPattern uniform;     // CSI-RS comb
    PilotPattern augmented;   // comb plus the virtual block

    BenchContext(const SystemConfig& dataset_cfg, const BenchOptions& opts);
};

struct Recovery {
    CsiMatrix h_hat;
    double nmse_db = 0.0;
    std::optional<SolverState> state;
};

/// Prepared observations of one channel; identical for every method.
struct ChannelObservation {
    CsiMatrix dl;      // truth, truncated
    CsiMatrix ul;      // possibly noisy, truncated
    CsiMatrix dl_obs;  // DL with estimation noise, the only source of pilots
};

ChannelObservation observe(const BenchContext& ctx, const ChannelPair& pair, std::size_t index,
                           const BenchOptions& opts);

Recovery recover(const BenchContext& ctx, const ChannelObservation& obs, const MethodSpec& method,
                 bool with_trace = false);

struct ClusterStats {
    std::size_t count = 0;
    double mean_nmse_db = std::numeric_limits<double>::quiet_NaN();
    double std_nmse_db = std::numeric_limits<double>::quiet_NaN();
    double ratio_nmse_db = std::numeric_limits<double>::quiet_NaN();  // 10 log10(mean ratio)

    friend bool operator==(const ClusterStats&, const ClusterStats&) = default;
};

/// Keyed by "ALL", "CL1", "CL2", "CL3".
using MethodStats = std::map<std::string, ClusterStats>;

struct ChannelScore {
    double delay_spread_s = 0.0;
    Cluster cluster = Cluster::CL1;
    std::vector<double> nmse_db;  // one per method, in method order
};

struct BenchReport {
    nlohmann::json config;
    std::vector<std::uint32_t> pattern;
    std::map<std::string, MethodStats> methods;
    std::string aggregation = "mean-db";
    std::vector<ChannelScore> channels;  // in-memory only, not serialized
};

BenchReport run_benchmark(const SystemConfig& cfg, std::span<const ChannelPair> dataset,
                          const std::vector<MethodSpec>& methods, const BenchOptions& opts);

/// Mean/std over per-channel dB values plus the ratio-domain aggregate.
ClusterStats aggregate(std::span<const double> nmse_db_values);

enum class ReportFormat { json, csv };

std::string report_to_json(const BenchReport& report);
std::string report_to_csv(const BenchReport& report);
BenchReport report_from_json(const std::string& text);
void export_report(const BenchReport& report, const std::filesystem::path& path, ReportFormat format);

nlohmann::json trace_to_json(const SolverState& state);

}  // namespace csiup
