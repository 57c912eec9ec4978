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

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "csiup/bench.hpp"
#include "csiup/dataset.hpp"

namespace {

using namespace csiup;

struct SynthArgs {
    std::uint32_t n_ant = 8;
    std::uint32_t n_sub = 240;
    std::uint32_t d_rs = 12;
    std::uint32_t n_pilots = 0;  // 0: floor(n_sub / d_rs)
    std::uint32_t paths = 10;
    double rms_ds_ns = 300.0;
    bool on_grid = true;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    double scs_hz = 15e3;
    unsigned threads = 0;
    std::string out;
};

struct BenchArgs {
    std::string dataset;
    std::string methods = "interp,ulmask:R=1.0,oraclemask:eps=1e-6,ista:K=50,ista_ra:K=50:R=1.0";
    BenchOptions opts;
    std::string out;
    std::string format = "json";
};

struct RecoverArgs {
    std::string dataset;
    std::size_t index = 0;
    std::string method = "ista_ra:K=50:R=1.0";
    BenchOptions opts;
    std::string trace;
};

int run_synth(const SynthArgs& a) {
    SystemConfig cfg = make_config(a.n_ant, a.n_sub, a.d_rs, a.scs_hz);
    if (a.n_pilots != 0) {
        cfg.n_pilots = a.n_pilots;
        cfg.validate();
    }
    const GeneratorParams params{a.paths, a.rms_ds_ns * 1e-9, a.on_grid};
    const auto records = synth_dataset(params, cfg, a.count, a.seed, a.threads);
    write_dataset(a.out, cfg, records);
    std::cout << "wrote " << records.size() << " channel pairs (" << cfg.n_ant << "x" << cfg.n_sub << ", D_RS "
              << cfg.pilot_spacing << ", M_f " << cfg.n_pilots << ") to " << a.out << "\n";
    return 0;
}

void print_summary(const BenchReport& report) {
    std::printf("%-32s %-4s %7s %12s %10s\n", "method", "set", "count", "mean [dB]", "std [dB]");
    for (const auto& [name, stats] : report.methods) {
        for (const auto& [key, s] : stats) {
            std::printf("%-32s %-4s %7zu %12.3f %10.3f\n", name.c_str(), key.c_str(), s.count, s.mean_nmse_db,
                        s.std_nmse_db);
        }
    }
}

int run_bench(const BenchArgs& a) {
    const Dataset ds = read_dataset(a.dataset);
    const auto methods = parse_methods(a.methods);
    const BenchReport report = run_benchmark(ds.cfg, ds.records, methods, a.opts);
    print_summary(report);
    if (!a.out.empty()) {
        export_report(report, a.out, a.format == "csv" ? ReportFormat::csv : ReportFormat::json);
        std::cout << "report written to " << a.out << "\n";
    }
    return 0;
}

int run_recover(const RecoverArgs& a) {
    const Dataset ds = read_dataset(a.dataset);
    if (a.index >= ds.records.size()) {
        std::cerr << "index " << a.index << " out of range (" << ds.records.size() << " records)\n";
        return 2;
    }
    const MethodSpec method = parse_method(a.method);
    const BenchContext ctx(ds.cfg, a.opts);
    const ChannelObservation obs = observe(ctx, ds.records[a.index], a.index, a.opts);
    const Recovery rec = recover(ctx, obs, method, true);
    const double ds_s = rms_delay_spread_s(obs.dl, ctx.plan, ctx.cfg.subcarrier_spacing_hz);

    std::cout << method.name << " on record " << a.index << ": NMSE " << rec.nmse_db << " dB, delay spread "
              << ds_s * 1e9 << " ns (" << to_string(cluster(ds_s)) << ")\n";
    if (!a.trace.empty()) {
        nlohmann::json doc = {{"method", method.name},
                              {"index", a.index},
                              {"seed", ds.records[a.index].seed},
                              {"nmse_db", rec.nmse_db},
                              {"delay_spread_s", ds_s},
                              {"cluster", std::string(to_string(cluster(ds_s)))}};
        if (rec.state) doc.update(trace_to_json(*rec.state));
        std::ofstream out(a.trace);
        out << doc.dump(2) << "\n";
        if (!out) throw std::runtime_error("cannot write " + a.trace);
    }
    return 0;
}

void add_pattern_options(CLI::App* cmd, BenchOptions& opts) {
    cmd->add_option("--virtual-start", opts.virtual_start, "First subcarrier of the virtual pilot block (I)");
    cmd->add_option("--virtual-len", opts.virtual_len, "Length of the virtual pilot block (P); 0 disables");
    cmd->add_option("--seed", opts.master_seed, "Master seed for observation noise");
    cmd->add_option("--snr-db", opts.snr_db, "DL pilot estimation SNR in dB (default: noiseless)");
    cmd->add_option("--ul-snr-db", opts.ul_snr_db, "UL channel SNR in dB used for masks (default: noiseless)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UL-assisted DL CSI upsampling: channel synthesis, recovery and benchmarking"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a dataset of reciprocal UL/DL channel pairs");
    s->add_option("--n-ant", synth.n_ant, "Antennas")->capture_default_str();
    s->add_option("--n-sub", synth.n_sub, "Subcarriers")->capture_default_str();
    s->add_option("--d-rs", synth.d_rs, "CSI-RS subcarrier spacing")->capture_default_str();
    s->add_option("--n-pilots", synth.n_pilots, "CSI-RS pilot count (default n_sub / d_rs)");
    s->add_option("--paths", synth.paths, "Paths per channel")->capture_default_str();
    s->add_option("--rms-ds-ns", synth.rms_ds_ns, "Target RMS delay spread in ns")->capture_default_str();
    s->add_flag("--on-grid,!--off-grid", synth.on_grid, "Place paths on the DFT grid (default) or off it");
    s->add_option("--count", synth.count, "Number of channel pairs")->capture_default_str();
    s->add_option("--seed", synth.seed, "Dataset seed")->capture_default_str();
    s->add_option("--scs-hz", synth.scs_hz, "Subcarrier spacing in Hz")->capture_default_str();
    s->add_option("--threads", synth.threads, "Worker threads (0 = all cores)");
    s->add_option("--out", synth.out, "Output dataset file")->required();

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Score recovery methods on a dataset");
    b->add_option("--dataset", bench.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    b->add_option("--methods", bench.methods, "Comma-separated method specs")->capture_default_str();
    add_pattern_options(b, bench.opts);
    b->add_option("--threads", bench.opts.threads, "Worker threads (0 = all cores)");
    b->add_option("--out", bench.out, "Report file");
    b->add_option("--format", bench.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    RecoverArgs recov;
    auto* r = app.add_subcommand("recover", "Recover one channel and optionally dump the solver trace");
    r->add_option("--dataset", recov.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    r->add_option("--index", recov.index, "Record index")->capture_default_str();
    r->add_option("--method", recov.method, "Method spec")->capture_default_str();
    add_pattern_options(r, recov.opts);
    r->add_option("--dump-trace", recov.trace, "Write a JSON trace to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) return run_synth(synth);
        if (*b) return run_bench(bench);
        if (*r) return run_recover(recov);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
