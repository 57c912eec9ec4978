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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "csiup/bench.hpp"
#include "csiup/dataset.hpp"

namespace py = pybind11;
using namespace csiup;

namespace {

using PairTuple = std::tuple<CMatrix, CMatrix, std::uint64_t>;

TransformPlan plan_for(const CMatrix& m) {
    return {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
}

CMatrix apply(CsiMatrix (*op)(const CsiMatrix&, const TransformPlan&), const CMatrix& m, Domain from) {
    return op(CsiMatrix(m, from), plan_for(m)).data();
}

std::vector<ChannelPair> to_pairs(const std::vector<PairTuple>& items) {
    std::vector<ChannelPair> out;
    out.reserve(items.size());
    for (const auto& [dl, ul, seed] : items) {
        out.push_back(ChannelPair{CsiMatrix(dl, Domain::AF), CsiMatrix(ul, Domain::AF), std::nullopt, seed});
    }
    return out;
}

std::vector<PairTuple> from_pairs(const std::vector<ChannelPair>& pairs) {
    std::vector<PairTuple> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.emplace_back(p.dl.data(), p.ul.data(), p.seed);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Downlink CSI upsampling primitives.";

    py::register_exception<DatasetError>(m, "DatasetError", PyExc_RuntimeError);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init([](std::uint32_t n_ant, std::uint32_t n_sub, std::uint32_t pilot_spacing,
                         std::optional<std::uint32_t> n_pilots, double scs) {
                 SystemConfig c = make_config(n_ant, n_sub, pilot_spacing, scs);
                 if (n_pilots) c.n_pilots = *n_pilots;
                 c.validate();
                 return c;
             }),
             py::arg("n_ant") = 8, py::arg("n_sub") = 240, py::arg("pilot_spacing") = 12,
             py::arg("n_pilots") = py::none(), py::arg("subcarrier_spacing_hz") = 15e3)
        .def_readwrite("n_ant", &SystemConfig::n_ant)
        .def_readwrite("n_sub", &SystemConfig::n_sub)
        .def_readwrite("pilot_spacing", &SystemConfig::pilot_spacing)
        .def_readwrite("n_pilots", &SystemConfig::n_pilots)
        .def_readwrite("subcarrier_spacing_hz", &SystemConfig::subcarrier_spacing_hz)
        .def("truncated", &SystemConfig::truncated)
        .def("__eq__", [](const SystemConfig& a, const SystemConfig& b) { return a == b; })
        .def("__repr__", [](const SystemConfig& c) {
            return "SystemConfig(n_ant=" + std::to_string(c.n_ant) + ", n_sub=" + std::to_string(c.n_sub) +
                   ", pilot_spacing=" + std::to_string(c.pilot_spacing) + ", n_pilots=" +
                   std::to_string(c.n_pilots) + ")";
        });

    py::class_<PilotPattern>(m, "PilotPattern")
        .def_readonly("n_sub", &PilotPattern::n_sub)
        .def_readonly("indices", &PilotPattern::indices)
        .def("is_pure_uniform", &PilotPattern::is_pure_uniform)
        .def("__len__", &PilotPattern::size);

    m.def("uniform_pattern", [](const SystemConfig& c) { return build_pattern(c, UniformKind{}); });
    m.def("nonuniform_pattern",
          [](const SystemConfig& c, std::uint32_t start, std::uint32_t len) {
              return build_pattern(c, NonuniformKind{start, len});
          },
          py::arg("cfg"), py::arg("virtual_start"), py::arg("virtual_len"));
    m.def("pattern_from_indices", &pattern_from_indices, py::arg("n_sub"), py::arg("indices"));
    m.def("sample", [](const CMatrix& h, const PilotPattern& p) {
        return sample(CsiMatrix(h, Domain::AF), p, SampleForm::compact);
    });

    // Transforms work on plain complex arrays; the input domain is implied by the call.
    m.def("bd_forward", [](const CMatrix& h) { return apply(bd_forward, h, Domain::AF); });
    m.def("bd_inverse", [](const CMatrix& h) { return apply(bd_inverse, h, Domain::BD); });
    m.def("ad_forward", [](const CMatrix& h) { return apply(ad_forward, h, Domain::AF); });
    m.def("ad_inverse", [](const CMatrix& h) { return apply(ad_inverse, h, Domain::AD); });
    m.def("aliasing_fold", [](const CMatrix& h_bd, std::uint32_t d_rs) {
        return aliasing_fold(CsiMatrix(h_bd, Domain::BD), d_rs).data();
    });
    m.def("zero_insert", [](const CMatrix& h_rs, const PilotPattern& p) { return zero_insert(h_rs, p).data(); });
    m.def("sensing_apply", [](const CMatrix& x, const PilotPattern& p) {
        return sensing_apply(CsiMatrix(x, Domain::AD), p, TransformPlan(static_cast<std::uint32_t>(x.rows()), p.n_sub));
    });
    m.def("sensing_adjoint", [](const CMatrix& y, const PilotPattern& p) {
        return sensing_adjoint(y, p, TransformPlan(static_cast<std::uint32_t>(y.rows()), p.n_sub)).data();
    });

    m.def("synth_channel_pair",
          [](const SystemConfig& c, std::uint32_t n_paths, double rms_delay_spread_s, bool on_grid,
             std::uint64_t seed) {
              const auto p = synth_channel_pair(GeneratorParams{n_paths, rms_delay_spread_s, on_grid}, c, seed);
              return std::make_tuple(p.dl.data(), p.ul.data());
          },
          py::arg("cfg"), py::arg("n_paths") = 10, py::arg("rms_delay_spread_s") = 300e-9, py::arg("on_grid") = true,
          py::arg("seed") = 0);
    m.def("synth_dataset",
          [](const SystemConfig& c, std::size_t count, std::uint64_t seed, std::uint32_t n_paths,
             double rms_delay_spread_s, bool on_grid, unsigned threads) {
              std::vector<ChannelPair> pairs;
              {
                  py::gil_scoped_release release;
                  pairs = synth_dataset(GeneratorParams{n_paths, rms_delay_spread_s, on_grid}, c, count, seed, threads);
              }
              return from_pairs(pairs);
          },
          py::arg("cfg"), py::arg("count"), py::arg("seed") = 0, py::arg("n_paths") = 10,
          py::arg("rms_delay_spread_s") = 300e-9, py::arg("on_grid") = true, py::arg("threads") = 1);
    m.def("add_estimation_noise", [](const CMatrix& h, double snr_db, std::uint64_t seed) {
        return add_estimation_noise(CsiMatrix(h, Domain::AF), snr_db, seed).data();
    });
    m.def("circular_shift_augment", [](const CMatrix& h, std::int64_t shift) {
        return circular_shift_augment(CsiMatrix(h, Domain::AF), shift, plan_for(h)).data();
    });

    m.def("write_dataset", [](const std::filesystem::path& path, const SystemConfig& c,
                              const std::vector<PairTuple>& pairs) { write_dataset(path, c, to_pairs(pairs)); });
    m.def("read_dataset", [](const std::filesystem::path& path) {
        const Dataset ds = read_dataset(path);
        return std::make_tuple(ds.cfg, from_pairs(ds.records));
    });

    m.def("linear_interp",
          [](const CMatrix& h_compact, const PilotPattern& p) { return linear_interp(h_compact, p).data(); },
          py::arg("h_compact"), py::arg("pattern"));
    m.def("build_ul_mask",
          [](const CMatrix& h_ul, double r_level) {
              const auto res = build_ul_mask(CsiMatrix(h_ul, Domain::AF), plan_for(h_ul), MaskConfig{r_level});
              return std::make_tuple(res.mask.values(), res.threshold, res.degenerate);
          },
          py::arg("h_ul"), py::arg("r_level") = 1.0);
    m.def("build_oracle_mask",
          [](const CMatrix& h, double epsilon) {
              return build_oracle_mask(CsiMatrix(h, Domain::AF), plan_for(h), MaskConfig{1.0, epsilon}).values();
          },
          py::arg("h_true"), py::arg("epsilon") = 1e-9);
    m.def("masked_upsample",
          [](const CMatrix& h_rs, const PilotPattern& p, const RMatrix& mask, bool scale) {
              const TransformPlan plan(static_cast<std::uint32_t>(h_rs.rows()), p.n_sub);
              return masked_upsample(h_rs, p, FilterMask(mask, false), plan,
                                     scale ? UpsampleScale::pilot_spacing : UpsampleScale::none)
                  .data();
          },
          py::arg("h_rs"), py::arg("pattern"), py::arg("mask"), py::arg("scale_by_spacing") = true);

    m.def("ista_solve",
          [](const CMatrix& y, const PilotPattern& p, std::uint32_t phases, double step, double theta0_rel,
             double decay, double w0, const std::string& blend, double stop_tol, std::optional<RMatrix> mask,
             std::optional<CMatrix> truth) {
              IstaConfig cfg;
              cfg.phases = phases;
              cfg.steps = {step};
              cfg.theta0_rel = theta0_rel;
              cfg.decay = decay;
              cfg.w0 = w0;
              if (blend == "linear") cfg.blend = BlendMode::linear_decay;
              else if (blend == "const") cfg.blend = BlendMode::constant;
              else throw InvalidArgument("blend must be 'linear' or 'const'");
              cfg.stop_tol = stop_tol;
              const TransformPlan plan(static_cast<std::uint32_t>(y.rows()), p.n_sub);
              std::optional<FilterMask> fm;
              if (mask) fm.emplace(*mask, false);
              std::optional<CsiMatrix> t;
              if (truth) t.emplace(*truth, Domain::AF);
              const auto res = solve(y, p, plan, cfg, fm ? &*fm : nullptr, t ? &*t : nullptr);
              return py::make_tuple(res.h_hat.data(), trace_to_json(res.state).dump());
          },
          py::arg("y"), py::arg("pattern"), py::arg("phases") = 50, py::arg("step") = 1.0,
          py::arg("theta0_rel") = 0.1, py::arg("decay") = 0.9, py::arg("w0") = 1.0, py::arg("blend") = "linear",
          py::arg("stop_tol") = 0.0, py::arg("mask") = py::none(), py::arg("truth") = py::none());

    m.def("nmse_db", [](const CMatrix& h_hat, const CMatrix& h) {
        return nmse_db(CsiMatrix(h_hat, Domain::AF), CsiMatrix(h, Domain::AF));
    });
    m.def("rms_delay_spread_s",
          [](const CMatrix& h, double scs) { return rms_delay_spread_s(CsiMatrix(h, Domain::AF), plan_for(h), scs); },
          py::arg("h"), py::arg("subcarrier_spacing_hz") = 15e3);
    m.def("cluster", [](double ds) { return std::string(to_string(cluster(ds))); });

    m.def("run_benchmark",
          [](const SystemConfig& c, const std::vector<PairTuple>& pairs, const std::string& methods,
             std::uint32_t virtual_start, std::uint32_t virtual_len, std::uint64_t master_seed, double snr_db,
             double ul_snr_db, unsigned threads) {
              const auto records = to_pairs(pairs);
              const auto specs = parse_methods(methods);
              const BenchOptions opts{virtual_start, virtual_len, master_seed, snr_db, ul_snr_db, threads};
              py::gil_scoped_release release;
              return report_to_json(run_benchmark(c, records, specs, opts));
          },
          py::arg("cfg"), py::arg("pairs"), py::arg("methods"), py::arg("virtual_start") = 0,
          py::arg("virtual_len") = 0, py::arg("master_seed") = 0,
          py::arg("snr_db") = std::numeric_limits<double>::infinity(),
          py::arg("ul_snr_db") = std::numeric_limits<double>::infinity(), py::arg("threads") = 1);
}
