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

#include "csiup/ista.hpp"

#include <cmath>
#include <string>

#include "csiup/metrics.hpp"

namespace csiup {

void IstaConfig::validate() const {
    if (phases == 0) throw InvalidArgument("IstaConfig: phases must be positive");
    if (steps.size() != 1 && steps.size() != phases) {
        throw InvalidArgument("IstaConfig: give one step or one per phase");
    }
    for (double s : steps) {
        if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("IstaConfig: step must lie in (0, 1]");
    }
    if (!(theta0_rel > 0.0)) throw InvalidArgument("IstaConfig: theta0_rel must be positive");
    if (!(decay > 0.0 && decay <= 1.0)) throw InvalidArgument("IstaConfig: decay must lie in (0, 1]");
    if (!(w0 >= 0.0 && w0 <= 1.0)) throw InvalidArgument("IstaConfig: w0 must lie in [0, 1]");
    if (!(stop_tol >= 0.0)) throw InvalidArgument("IstaConfig: stop_tol must be non-negative");
}

double IstaConfig::step_at(std::uint32_t k) const { return steps.size() == 1 ? steps[0] : steps.at(k); }

double IstaConfig::theta_rel_at(std::uint32_t k) const { return theta0_rel * std::pow(decay, k); }

double IstaConfig::blend_at(std::uint32_t k) const {
    if (blend == BlendMode::constant) return w0;
    return w0 * (1.0 - static_cast<double>(k) / phases);
}

CsiMatrix ls_init(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan, LsMethod method) {
    if (pattern.indices.empty()) throw InvalidArgument("ls_init: empty pilot pattern");
    if (method == LsMethod::adjoint) return sensing_adjoint(y, pattern, plan);

    if (y.cols() != static_cast<Eigen::Index>(pattern.size())) {
        throw InvalidArgument("ls_init: measurement/pattern size mismatch");
    }
    // Rows solve x T = y in the minimum-norm sense: x = y (T^H T)^-1 T^H.
    const CMatrix t = dense::trimmed_sensing_matrix(pattern);
    const CMatrix gram = t.adjoint() * t;
    Eigen::JacobiSVD<CMatrix> svd(gram);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12) {
        throw InvalidArgument("ls_init: Gram matrix is singular or ill-conditioned");
    }
    CMatrix x = gram.transpose().partialPivLu().solve(y.transpose()).transpose() * t.adjoint();
    return {std::move(x), Domain::AD};
}

CsiMatrix gradient_step(const CsiMatrix& x, const CMatrix& y, const PilotPattern& pattern,
                        const TransformPlan& plan, double step) {
    const CMatrix residual = sensing_apply(x, pattern, plan) - y;
    if (residual.rows() != y.rows()) throw InvalidArgument("gradient_step: shape mismatch");
    const CsiMatrix grad = sensing_adjoint(residual, pattern, plan);
    return {x.data() - step * grad.data(), Domain::AD};
}

CsiMatrix shrink(const CsiMatrix& r, double theta) {
    if (!(theta >= 0.0)) throw InvalidArgument("shrink: theta must be non-negative");
    CMatrix out = r.data().unaryExpr([theta](const cdouble& z) {
        const double mag = std::abs(z);
        return mag > theta ? z * ((mag - theta) / mag) : cdouble(0.0, 0.0);
    });
    return {std::move(out), r.domain()};
}

CsiMatrix ra_apply(const CsiMatrix& r, const FilterMask& mask, const TransformPlan& plan, double w) {
    r.require(Domain::AD, "ra_apply");
    if (mask.rows() != r.rows() || mask.cols() != r.cols()) throw InvalidArgument("ra_apply: mask shape mismatch");
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("ra_apply: blend weight must lie in [0, 1]");
    CsiMatrix bd = ad_to_bd(r, plan);
    const auto gain = (w * mask.values().array() + (1.0 - w)).cast<cdouble>();
    CMatrix blended = (bd.data().array() * gain).matrix();
    return bd_to_ad(CsiMatrix(std::move(blended), Domain::BD), plan);
}

double ista_objective(const CsiMatrix& x, const CMatrix& y, const PilotPattern& pattern,
                      const TransformPlan& plan, double theta) {
    const double fidelity = 0.5 * (sensing_apply(x, pattern, plan) - y).squaredNorm();
    return fidelity + theta * x.data().cwiseAbs().sum();
}

IstaResult solve(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan, const IstaConfig& cfg,
                 const FilterMask* mask, const CsiMatrix* truth) {
    cfg.validate();
    if (truth) truth->require(Domain::AF, "solve");

    SolverState state;
    state.x = ls_init(y, pattern, plan);
    state.r = state.x;
    const double m0 = state.x.data().cwiseAbs().maxCoeff();

    for (std::uint32_t k = 0; k < cfg.phases; ++k) {
        const double theta = cfg.theta_rel_at(k) * m0;
        CsiMatrix r = gradient_step(state.x, y, pattern, plan, cfg.step_at(k));
        if (mask) r = ra_apply(r, *mask, plan, cfg.blend_at(k));
        CsiMatrix x = shrink(r, theta);

        PhaseRecord rec;
        rec.theta = theta;
        const double prev = state.x.data().norm();
        const double change = (x.data() - state.x.data()).norm();
        rec.iterate_delta = prev > 0.0 ? change / prev : change;
        rec.objective = ista_objective(x, y, pattern, plan, theta);
        if (truth) rec.nmse_db = nmse_db(ad_inverse(x, plan), *truth);

        state.r = std::move(r);
        state.x = std::move(x);
        state.k = k + 1;
        state.trace.push_back(rec);
        if (cfg.stop_tol > 0.0 && rec.iterate_delta < cfg.stop_tol) break;
    }
    return {ad_inverse(state.x, plan), std::move(state)};
}

}  // namespace csiup
