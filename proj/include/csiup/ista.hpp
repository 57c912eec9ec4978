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

#include "csiup/antialias.hpp"
#include "csiup/pilots.hpp"
#include "csiup/transforms.hpp"

namespace csiup {

enum class BlendMode { linear_decay, constant };

/// Fixed-phase ISTA schedule. Phase k (0-based) uses
///   step   steps[k] (or steps[0] when a single value is given)
///   theta  theta0_rel * m0 * decay^k, m0 = max |sensing_adjoint(y)|
///   blend  w0 * (1 - k / phases) for linear_decay, w0 for constant
struct IstaConfig {
    std::uint32_t phases = 50;
    std::vector<double> steps{1.0};
    double theta0_rel = 0.1;
    double decay = 0.9;
    double w0 = 1.0;
    BlendMode blend = BlendMode::linear_decay;
    double stop_tol = 0.0;  // relative Frobenius change of x; 0 disables

    void validate() const;
    [[nodiscard]] double step_at(std::uint32_t k) const;
    [[nodiscard]] double theta_rel_at(std::uint32_t k) const;
    [[nodiscard]] double blend_at(std::uint32_t k) const;
};

struct PhaseRecord {
    double objective = 0.0;  // 0.5 ||A x - y||^2 + theta_k ||x||_1
    double iterate_delta = 0.0;
    double theta = 0.0;
    std::optional<double> nmse_db;
};

struct SolverState {
    CsiMatrix x;  // AD
    CsiMatrix r;  // AD
    std::uint32_t k = 0;
    std::vector<PhaseRecord> trace;
};

struct IstaResult {
    CsiMatrix h_hat;  // AF
    SolverState state;
};

enum class LsMethod {
    adjoint,  // unitary columns: the Gram matrix is the identity
    gram,     // explicit minimum-norm solve through the dense Gram matrix
};

CsiMatrix ls_init(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan,
                  LsMethod method = LsMethod::adjoint);

/// r = x - step * A^H (A x - y).
CsiMatrix gradient_step(const CsiMatrix& x, const CMatrix& y, const PilotPattern& pattern,
                        const TransformPlan& plan, double step);

/// Complex soft threshold, entrywise: z -> max(|z| - theta, 0) z / |z|.
CsiMatrix shrink(const CsiMatrix& r, double theta);

/// w * mask o r_BD + (1 - w) * r_BD, evaluated in the beam-delay domain.
CsiMatrix ra_apply(const CsiMatrix& r, const FilterMask& mask, const TransformPlan& plan, double w);

/// 0.5 ||A x - y||_F^2 + theta * sum |x|.
double ista_objective(const CsiMatrix& x, const CMatrix& y, const PilotPattern& pattern,
                      const TransformPlan& plan, double theta);

/// LS start, then per phase: gradient step, optional reciprocity blend with
/// `mask`, soft threshold. When `truth` (AF) is given every phase records
/// its NMSE.
IstaResult solve(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan, const IstaConfig& cfg,
                 const FilterMask* mask = nullptr, const CsiMatrix* truth = nullptr);

}  // namespace csiup
