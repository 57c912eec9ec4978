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

#include "csiup/pilots.hpp"
#include "csiup/transforms.hpp"
#include "csiup/types.hpp"

namespace csiup {

/// Real-valued beam-delay passband in [0, 1].
class FilterMask {
public:
    FilterMask() = default;
    /// Throws InvalidArgument if any entry leaves [0, 1], or if `binary` and an
    /// entry is not 0 or 1.
    FilterMask(RMatrix values, bool binary);

    static FilterMask ones(Eigen::Index n_ant, Eigen::Index n_sub) {
        return {RMatrix::Ones(n_ant, n_sub), true};
    }

    [[nodiscard]] const RMatrix& values() const { return values_; }
    [[nodiscard]] bool binary() const { return binary_; }
    [[nodiscard]] Eigen::Index rows() const { return values_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return values_.cols(); }
    [[nodiscard]] Eigen::Index support_size() const { return (values_.array() > 0.0).count(); }

private:
    RMatrix values_;
    bool binary_ = true;
};

struct MaskConfig {
    double r_level = 1.0;   // threshold T = r_level * sqrt(mean |H_UL,BD|^2)
    double epsilon = 1e-9;  // oracle mask keeps |H_BD| > epsilon * max |H_BD|
};

struct UlMaskResult {
    FilterMask mask;
    double threshold = 0.0;
    /// Set when the UL channel is identically zero: every cell passes the
    /// zero threshold, which carries no information.
    bool degenerate = false;
};

/// Piecewise-linear interpolation across subcarriers of the real and
/// imaginary parts, constant beyond the outermost pilots.
CsiMatrix linear_interp(const CMatrix& h_compact, const PilotPattern& pattern);

/// Binary passband 1{|H_UL,BD| >= r_level * sqrt(P)}, P the mean cell power.
UlMaskResult build_ul_mask(const CsiMatrix& h_ul, const TransformPlan& plan, const MaskConfig& mc);

/// Binary passband on the true DL support (relative tolerance mc.epsilon).
FilterMask build_oracle_mask(const CsiMatrix& h_true, const TransformPlan& plan, const MaskConfig& mc);

enum class UpsampleScale {
    pilot_spacing,  // D_RS * mask o H_DS,BD: undoes the 1/D_RS of the fold
    none,           // mask o H_DS,BD, the unscaled variant
};

/// Zero-insert the CSI-RS samples, go to beam-delay, apply the passband and
/// come back to antenna-frequency.
CsiMatrix masked_upsample(const CMatrix& h_rs_compact, const PilotPattern& pattern, const FilterMask& mask,
                          const TransformPlan& plan, UpsampleScale scale = UpsampleScale::pilot_spacing);

/// True when, per beam, each folded delay cell receives at most one entry
/// with |value| > tol among its d_rs aliased copies.
bool bin_isolated(const CsiMatrix& h_bd, std::uint32_t d_rs, double tol = 0.0);

}  // namespace csiup
