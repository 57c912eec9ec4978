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

#include "csiup/antialias.hpp"

#include <cmath>
#include <string>

namespace csiup {

FilterMask::FilterMask(RMatrix values, bool binary) : values_(std::move(values)), binary_(binary) {
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
        const double v = values_.data()[k];
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("FilterMask: entry outside [0, 1]");
        if (binary_ && v != 0.0 && v != 1.0) throw InvalidArgument("FilterMask: binary mask with fractional entry");
    }
}

CsiMatrix linear_interp(const CMatrix& h_compact, const PilotPattern& pattern) {
    if (pattern.indices.empty()) throw InvalidArgument("linear_interp: empty pilot pattern");
    if (h_compact.cols() != static_cast<Eigen::Index>(pattern.size())) {
        throw InvalidArgument("linear_interp: " + std::to_string(h_compact.cols()) +
                              " columns for a pattern of " + std::to_string(pattern.size()));
    }
    const auto& idx = pattern.indices;
    const auto last = static_cast<Eigen::Index>(idx.size() - 1);
    CMatrix out(h_compact.rows(), pattern.n_sub);
    Eigen::Index seg = 0;  // idx[seg] <= f < idx[seg + 1]
    for (std::uint32_t f = 0; f < pattern.n_sub; ++f) {
        if (f <= idx.front()) {
            out.col(f) = h_compact.col(0);
            continue;
        }
        if (f >= idx.back()) {
            out.col(f) = h_compact.col(last);
            continue;
        }
        while (idx[seg + 1] <= f) ++seg;
        const double t = static_cast<double>(f - idx[seg]) / static_cast<double>(idx[seg + 1] - idx[seg]);
        out.col(f) = (1.0 - t) * h_compact.col(seg) + t * h_compact.col(seg + 1);
    }
    return {std::move(out), Domain::AF};
}

UlMaskResult build_ul_mask(const CsiMatrix& h_ul, const TransformPlan& plan, const MaskConfig& mc) {
    h_ul.require(Domain::AF, "build_ul_mask");
    if (!(mc.r_level >= 0.0)) throw InvalidArgument("build_ul_mask: r_level must be non-negative");
    const RMatrix mag = bd_forward(h_ul, plan).data().cwiseAbs();
    const double power = mag.squaredNorm() / static_cast<double>(mag.size());
    UlMaskResult res;
    res.threshold = mc.r_level * std::sqrt(power);
    res.degenerate = power == 0.0;
    res.mask = FilterMask((mag.array() >= res.threshold).cast<double>(), true);
    return res;
}

FilterMask build_oracle_mask(const CsiMatrix& h_true, const TransformPlan& plan, const MaskConfig& mc) {
    h_true.require(Domain::AF, "build_oracle_mask");
    if (!(mc.epsilon >= 0.0)) throw InvalidArgument("build_oracle_mask: epsilon must be non-negative");
    const RMatrix mag = bd_forward(h_true, plan).data().cwiseAbs();
    const double peak = mag.maxCoeff();
    if (peak == 0.0) throw InvalidArgument("build_oracle_mask: zero channel has no support");
    return {(mag.array() > mc.epsilon * peak).cast<double>(), true};
}

CsiMatrix masked_upsample(const CMatrix& h_rs_compact, const PilotPattern& pattern, const FilterMask& mask,
                          const TransformPlan& plan, UpsampleScale scale) {
    if (!pattern.is_pure_uniform()) {
        throw InvalidArgument("masked_upsample: needs a purely uniform pattern with n_sub = M_f * D_RS");
    }
    if (mask.rows() != h_rs_compact.rows() || mask.cols() != static_cast<Eigen::Index>(pattern.n_sub)) {
        throw InvalidArgument("masked_upsample: mask shape does not match the channel");
    }
    const CsiMatrix ds_bd = bd_forward(zero_insert(h_rs_compact, pattern), plan);
    const double gain = scale == UpsampleScale::pilot_spacing ? static_cast<double>(*pattern.uniform_spacing) : 1.0;
    CMatrix filtered = gain * (ds_bd.data().array() * mask.values().array().cast<cdouble>()).matrix();
    return bd_inverse(CsiMatrix(std::move(filtered), Domain::BD), plan);
}

bool bin_isolated(const CsiMatrix& h_bd, std::uint32_t d_rs, double tol) {
    h_bd.require(Domain::BD, "bin_isolated");
    if (d_rs == 0 || h_bd.cols() % d_rs != 0) throw InvalidArgument("bin_isolated: n_sub not divisible by d_rs");
    const Eigen::Index period = h_bd.cols() / d_rs;
    const CMatrix& m = h_bd.data();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < period; ++j) {
            int hits = 0;
            for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(d_rs); ++r) {
                if (std::abs(m(i, j + r * period)) > tol) ++hits;
            }
            if (hits > 1) return false;
        }
    }
    return true;
}

}  // namespace csiup
