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
#include <memory>

#include "csiup/pilots.hpp"
#include "csiup/types.hpp"

namespace csiup {

/// Unitary DFT over antennas (beam transform) and unitary IDFT over
/// subcarriers (delay transform) for one (n_ant, n_sub) shape.
///
/// Conventions, with N_a antennas and N_f subcarriers:
///   beam:  X[b, :] = 1/sqrt(N_a) * sum_a H[a, :] * exp(-i 2 pi a b / N_a)
///   delay: X[:, j] = 1/sqrt(N_f) * sum_f H[:, f] * exp(+i 2 pi f j / N_f)
/// so a path at integer delay tap d contributes exp(-i 2 pi f d / N_f) across
/// frequency and a path at integer beam b contributes exp(+i 2 pi a b / N_a)
/// across the array.
///
/// Immutable after construction; copies share the underlying FFT plans and
/// may be used from several threads at once.
class TransformPlan {
public:
    explicit TransformPlan(const SystemConfig& cfg);
    TransformPlan(std::uint32_t n_ant, std::uint32_t n_sub);

    [[nodiscard]] std::uint32_t n_ant() const { return n_ant_; }
    [[nodiscard]] std::uint32_t n_sub() const { return n_sub_; }

    /// In-place antenna-dimension transform (forward = to beam).
    void beam_transform(CMatrix& m, bool forward) const;
    /// In-place frequency-dimension transform (forward = to delay).
    void delay_transform(CMatrix& m, bool forward) const;

    struct Kernels;

private:
    void check_shape(const CMatrix& m, const char* op) const;

    std::uint32_t n_ant_;
    std::uint32_t n_sub_;
    std::shared_ptr<const Kernels> kernels_;
};

CsiMatrix bd_forward(const CsiMatrix& h, const TransformPlan& plan);
CsiMatrix bd_inverse(const CsiMatrix& h, const TransformPlan& plan);
CsiMatrix ad_forward(const CsiMatrix& h, const TransformPlan& plan);
CsiMatrix ad_inverse(const CsiMatrix& h, const TransformPlan& plan);

/// Antenna-only lift between the AD and BD domains.
CsiMatrix ad_to_bd(const CsiMatrix& h, const TransformPlan& plan);
CsiMatrix bd_to_ad(const CsiMatrix& h, const TransformPlan& plan);

/// Place the M_f uniform pilot columns at {0, D, ..., (M_f-1)D}; zeros elsewhere.
CsiMatrix zero_insert(const CMatrix& h_rs, const PilotPattern& pattern);

/// Delay-domain wrap-around caused by keeping every d_rs-th subcarrier:
/// out[i, j] = 1/d_rs * sum_r h[i, (j mod M) + r M], M = n_sub / d_rs.
CsiMatrix aliasing_fold(const CsiMatrix& h_bd, std::uint32_t d_rs);

/// AF-domain values at the pattern's subcarriers of an AD-domain matrix
/// (inverse delay transform followed by column selection).
CMatrix sensing_apply(const CsiMatrix& x_ad, const PilotPattern& pattern, const TransformPlan& plan);

/// Adjoint of sensing_apply: zero-embed the measurements, then delay transform.
CsiMatrix sensing_adjoint(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan);

/// Dense O(N^2) matrices for the same transforms; used as test oracles.
namespace dense {

/// F_AB, N_a x N_a: bd = F_AB * H * F_FD.
CMatrix beam_matrix(std::uint32_t n_ant);
/// F_FD, N_f x N_f.
CMatrix delay_matrix(std::uint32_t n_sub);
/// F_FD^H restricted to the pattern columns: sensing_apply(x) = x * trimmed.
CMatrix trimmed_sensing_matrix(const PilotPattern& pattern);

}  // namespace dense

}  // namespace csiup
