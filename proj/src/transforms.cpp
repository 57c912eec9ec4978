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

#include "csiup/transforms.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

namespace csiup {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct TransformPlan::Kernels {
    fftw_plan beam_fwd = nullptr;
    fftw_plan beam_bwd = nullptr;
    fftw_plan delay_fwd = nullptr;
    fftw_plan delay_bwd = nullptr;
    double beam_scale = 1.0;
    double delay_scale = 1.0;

    Kernels(std::uint32_t n_ant, std::uint32_t n_sub) {
        const int na = static_cast<int>(n_ant);
        const int nf = static_cast<int>(n_sub);
        beam_scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
        delay_scale = 1.0 / std::sqrt(static_cast<double>(n_sub));

        auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n_ant) * n_sub);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(planner_mutex());
        // Columns of a row-major n_ant x n_sub block: length n_ant, stride n_sub.
        beam_fwd = fftw_plan_many_dft(1, &na, nf, buf, nullptr, nf, 1, buf, nullptr, nf, 1,
                                      FFTW_FORWARD, flags);
        beam_bwd = fftw_plan_many_dft(1, &na, nf, buf, nullptr, nf, 1, buf, nullptr, nf, 1,
                                      FFTW_BACKWARD, flags);
        // Rows: length n_sub, contiguous. Delay is the IDFT direction.
        delay_fwd = fftw_plan_many_dft(1, &nf, na, buf, nullptr, 1, nf, buf, nullptr, 1, nf,
                                       FFTW_BACKWARD, flags);
        delay_bwd = fftw_plan_many_dft(1, &nf, na, buf, nullptr, 1, nf, buf, nullptr, 1, nf,
                                       FFTW_FORWARD, flags);
        fftw_free(buf);
        if (!beam_fwd || !beam_bwd || !delay_fwd || !delay_bwd) {
            throw std::runtime_error("TransformPlan: FFTW planning failed");
        }
    }

    ~Kernels() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(beam_fwd);
        fftw_destroy_plan(beam_bwd);
        fftw_destroy_plan(delay_fwd);
        fftw_destroy_plan(delay_bwd);
    }

    Kernels(const Kernels&) = delete;
    Kernels& operator=(const Kernels&) = delete;
};

TransformPlan::TransformPlan(const SystemConfig& cfg) : TransformPlan(cfg.n_ant, cfg.n_sub) {}

TransformPlan::TransformPlan(std::uint32_t n_ant, std::uint32_t n_sub)
    : n_ant_(n_ant), n_sub_(n_sub) {
    if (n_ant == 0 || n_sub == 0) throw InvalidArgument("TransformPlan: empty shape");
    kernels_ = std::make_shared<const Kernels>(n_ant, n_sub);
}

void TransformPlan::check_shape(const CMatrix& m, const char* op) const {
    if (m.rows() != static_cast<Eigen::Index>(n_ant_) || m.cols() != static_cast<Eigen::Index>(n_sub_)) {
        throw InvalidArgument(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", plan is " + std::to_string(n_ant_) +
                              "x" + std::to_string(n_sub_));
    }
}

void TransformPlan::beam_transform(CMatrix& m, bool forward) const {
    check_shape(m, "beam_transform");
    auto* p = as_fftw(m.data());
    fftw_execute_dft(forward ? kernels_->beam_fwd : kernels_->beam_bwd, p, p);
    m *= kernels_->beam_scale;
}

void TransformPlan::delay_transform(CMatrix& m, bool forward) const {
    check_shape(m, "delay_transform");
    auto* p = as_fftw(m.data());
    fftw_execute_dft(forward ? kernels_->delay_fwd : kernels_->delay_bwd, p, p);
    m *= kernels_->delay_scale;
}

CsiMatrix bd_forward(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::AF, "bd_forward");
    CMatrix m = h.data();
    plan.beam_transform(m, true);
    plan.delay_transform(m, true);
    return {std::move(m), Domain::BD};
}

CsiMatrix bd_inverse(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::BD, "bd_inverse");
    CMatrix m = h.data();
    plan.delay_transform(m, false);
    plan.beam_transform(m, false);
    return {std::move(m), Domain::AF};
}

CsiMatrix ad_forward(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::AF, "ad_forward");
    CMatrix m = h.data();
    plan.delay_transform(m, true);
    return {std::move(m), Domain::AD};
}

CsiMatrix ad_inverse(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::AD, "ad_inverse");
    CMatrix m = h.data();
    plan.delay_transform(m, false);
    return {std::move(m), Domain::AF};
}

CsiMatrix ad_to_bd(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::AD, "ad_to_bd");
    CMatrix m = h.data();
    plan.beam_transform(m, true);
    return {std::move(m), Domain::BD};
}

CsiMatrix bd_to_ad(const CsiMatrix& h, const TransformPlan& plan) {
    h.require(Domain::BD, "bd_to_ad");
    CMatrix m = h.data();
    plan.beam_transform(m, false);
    return {std::move(m), Domain::AD};
}

CsiMatrix zero_insert(const CMatrix& h_rs, const PilotPattern& pattern) {
    const auto uniform = pattern.uniform_indices();
    if (uniform.empty()) throw InvalidArgument("zero_insert: pattern has no uniform part");
    if (h_rs.cols() != static_cast<Eigen::Index>(uniform.size())) {
        throw InvalidArgument("zero_insert: " + std::to_string(h_rs.cols()) +
                              " pilot columns for " + std::to_string(uniform.size()) +
                              " CSI-RS subcarriers");
    }
    CMatrix out = CMatrix::Zero(h_rs.rows(), pattern.n_sub);
    for (std::size_t m = 0; m < uniform.size(); ++m) {
        out.col(uniform[m]) = h_rs.col(static_cast<Eigen::Index>(m));
    }
    return {std::move(out), Domain::AF};
}

CsiMatrix aliasing_fold(const CsiMatrix& h_bd, std::uint32_t d_rs) {
    h_bd.require(Domain::BD, "aliasing_fold");
    const auto n_sub = h_bd.cols();
    if (d_rs == 0 || n_sub % d_rs != 0) {
        throw InvalidArgument("aliasing_fold: n_sub=" + std::to_string(n_sub) +
                              " is not divisible by d_rs=" + std::to_string(d_rs));
    }
    const Eigen::Index period = n_sub / d_rs;
    const CMatrix& src = h_bd.data();
    CMatrix base = CMatrix::Zero(src.rows(), period);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(d_rs); ++r) {
        base += src.middleCols(r * period, period);
    }
    base /= static_cast<double>(d_rs);
    CMatrix out(src.rows(), n_sub);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(d_rs); ++r) {
        out.middleCols(r * period, period) = base;
    }
    return {std::move(out), Domain::BD};
}

CMatrix sensing_apply(const CsiMatrix& x_ad, const PilotPattern& pattern, const TransformPlan& plan) {
    x_ad.require(Domain::AD, "sensing_apply");
    return sample(ad_inverse(x_ad, plan), pattern, SampleForm::compact);
}

CsiMatrix sensing_adjoint(const CMatrix& y, const PilotPattern& pattern, const TransformPlan& plan) {
    if (pattern.n_sub != plan.n_sub()) {
        throw InvalidArgument("sensing_adjoint: pattern and plan disagree on n_sub");
    }
    return ad_forward(CsiMatrix(embed(y, pattern), Domain::AF), plan);
}

namespace dense {

namespace {

CMatrix unitary_dft(std::uint32_t n, double sign) {
    CMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint32_t r = 0; r < n; ++r) {
        for (std::uint32_t c = 0; c < n; ++c) {
            // Reduce the exponent modulo n before scaling to keep the phase exact.
            const auto k = static_cast<double>((static_cast<std::uint64_t>(r) * c) % n);
            f(r, c) = std::polar(scale, sign * 2.0 * std::numbers::pi * k / n);
        }
    }
    return f;
}

}  // namespace

CMatrix beam_matrix(std::uint32_t n_ant) { return unitary_dft(n_ant, -1.0); }

CMatrix delay_matrix(std::uint32_t n_sub) { return unitary_dft(n_sub, +1.0); }

CMatrix trimmed_sensing_matrix(const PilotPattern& pattern) {
    const CMatrix inv = delay_matrix(pattern.n_sub).adjoint();
    CMatrix out(pattern.n_sub, static_cast<Eigen::Index>(pattern.size()));
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = inv.col(pattern.indices[k]);
    }
    return out;
}

}  // namespace dense

}  // namespace csiup
