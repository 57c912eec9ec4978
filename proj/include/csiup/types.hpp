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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace csiup {

using cdouble = std::complex<double>;

// Row-major so that one antenna row (all subcarriers / delay taps) is contiguous.
using CMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Thrown when an input violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a matrix carries the wrong domain tag for the requested transform.
class DomainError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// OFDM/array dimensions shared by every channel in a run.
struct SystemConfig {
    std::uint32_t n_ant = 8;
    std::uint32_t n_sub = 240;
    std::uint32_t pilot_spacing = 12;  // D_RS
    std::uint32_t n_pilots = 20;       // M_f
    double subcarrier_spacing_hz = 15e3;

    /// Delay bins j < n_pilots survive uniform subsampling without folding.
    [[nodiscard]] std::uint32_t max_unaliased_delay_taps() const { return n_pilots; }

    /// True when n_sub == n_pilots * pilot_spacing, i.e. the fold identity applies.
    [[nodiscard]] bool uniform_exact() const { return n_pilots * pilot_spacing == n_sub; }

    /// Duration of one delay tap in seconds.
    [[nodiscard]] double tap_seconds() const {
        return 1.0 / (static_cast<double>(n_sub) * subcarrier_spacing_hz);
    }

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;

    /// Copy with n_sub cut down to n_pilots * pilot_spacing.
    [[nodiscard]] SystemConfig truncated() const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Build a config with n_pilots = floor(n_sub / pilot_spacing).
SystemConfig make_config(std::uint32_t n_ant, std::uint32_t n_sub, std::uint32_t pilot_spacing,
                         double subcarrier_spacing_hz = 15e3);

/// Antenna-frequency, antenna-delay, beam-delay.
enum class Domain { AF, AD, BD };

std::string_view to_string(Domain d);

/// Complex n_ant x n_sub matrix tagged with its domain.
class CsiMatrix {
public:
    CsiMatrix() = default;
    CsiMatrix(CMatrix data, Domain domain) : data_(std::move(data)), domain_(domain) {}

    static CsiMatrix zeros(Eigen::Index n_ant, Eigen::Index n_sub, Domain domain) {
        return {CMatrix::Zero(n_ant, n_sub), domain};
    }

    [[nodiscard]] const CMatrix& data() const { return data_; }
    [[nodiscard]] Domain domain() const { return domain_; }
    [[nodiscard]] Eigen::Index rows() const { return data_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return data_.cols(); }

    /// Throws DomainError unless tagged `expected`.
    void require(Domain expected, std::string_view op) const;

private:
    CMatrix data_;
    Domain domain_ = Domain::AF;
};

}  // namespace csiup
