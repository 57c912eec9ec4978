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

#include <array>
#include <string_view>

#include "csiup/transforms.hpp"
#include "csiup/types.hpp"

namespace csiup {

/// 10 log10(||h_hat - h||^2 / ||h||^2). Returns -infinity when the two are
/// identical; throws InvalidArgument for a zero reference.
double nmse_db(const CsiMatrix& h_hat, const CsiMatrix& h);

/// Power-weighted standard deviation of the delay-tap profile, in seconds.
/// Tap j sits at j / (n_sub * subcarrier_spacing_hz).
double rms_delay_spread_s(const CsiMatrix& h, const TransformPlan& plan, double subcarrier_spacing_hz);

enum class Cluster { CL1, CL2, CL3 };

inline constexpr double cl1_upper_s = 500e-9;
inline constexpr double cl2_upper_s = 1000e-9;

/// CL1 below 500 ns, CL2 in [500 ns, 1000 ns], CL3 above 1000 ns.
Cluster cluster(double ds_s);

std::string_view to_string(Cluster c);

}  // namespace csiup
