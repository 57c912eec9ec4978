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

#include "csiup/metrics.hpp"

#include <cmath>
#include <limits>

namespace csiup {

double nmse_db(const CsiMatrix& h_hat, const CsiMatrix& h) {
    if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols() || h_hat.domain() != h.domain()) {
        throw InvalidArgument("nmse_db: shape or domain mismatch");
    }
    const double ref = h.data().squaredNorm();
    if (ref == 0.0) throw InvalidArgument("nmse_db: zero reference channel");
    const double err = (h_hat.data() - h.data()).squaredNorm();
    if (err == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(err / ref);
}

double rms_delay_spread_s(const CsiMatrix& h, const TransformPlan& plan, double subcarrier_spacing_hz) {
    const CsiMatrix bd = bd_forward(h, plan);
    const Eigen::RowVectorXd power = bd.data().cwiseAbs2().colwise().sum();
    const double total = power.sum();
    if (total == 0.0) throw InvalidArgument("rms_delay_spread_s: zero channel");
    const double tap = 1.0 / (static_cast<double>(plan.n_sub()) * subcarrier_spacing_hz);
    double mean = 0.0;
    for (Eigen::Index j = 0; j < power.size(); ++j) mean += power(j) * (j * tap);
    mean /= total;
    double var = 0.0;
    for (Eigen::Index j = 0; j < power.size(); ++j) {
        const double d = j * tap - mean;
        var += power(j) * d * d;
    }
    return std::sqrt(var / total);
}

Cluster cluster(double ds_s) {
    if (!(ds_s >= 0.0)) throw InvalidArgument("cluster: delay spread must be non-negative");
    if (ds_s < cl1_upper_s) return Cluster::CL1;
    if (ds_s <= cl2_upper_s) return Cluster::CL2;
    return Cluster::CL3;
}

std::string_view to_string(Cluster c) {
    switch (c) {
        case Cluster::CL1: return "CL1";
        case Cluster::CL2: return "CL2";
        case Cluster::CL3: return "CL3";
    }
    return "?";
}

}  // namespace csiup
