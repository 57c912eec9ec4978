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

#include "csiup/types.hpp"

#include <string>

namespace csiup {

void SystemConfig::validate() const {
    if (n_ant == 0 || n_sub == 0 || pilot_spacing == 0 || n_pilots == 0) {
        throw InvalidArgument("SystemConfig: dimensions must be positive");
    }
    if (!(subcarrier_spacing_hz > 0.0)) {
        throw InvalidArgument("SystemConfig: subcarrier spacing must be positive");
    }
    if (static_cast<std::uint64_t>(n_pilots) * pilot_spacing > n_sub) {
        throw InvalidArgument("SystemConfig: n_pilots * pilot_spacing exceeds n_sub (" +
                              std::to_string(n_pilots) + " * " + std::to_string(pilot_spacing) +
                              " > " + std::to_string(n_sub) + ")");
    }
}

SystemConfig SystemConfig::truncated() const {
    SystemConfig out = *this;
    out.n_sub = n_pilots * pilot_spacing;
    return out;
}

SystemConfig make_config(std::uint32_t n_ant, std::uint32_t n_sub, std::uint32_t pilot_spacing,
                         double subcarrier_spacing_hz) {
    if (pilot_spacing == 0) throw InvalidArgument("make_config: pilot spacing must be positive");
    SystemConfig cfg{n_ant, n_sub, pilot_spacing, n_sub / pilot_spacing, subcarrier_spacing_hz};
    cfg.validate();
    return cfg;
}

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::AF: return "AF";
        case Domain::AD: return "AD";
        case Domain::BD: return "BD";
    }
    return "?";
}

void CsiMatrix::require(Domain expected, std::string_view op) const {
    if (domain_ != expected) {
        throw DomainError(std::string(op) + ": expected " + std::string(to_string(expected)) +
                          " input, got " + std::string(to_string(domain_)));
    }
}

}  // namespace csiup
