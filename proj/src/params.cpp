// Copyright 2026 The mpxcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpx/params.hpp"

#include <fmt/format.h>

#include "mpx/errors.hpp"

namespace mpx {

void SystemParams::validate() const {
  const std::pair<const char*, double> rates[] = {
      {"Gamma_ro", Gamma_ro},     {"Gamma_1_s", Gamma_1_s},   {"Gamma_2_s", Gamma_2_s},
      {"Gamma_1_yn", Gamma_1_yn}, {"Gamma_2_yn", Gamma_2_yn}, {"Gamma_1_mp", Gamma_1_mp},
      {"Gamma_2_mp", Gamma_2_mp}};
  for (const auto& [name, v] : rates)
    if (!(v >= 0)) throw ConfigError(fmt::format("{} must be >= 0, got {}", name, v));
  const std::pair<const char*, double> phis[] = {
      {"storage", Gamma_phi_s()}, {"yes-no", Gamma_phi_yn()}, {"multiplexing", Gamma_phi_mp()}};
  for (const auto& [name, v] : phis)
    if (v < 0) throw ConfigError(fmt::format("{} pure dephasing Gamma_2 - Gamma_1/2 = {} < 0", name, v));
  if (!(n_th_s >= 0)) throw ConfigError(fmt::format("n_th_s must be >= 0, got {}", n_th_s));
}

SystemParams table_params() {
  SystemParams p;
  p.chi_s_yn = 1.4;
  return p;
}

SystemParams fitted_params() { return SystemParams{}; }

}  // namespace mpx
