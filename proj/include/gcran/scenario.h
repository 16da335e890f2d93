// Copyright 2026 The green-cran Authors. All Rights Reserved.
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

// YAML scenario files.  The schema is documented in scenarios/README.md.
// SINR targets are given in dB and converted to linear scale here, once.

#ifndef GCRAN_SCENARIO_H_
#define GCRAN_SCENARIO_H_

#include <cmath>
#include <string>
#include <vector>

#include "gcran/model.h"

namespace gcran {

struct Scenario {
  std::string name;
  NetworkConfig network;
  // Optional experiment defaults; empty / zero when absent.
  std::vector<double> sinr_db;
  int seeds = 0;
};

Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::string& path);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Copy of `cfg` with every user's target set to `db`.
NetworkConfig with_target_sinr_db(NetworkConfig cfg, double db);

}  // namespace gcran

#endif  // GCRAN_SCENARIO_H_
