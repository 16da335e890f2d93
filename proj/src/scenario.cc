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

#include "gcran/scenario.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace gcran {

namespace {

// Scalar, list, or {base, step} arithmetic progression.
Eigen::VectorXd per_entry(const YAML::Node& node, int count, const std::string& key) {
  Eigen::VectorXd out(count);
  if (!node) throw ConfigError("missing key '" + key + "'");
  if (node.IsScalar()) {
    out.setConstant(node.as<double>());
  } else if (node.IsSequence()) {
    if (static_cast<int>(node.size()) != count) {
      throw ConfigError("'" + key + "' lists " + std::to_string(node.size()) + " values, expected " +
                        std::to_string(count));
    }
    for (int i = 0; i < count; ++i) out(i) = node[i].as<double>();
  } else if (node.IsMap() && node["base"]) {
    const double base = node["base"].as<double>();
    const double step = node["step"] ? node["step"].as<double>() : 0.0;
    for (int i = 0; i < count; ++i) out(i) = base + step * i;
  } else {
    throw ConfigError("'" + key + "' must be a number, a list, or {base, step}");
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario is not valid YAML: ") + e.what());
  }
  Scenario sc;
  try {
    sc.name = root["name"] ? root["name"].as<std::string>() : "unnamed";

    const YAML::Node rrhs = root["rrhs"];
    if (!rrhs) throw ConfigError("missing section 'rrhs'");
    const int l = rrhs["count"].as<int>();
    if (l <= 0) throw ConfigError("rrhs.count must be positive");
    NetworkConfig& cfg = sc.network;
    const Eigen::VectorXd antennas = per_entry(rrhs["antennas"], l, "rrhs.antennas");
    for (int i = 0; i < l; ++i) cfg.antennas.push_back(static_cast<int>(std::lround(antennas(i))));
    cfg.max_tx_power = per_entry(rrhs["max_tx_power_w"], l, "rrhs.max_tx_power_w");
    cfg.fronthaul_power = per_entry(rrhs["fronthaul_power_w"], l, "rrhs.fronthaul_power_w");
    cfg.drain_inefficiency = per_entry(rrhs["drain_inefficiency"], l, "rrhs.drain_inefficiency");
    const YAML::Node weights = rrhs["group_weights"];
    // Named weights are rescaled to unit mean: the MM iterates do not depend
    // on a uniform scale but the absolute stopping test does.
    const auto unit_mean = [&](const Eigen::VectorXd& w) {
      const double mean = w.mean();
      return mean > 0.0 ? Eigen::VectorXd(w / mean) : Eigen::VectorXd::Ones(l);
    };
    const std::string named = weights && weights.IsScalar() ? weights.as<std::string>() : "";
    if (!weights || named == "sqrt_fronthaul") {
      // sqrt(P^c_l / eta_l): the mixed l1/l2 surrogate of the fronthaul cost.
      cfg.group_weights = unit_mean(cfg.fronthaul_power.cwiseQuotient(cfg.drain_inefficiency).cwiseSqrt());
    } else if (named == "fronthaul") {
      cfg.group_weights = unit_mean(cfg.fronthaul_power);
    } else if (named == "uniform") {
      cfg.group_weights = Eigen::VectorXd::Ones(l);
    } else if (weights.IsScalar()) {
      throw ConfigError("rrhs.group_weights must be sqrt_fronthaul, fronthaul, uniform or a list");
    } else {
      cfg.group_weights = per_entry(weights, l, "rrhs.group_weights");
    }

    const YAML::Node groups = root["groups"];
    if (!groups || !groups.IsSequence()) throw ConfigError("'groups' must list the number of users per group");
    int next = 0;
    for (const auto& g : groups) {
      const int size = g.as<int>();
      if (size <= 0) throw ConfigError("multicast groups must be non-empty");
      std::vector<int> members(size);
      for (int i = 0; i < size; ++i) members[i] = next++;
      cfg.groups.push_back(std::move(members));
    }
    const int k = next;

    const YAML::Node users = root["users"];
    if (!users) throw ConfigError("missing section 'users'");
    cfg.noise_sigma = per_entry(users["noise_sigma"], k, "users.noise_sigma");
    const Eigen::VectorXd target_db = per_entry(users["target_sinr_db"], k, "users.target_sinr_db");
    cfg.target_sinr = target_db.unaryExpr([](double db) { return db_to_linear(db); });

    const YAML::Node channel = root["channel"];
    if (!channel) throw ConfigError("missing section 'channel'");
    const std::string model = channel["model"].as<std::string>();
    if (model == "tiers") {
      TierModel tiers;
      for (const auto& t : channel["tiers"]) tiers.tiers.push_back({t["size"].as<int>(), t["gain"].as<double>()});
      cfg.large_scale = tiers;
    } else if (model == "gains") {
      const YAML::Node rows = channel["gains"];
      if (!rows || !rows.IsSequence() || static_cast<int>(rows.size()) != k) {
        throw ConfigError("channel.gains must have one row per user");
      }
      GainMap map{Eigen::MatrixXd(k, l)};
      for (int u = 0; u < k; ++u) map.gains.row(u) = per_entry(rows[u], l, "channel.gains row").transpose();
      cfg.large_scale = map;
    } else {
      throw ConfigError("unknown channel model '" + model + "' (expected tiers or gains)");
    }

    if (const YAML::Node ex = root["experiment"]) {
      if (ex["sinr_db"]) sc.sinr_db = ex["sinr_db"].as<std::vector<double>>();
      if (ex["seeds"]) sc.seeds = ex["seeds"].as<int>();
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
  sc.network.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

NetworkConfig with_target_sinr_db(NetworkConfig cfg, double db) {
  cfg.target_sinr.setConstant(cfg.num_users(), db_to_linear(db));
  return cfg;
}

}  // namespace gcran
