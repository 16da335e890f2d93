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

#include "gcran/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcran/rng.h"

namespace gcran {

int NetworkConfig::num_users() const {
  int k = 0;
  for (const auto& g : groups) k += static_cast<int>(g.size());
  return k;
}

int NetworkConfig::total_antennas() const { return std::accumulate(antennas.begin(), antennas.end(), 0); }

int NetworkConfig::antenna_offset(int l) const {
  return std::accumulate(antennas.begin(), antennas.begin() + l, 0);
}

std::vector<int> NetworkConfig::user_groups() const {
  std::vector<int> out(num_users(), -1);
  for (int m = 0; m < num_groups(); ++m) {
    for (int k : groups[m]) out[k] = m;
  }
  return out;
}

void NetworkConfig::validate() const {
  const int l = num_rrhs();
  if (l <= 0) throw ConfigError("network needs at least one RRH");
  for (int n : antennas) {
    if (n <= 0) throw ConfigError("antenna counts must be positive");
  }
  if (groups.empty()) throw ConfigError("network needs at least one multicast group");
  const int k = num_users();
  std::vector<int> seen(k, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw ConfigError("multicast groups must be non-empty");
    for (int u : g) {
      if (u < 0 || u >= k) throw ConfigError("user index " + std::to_string(u) + " out of range");
      if (seen[u]++) throw ConfigError("user " + std::to_string(u) + " belongs to more than one group");
    }
  }
  auto check = [](const Eigen::VectorXd& v, int n, const char* name, bool allow_zero) {
    if (v.size() != n) throw ConfigError(std::string(name) + ": expected " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(v(i)) || v(i) < 0.0 || (!allow_zero && v(i) == 0.0)) {
        throw ConfigError(std::string(name) + " must be " + (allow_zero ? "nonnegative" : "positive"));
      }
    }
  };
  check(max_tx_power, l, "max_tx_power", false);
  check(fronthaul_power, l, "fronthaul_power", true);
  check(drain_inefficiency, l, "drain_inefficiency", false);
  check(group_weights, l, "group_weights", false);
  check(noise_sigma, k, "noise_sigma", false);
  check(target_sinr, k, "target_sinr", false);
  if (drain_inefficiency.maxCoeff() > 1.0) throw ConfigError("drain_inefficiency must lie in (0, 1]");
  if (const auto* tiers = std::get_if<TierModel>(&large_scale)) {
    int covered = 0;
    for (const Tier& t : tiers->tiers) {
      if (t.size < 0 || !(t.gain >= 0.0)) throw ConfigError("tier sizes and gains must be nonnegative");
      covered += t.size;
    }
    if (covered != l) {
      throw ConfigError("tiers cover " + std::to_string(covered) + " RRHs but the network has " + std::to_string(l));
    }
  } else {
    const auto& g = std::get<GainMap>(large_scale).gains;
    if (g.rows() != k || g.cols() != l) throw ConfigError("gain map must be users x RRHs");
    if (!g.allFinite() || g.minCoeff() < 0.0) throw ConfigError("gain map entries must be nonnegative");
  }
}

Eigen::MatrixXd large_scale_gains(const NetworkConfig& cfg, std::uint64_t seed) {
  const int k = cfg.num_users();
  const int l = cfg.num_rrhs();
  if (const auto* map = std::get_if<GainMap>(&cfg.large_scale)) return map->gains;
  const auto& tiers = std::get<TierModel>(cfg.large_scale).tiers;
  Eigen::MatrixXd d(k, l);
  for (int u = 0; u < k; ++u) {
    Stream stream(seed, "tiers", static_cast<std::uint64_t>(u));
    std::vector<int> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), stream.engine());
    int pos = 0;
    for (const Tier& t : tiers) {
      for (int i = 0; i < t.size; ++i) d(u, order[pos++]) = t.gain;
    }
  }
  return d;
}

Channel generate_channel(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int k = cfg.num_users();
  const int n = cfg.total_antennas();
  const Eigen::MatrixXd d = large_scale_gains(cfg, seed);
  Channel ch;
  ch.seed = seed;
  ch.h.resize(n, k);
  Stream stream(seed, "small-scale", 0);
  for (int u = 0; u < k; ++u) {
    for (int l = 0; l < cfg.num_rrhs(); ++l) {
      const int off = cfg.antenna_offset(l);
      for (int a = 0; a < cfg.antennas[l]; ++a) ch.h(off + a, u) = d(u, l) * stream.complex_normal();
    }
  }
  return ch;
}

namespace {

void check_dims(const Channel& ch, const Beamformer& v, int k, const NetworkConfig& cfg) {
  if (ch.h.rows() != cfg.total_antennas() || ch.h.cols() != cfg.num_users()) {
    throw std::invalid_argument("channel dimensions do not match the network");
  }
  if (v.v.rows() != cfg.total_antennas() || v.v.cols() != cfg.num_groups()) {
    throw std::invalid_argument("beamformer dimensions do not match the network");
  }
  if (k < 0 || k >= cfg.num_users()) throw std::invalid_argument("user index out of range");
}

// Received power of every group's stream at user k.
Eigen::VectorXd received(const Channel& ch, const Beamformer& v, int k) {
  return (ch.h.col(k).adjoint() * v.v).cwiseAbs2().transpose();
}

}  // namespace

double sinr(const Channel& ch, const Beamformer& v, int k, const NetworkConfig& cfg) {
  check_dims(ch, v, k, cfg);
  const int m = cfg.user_groups()[k];
  const Eigen::VectorXd p = received(ch, v, k);
  const double signal = p(m);
  const double interference = p.sum() - signal;
  const double noise = cfg.noise_sigma(k) * cfg.noise_sigma(k);
  return signal / (interference + noise);
}

double qos_margin(const Channel& ch, const Beamformer& v, int k, const NetworkConfig& cfg) {
  check_dims(ch, v, k, cfg);
  const int m = cfg.user_groups()[k];
  const Eigen::VectorXd p = received(ch, v, k);
  const double signal = p(m);
  const double interference = p.sum() - signal;
  const double noise = cfg.noise_sigma(k) * cfg.noise_sigma(k);
  return cfg.target_sinr(k) * (interference + noise) - signal;
}

Eigen::VectorXd rrh_power(const Beamformer& v, const NetworkConfig& cfg) {
  Eigen::VectorXd out(cfg.num_rrhs());
  for (int l = 0; l < cfg.num_rrhs(); ++l) {
    out(l) = v.v.middleRows(cfg.antenna_offset(l), cfg.antennas[l]).squaredNorm();
  }
  return out;
}

double default_zero_tol(const NetworkConfig& cfg) { return 1e-6 * std::sqrt(cfg.max_tx_power.maxCoeff()); }

PowerBreakdown network_power(const Beamformer& v, const NetworkConfig& cfg, double zero_tol) {
  PowerBreakdown out;
  const Eigen::VectorXd per_rrh = rrh_power(v, cfg);
  for (int l = 0; l < cfg.num_rrhs(); ++l) {
    out.transmit_w += per_rrh(l) / cfg.drain_inefficiency(l);
    if (std::sqrt(per_rrh(l)) > zero_tol) {
      out.fronthaul_w += cfg.fronthaul_power(l);
      out.active_rrhs.push_back(l);
    }
  }
  out.total_w = out.transmit_w + out.fronthaul_w;
  return out;
}

double mixed_l12_norm(const Beamformer& v, const NetworkConfig& cfg, const Eigen::VectorXd& rho) {
  const Eigen::VectorXd per_rrh = rrh_power(v, cfg);
  return rho.dot(per_rrh.cwiseSqrt());
}

Eigen::VectorXd channel_gains(const Channel& ch, const NetworkConfig& cfg) {
  Eigen::VectorXd out(cfg.num_rrhs());
  for (int l = 0; l < cfg.num_rrhs(); ++l) {
    out(l) = ch.h.middleRows(cfg.antenna_offset(l), cfg.antennas[l]).squaredNorm();
  }
  return out;
}

}  // namespace gcran
