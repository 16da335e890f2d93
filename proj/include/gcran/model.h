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

// Downlink multicast network: RRHs with multi-antenna arrays serving
// single-antenna users organised in disjoint multicast groups.
//
// Antennas are stacked RRH by RRH, so the aggregate channel of user k and
// the beamformer of group m are length-N vectors whose rows
// [offset(l), offset(l) + N_l) belong to RRH l.  All powers are in watts and
// SINR targets are linear.

#ifndef GCRAN_MODEL_H_
#define GCRAN_MODEL_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gcran {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `size` RRHs drawn uniformly per user, all with amplitude gain `gain`.
struct Tier {
  int size;
  double gain;
};

struct TierModel {
  std::vector<Tier> tiers;
};

// Explicit K x L amplitude gains.
struct GainMap {
  Eigen::MatrixXd gains;
};

struct NetworkConfig {
  std::vector<int> antennas;              // per RRH
  std::vector<std::vector<int>> groups;   // 0-based user indices
  Eigen::VectorXd max_tx_power;           // per RRH
  Eigen::VectorXd fronthaul_power;        // per RRH, >= 0
  Eigen::VectorXd drain_inefficiency;     // per RRH, in (0, 1]
  Eigen::VectorXd noise_sigma;            // per user
  Eigen::VectorXd target_sinr;            // per user, linear
  Eigen::VectorXd group_weights;          // per RRH, > 0
  std::variant<TierModel, GainMap> large_scale;

  int num_rrhs() const { return static_cast<int>(antennas.size()); }
  int num_groups() const { return static_cast<int>(groups.size()); }
  int num_users() const;
  int total_antennas() const;

  // First antenna row of RRH l.
  int antenna_offset(int l) const;
  // Group index of every user.
  std::vector<int> user_groups() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

struct Channel {
  Eigen::MatrixXcd h;  // N x K, column k is the aggregate channel of user k
  std::uint64_t seed = 0;
};

struct Beamformer {
  Eigen::MatrixXcd v;  // N x M, column m is the beamformer of group m
};

struct PowerBreakdown {
  double transmit_w = 0.0;
  double fronthaul_w = 0.0;
  double total_w = 0.0;
  std::vector<int> active_rrhs;
};

Channel generate_channel(const NetworkConfig& cfg, std::uint64_t seed);

// Per-user large-scale amplitudes (K x L) drawn for `seed`.
Eigen::MatrixXd large_scale_gains(const NetworkConfig& cfg, std::uint64_t seed);

double sinr(const Channel& ch, const Beamformer& v, int k, const NetworkConfig& cfg);

// gamma_k (interference + noise) - signal; <= 0 iff the target is met.
double qos_margin(const Channel& ch, const Beamformer& v, int k, const NetworkConfig& cfg);

// Sum over groups of |v_m restricted to RRH l|^2, per RRH.
Eigen::VectorXd rrh_power(const Beamformer& v, const NetworkConfig& cfg);

double default_zero_tol(const NetworkConfig& cfg);

PowerBreakdown network_power(const Beamformer& v, const NetworkConfig& cfg, double zero_tol);
inline PowerBreakdown network_power(const Beamformer& v, const NetworkConfig& cfg) {
  return network_power(v, cfg, default_zero_tol(cfg));
}

// Sum_l rho_l |v restricted to RRH l|_2.
double mixed_l12_norm(const Beamformer& v, const NetworkConfig& cfg, const Eigen::VectorXd& rho);

// Channel power gain of every RRH: sum_k |h_kl|^2.
Eigen::VectorXd channel_gains(const Channel& ch, const NetworkConfig& cfg);

}  // namespace gcran

#endif  // GCRAN_MODEL_H_
