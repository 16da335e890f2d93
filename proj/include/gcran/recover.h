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

// Beamformers from relaxed covariances.
//
// Directions come either from the principal eigenvector (when every
// covariance is numerically rank one) or from Gaussian samples with the
// covariance of Q_m; powers always come from the multigroup power-control LP,
// so every returned beamformer meets the retained QoS and per-RRH power
// constraints up to the audit tolerances.

#ifndef GCRAN_RECOVER_H_
#define GCRAN_RECOVER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gcran/conic.h"
#include "gcran/lift.h"
#include "gcran/model.h"

namespace gcran {

enum class RecoveryMethod { kRankOneExact, kRandomized };

const char* to_string(RecoveryMethod method);

struct RecoveryReport {
  RecoveryMethod method = RecoveryMethod::kRankOneExact;
  std::vector<double> rank_ratio;  // per group; 0 for dropped groups
  double rank_ratio_max = 0.0;
  int candidates_tried = 0;
  double transmit_w = 0.0;         // sum_l |v_l|^2 / eta_l of the result
  double worst_qos_slack = 0.0;    // min over retained users of -qos_margin
  double worst_power_ratio = 0.0;  // max over RRHs of power / P_l
};

struct RecoveryOptions {
  int candidates = 50;
  int retry_factor = 4;
  double rank_one_threshold = 1e-6;
  std::uint64_t seed = 0;
};

struct Recovery {
  Beamformer beamformer;
  RecoveryReport report;
};

// lambda_2 / lambda_1; 0 for rank one or zero input.
double rank_ratio(const Eigen::MatrixXcd& q);

// sqrt(lambda_1) u_1 with the first nonzero entry real and positive.
Eigen::VectorXcd extract_rank_one(const Eigen::MatrixXcd& q);

// Group powers p (one per column of `directions`) minimizing sum_m p_m subject
// to the QoS of `users` and the per-RRH power limits.  Columns must be unit
// norm or zero; zero columns get zero power.  nullopt when no powers work.
std::optional<Eigen::VectorXd> power_control_lp(const Eigen::MatrixXcd& directions, const std::vector<int>& users,
                                                const NetworkConfig& cfg, const Channel& ch);

// Full recovery for the covariances of a solved relaxation over `users`.
std::optional<Recovery> gaussian_randomize(const LiftedVars& q, const std::vector<int>& users,
                                           const NetworkConfig& cfg, const Channel& ch,
                                           const RecoveryOptions& options = {});

struct BeamformerAudit {
  double worst_qos_slack = 0.0;    // >= -1e-6 required
  double worst_power_ratio = 0.0;  // <= 1 + 1e-8 required

  bool ok() const { return worst_qos_slack >= -1e-6 && worst_power_ratio <= 1.0 + 1e-8; }
};

BeamformerAudit audit_beamformer(const Beamformer& v, const std::vector<int>& users, const NetworkConfig& cfg,
                                 const Channel& ch);

}  // namespace gcran

#endif  // GCRAN_RECOVER_H_
