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

// Semidefinite relaxations of the beamforming problems, in conic standard
// form.
//
// Each multicast group m carries a Hermitian covariance Q_m = v_m v_m^H
// (rank constraint dropped).  Q_m is restricted to the antennas of the active
// RRHs (N_A rows) and stored as hvec(Q_m) in one contiguous variable block,
// so that
//
//   Tr(Theta Q) = <hvec(Theta), hvec(Q)>
//
// for every Hermitian data matrix Theta.
//
// Variable layout (in order): hvec(Q_m) for every kept group, then the
// family-specific extras (admission slacks x_k and epigraph t_k, or the
// l1/linf bounds t_{l1,l2} for l1 <= l2).  Row layout: QoS rows (NONNEG, one
// per admitted user), per-RRH power rows (NONNEG), one Hermitian PSD block
// per kept group, then the family-specific cones.

#ifndef GCRAN_LIFT_H_
#define GCRAN_LIFT_H_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcran/conic.h"
#include "gcran/model.h"

namespace gcran {

// One Hermitian N x N matrix per group of the network (zero for groups that
// were dropped and on rows/columns of inactive RRHs).
struct LiftedVars {
  std::vector<Eigen::MatrixXcd> q;
};

struct LiftedLayout {
  std::vector<int> rrhs;          // active RRHs, ascending
  std::vector<int> users;         // admitted users, ascending
  std::vector<int> groups;        // groups with at least one admitted user
  std::vector<int> antenna_rows;  // full antenna index of every reduced row
  int side = 0;                   // number of active antennas
  std::vector<int> block_offsets; // variable offset of hvec(Q_m), per kept group
  std::vector<int> psd_rows;      // row offset of each kept group's PSD block
  int qos_row = 0;                // first QoS row
  int power_row = 0;              // first power row
  int slack_offset = -1;          // x_k per admitted user
  int epigraph_offset = -1;       // t_k >= w_k x_k^2 per admitted user
  int linf_offset = -1;           // one bound per pair in linf_pairs
  std::vector<std::pair<int, int>> linf_pairs;  // (l1, l2) with l1 <= l2
};

struct LiftedProblem {
  ConicProblem problem;
  LiftedLayout layout;
};

// gamma_k (sum_{i != m} Tr(Theta_k Q_i) + sigma_k^2) - Tr(Theta_k Q_m).
double lkm(const LiftedVars& q, const Channel& ch, int k, const NetworkConfig& cfg);

// Q_m = v_m v_m^H.
LiftedVars lift_beamformer(const Beamformer& v);

// sum_m Tr(C_l Q_m) per RRH.
Eigen::VectorXd group_powers(const LiftedVars& q, const NetworkConfig& cfg);

// sum_l group_power_l / eta_l.
double lifted_transmit_power(const LiftedVars& q, const NetworkConfig& cfg);

// minimize sum_l w_l sum_m Tr(C_l Q_m)  s.t. QoS, per-RRH power, Q_m PSD.
LiftedProblem build_weighted_power_sdp(const Eigen::VectorXd& rrh_weights, const NetworkConfig& cfg,
                                       const Channel& ch);

// minimize sum_k w_k x_k^2  s.t. L_k(Q) <= x_k, x >= 0, per-RRH power.
// Weights must be positive.  The epigraph w_k x_k^2 <= t_k is imposed
// through [[t_k, sqrt(w_k) x_k], [sqrt(w_k) x_k, 1]] PSD.
LiftedProblem build_admission_sdp(const Eigen::VectorXd& user_weights, const NetworkConfig& cfg,
                                  const Channel& ch);

// minimize sum_k x_k  s.t. L_k(Q) <= x_k, x >= 0, per-RRH power, over the
// given users with every RRH active.
LiftedProblem build_admission_l1(const std::vector<int>& users, const NetworkConfig& cfg, const Channel& ch);

// Zero objective; QoS for `users`, power for `rrhs`.  Groups without admitted
// users are dropped.  No users gives an empty, trivially feasible problem;
// users without RRHs give a problem whose rows alone are infeasible.
LiftedProblem build_feasibility(const std::vector<int>& rrhs, const std::vector<int>& users,
                                const NetworkConfig& cfg, const Channel& ch);

// minimize sum_{l in rrhs} sum_m Tr(C_l Q_m) / eta_l under the constraints of
// build_feasibility().
LiftedProblem build_transmit_power_min(const std::vector<int>& rrhs, const std::vector<int>& users,
                                       const NetworkConfig& cfg, const Channel& ch);

// minimize sum_{l1, l2} W(l1, l2) t_{l1,l2}  with t_{l1,l2} >= |Q_m(i, j)|
// for all groups and entries i in RRH l1, j in RRH l2.  W is L x L; the
// bound is shared by (l1, l2) and (l2, l1).
LiftedProblem build_linf_iterate(const Eigen::MatrixXd& pair_weights, const NetworkConfig& cfg,
                                 const Channel& ch);

// Hermitian covariances from a solution (read from the PSD slacks, which lie
// in the cone exactly).
LiftedVars extract_lifted(const LiftedProblem& lp, const ConicSolution& sol, const NetworkConfig& cfg);

// Admission slacks x_k per admitted user, clamped at zero.
Eigen::VectorXd extract_slacks(const LiftedProblem& lp, const ConicSolution& sol);

// Symmetric L x L matrix of the l1/linf bounds.
Eigen::MatrixXd extract_linf_bounds(const LiftedProblem& lp, const ConicSolution& sol, const NetworkConfig& cfg);

std::vector<int> all_rrhs(const NetworkConfig& cfg);
std::vector<int> all_users(const NetworkConfig& cfg);

}  // namespace gcran

#endif  // GCRAN_LIFT_H_
