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

#include "gcran/lift.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gcran {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<int> all_rrhs(const NetworkConfig& cfg) {
  std::vector<int> out(cfg.num_rrhs());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> all_users(const NetworkConfig& cfg) {
  std::vector<int> out(cfg.num_users());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

double lkm(const LiftedVars& q, const Channel& ch, int k, const NetworkConfig& cfg) {
  if (static_cast<int>(q.q.size()) != cfg.num_groups()) throw std::invalid_argument("lkm: one matrix per group");
  const int m = cfg.user_groups().at(k);
  const auto h = ch.h.col(k);
  double signal = 0.0, interference = 0.0;
  for (int i = 0; i < cfg.num_groups(); ++i) {
    if (!is_hermitian(q.q[i])) throw std::invalid_argument("lkm: covariance is not Hermitian");
    const double t = (h.adjoint() * q.q[i] * h)(0).real();
    (i == m ? signal : interference) += t;
  }
  const double noise = cfg.noise_sigma(k) * cfg.noise_sigma(k);
  return cfg.target_sinr(k) * (interference + noise) - signal;
}

LiftedVars lift_beamformer(const Beamformer& v) {
  LiftedVars out;
  for (int m = 0; m < v.v.cols(); ++m) out.q.push_back(v.v.col(m) * v.v.col(m).adjoint());
  return out;
}

VectorXd group_powers(const LiftedVars& q, const NetworkConfig& cfg) {
  VectorXd out = VectorXd::Zero(cfg.num_rrhs());
  for (const MatrixXcd& qm : q.q) {
    for (int l = 0; l < cfg.num_rrhs(); ++l) {
      const int off = cfg.antenna_offset(l);
      for (int a = 0; a < cfg.antennas[l]; ++a) out(l) += qm(off + a, off + a).real();
    }
  }
  return out;
}

double lifted_transmit_power(const LiftedVars& q, const NetworkConfig& cfg) {
  return group_powers(q, cfg).cwiseQuotient(cfg.drain_inefficiency).sum();
}

namespace {

enum class Objective { kNone, kGroupPower, kTransmitPower, kSquaredSlack, kL1Slack, kLinf };

struct Family {
  Objective objective = Objective::kNone;
  const VectorXd* weights = nullptr;      // per RRH (kGroupPower) or per user (kSquaredSlack)
  const MatrixXd* pair_weights = nullptr; // kLinf
};

class Assembler {
 public:
  Assembler(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
            const Channel& ch)
      : cfg_(cfg), ch_(ch) {
    auto& lay = lp_.layout;
    lay.rrhs = rrhs;
    lay.users = users;
    std::sort(lay.rrhs.begin(), lay.rrhs.end());
    std::sort(lay.users.begin(), lay.users.end());
    for (int l : lay.rrhs) {
      if (l < 0 || l >= cfg.num_rrhs()) throw std::invalid_argument("RRH index out of range");
      for (int a = 0; a < cfg.antennas[l]; ++a) lay.antenna_rows.push_back(cfg.antenna_offset(l) + a);
    }
    user_group_ = cfg.user_groups();
    std::vector<char> kept(cfg.num_groups(), 0);
    for (int k : lay.users) {
      if (k < 0 || k >= cfg.num_users()) throw std::invalid_argument("user index out of range");
      kept[user_group_[k]] = 1;
    }
    for (int m = 0; m < cfg.num_groups(); ++m) {
      if (kept[m]) lay.groups.push_back(m);
    }
    na_ = static_cast<int>(lay.antenna_rows.size());
    lay.side = na_;
    dim_ = hvec_dim(na_);
  }

  LiftedProblem build(const Family& f) {
    auto& lay = lp_.layout;
    for (size_t g = 0; g < lay.groups.size(); ++g) {
      lay.block_offsets.push_back(b_.add_variables("X" + std::to_string(lay.groups[g]), dim_));
    }
    const bool slack = f.objective == Objective::kSquaredSlack || f.objective == Objective::kL1Slack;
    const int nu = static_cast<int>(lay.users.size());
    if (slack) lay.slack_offset = b_.add_variables("x", nu);
    if (f.objective == Objective::kSquaredSlack) lay.epigraph_offset = b_.add_variables("t", nu);
    if (f.objective == Objective::kLinf) {
      for (size_t i = 0; i < lay.rrhs.size(); ++i) {
        for (size_t j = i; j < lay.rrhs.size(); ++j) lay.linf_pairs.emplace_back(lay.rrhs[i], lay.rrhs[j]);
      }
      lay.linf_offset = b_.add_variables("t", static_cast<int>(lay.linf_pairs.size()));
    }

    add_qos_rows(slack);
    add_power_rows();
    if (lay.side > 0) {
      for (size_t g = 0; g < lay.groups.size(); ++g) {
        const int row = b_.add_cone({ConeKind::kHermitianPsd, lay.side});
        lay.psd_rows.push_back(row);
        for (int j = 0; j < dim_; ++j) b_.add_a(row + j, lay.block_offsets[g] + j, -1.0);
      }
    }
    if (slack) {
      const int row = b_.add_cone({ConeKind::kNonneg, nu});
      for (int i = 0; i < nu; ++i) b_.add_a(row + i, lay.slack_offset + i, -1.0);
    }

    switch (f.objective) {
      case Objective::kNone:
        break;
      case Objective::kGroupPower:
        for (size_t r = 0; r < lay.rrhs.size(); ++r) add_rrh_power_cost(lay.rrhs[r], (*f.weights)(lay.rrhs[r]));
        break;
      case Objective::kTransmitPower:
        for (int l : lay.rrhs) add_rrh_power_cost(l, 1.0 / cfg_.drain_inefficiency(l));
        break;
      case Objective::kSquaredSlack:
        for (int i = 0; i < nu; ++i) {
          // t >= w x^2 as svec([[t, sqrt(w) x], [sqrt(w) x, 1]]) = (t, sqrt(2 w) x, 1)
          // PSD.  Unit costs on t keep the subproblem well scaled when the
          // weights span several decades.
          const double w = (*f.weights)(lay.users[i]);
          if (!(w > 0.0)) throw std::invalid_argument("admission weights must be positive");
          b_.add_c(lay.epigraph_offset + i, 1.0);
          const int row = b_.add_cone({ConeKind::kPsd, 2});
          b_.add_a(row, lay.epigraph_offset + i, -1.0);
          b_.add_a(row + 1, lay.slack_offset + i, -kSqrt2 * std::sqrt(w));
          b_.set_b(row + 2, 1.0);
        }
        break;
      case Objective::kL1Slack:
        for (int i = 0; i < nu; ++i) b_.add_c(lay.slack_offset + i, 1.0);
        break;
      case Objective::kLinf:
        add_linf(*f.pair_weights);
        break;
    }
    lp_.problem = b_.build();
    lp_.problem.audit();
    return std::move(lp_);
  }

 private:
  // Positions of Re Q(p, q) and Im Q(p, q), p > q, inside hvec(Q); both are
  // stored times sqrt(2).
  int re_index(int p, int q) const { return hvec_index(na_, q) + 2 * (p - q) - 1; }
  int im_index(int p, int q) const { return re_index(p, q) + 1; }

  // Row `row` of s gains coef * Q_g(i, i).
  void add_diag(int row, int block, int i, double coef) { b_.add_a(row, block + hvec_index(na_, i), -coef); }

  // hvec(h h^H) on the active antennas of user k, so that the row
  // coefficients give h^H Q h.
  VectorXd lifted_gain(int k) const {
    Eigen::VectorXcd h(na_);
    for (int i = 0; i < na_; ++i) h(i) = ch_.h(lp_.layout.antenna_rows[i], k);
    return hvec(h * h.adjoint());
  }

  void add_qos_rows(bool slack) {
    auto& lay = lp_.layout;
    const int nu = static_cast<int>(lay.users.size());
    lay.qos_row = b_.add_cone({ConeKind::kNonneg, nu});
    for (int i = 0; i < nu; ++i) {
      const int k = lay.users[i];
      const int row = lay.qos_row + i;
      const double gamma = cfg_.target_sinr(k);
      if (dim_ > 0) {
        const VectorXd gain = lifted_gain(k);
        for (size_t g = 0; g < lay.groups.size(); ++g) {
          const double coef = lay.groups[g] == user_group_[k] ? -1.0 : gamma;
          for (int j = 0; j < dim_; ++j) b_.add_a(row, lay.block_offsets[g] + j, coef * gain(j));
        }
      }
      if (slack) b_.add_a(row, lay.slack_offset + i, -1.0);
      b_.set_b(row, -gamma * cfg_.noise_sigma(k) * cfg_.noise_sigma(k));
    }
  }

  // Reduced rows of RRH l.
  std::vector<int> rows_of(int l) const {
    std::vector<int> out;
    const int off = cfg_.antenna_offset(l);
    for (int i = 0; i < na_; ++i) {
      const int a = lp_.layout.antenna_rows[i];
      if (a >= off && a < off + cfg_.antennas[l]) out.push_back(i);
    }
    return out;
  }

  void add_power_rows() {
    auto& lay = lp_.layout;
    lay.power_row = b_.add_cone({ConeKind::kNonneg, static_cast<int>(lay.rrhs.size())});
    for (size_t r = 0; r < lay.rrhs.size(); ++r) {
      const int row = lay.power_row + static_cast<int>(r);
      b_.set_b(row, cfg_.max_tx_power(lay.rrhs[r]));
      for (int i : rows_of(lay.rrhs[r])) {
        // s = P_l - sum_m Tr(C_l Q_m).
        for (size_t g = 0; g < lay.groups.size(); ++g) add_diag(row, lay.block_offsets[g], i, -1.0);
      }
    }
  }

  void add_rrh_power_cost(int l, double w) {
    auto& lay = lp_.layout;
    for (int i : rows_of(l)) {
      for (size_t g = 0; g < lay.groups.size(); ++g) b_.add_c(lay.block_offsets[g] + hvec_index(na_, i), w);
    }
  }

  void add_linf(const MatrixXd& w) {
    auto& lay = lp_.layout;
    for (size_t pi = 0; pi < lay.linf_pairs.size(); ++pi) {
      const auto [l1, l2] = lay.linf_pairs[pi];
      const int t = lay.linf_offset + static_cast<int>(pi);
      b_.add_c(t, l1 == l2 ? w(l1, l1) : w(l1, l2) + w(l2, l1));
      const std::vector<int> r1 = rows_of(l1);
      const std::vector<int> r2 = rows_of(l2);
      for (size_t g = 0; g < lay.groups.size(); ++g) {
        const int blk = lay.block_offsets[g];
        for (int i : r1) {
          for (int j : r2) {
            if (l1 == l2 && j < i) continue;
            if (i == j) {
              // t - Q(i, i) >= 0.
              const int row = b_.add_cone({ConeKind::kNonneg, 1});
              b_.add_a(row, t, -1.0);
              add_diag(row, blk, i, -1.0);
              continue;
            }
            // |q| <= t with q = a + ib = Q(p, r), p > r, as [[t + a, b], [b, t - a]]
            // PSD; svec of that is (t + a, sqrt2 b, t - a) and hvec stores
            // sqrt2 a and sqrt2 b.
            const int p = std::max(i, j);
            const int r = std::min(i, j);
            const int row = b_.add_cone({ConeKind::kPsd, 2});
            b_.add_a(row, t, -1.0);
            b_.add_a(row, blk + re_index(p, r), -1.0 / kSqrt2);
            b_.add_a(row + 1, blk + im_index(p, r), -1.0);
            b_.add_a(row + 2, t, -1.0);
            b_.add_a(row + 2, blk + re_index(p, r), 1.0 / kSqrt2);
          }
        }
      }
    }
  }

  const NetworkConfig& cfg_;
  const Channel& ch_;
  ProblemBuilder b_;
  LiftedProblem lp_;
  std::vector<int> user_group_;
  int na_ = 0;
  int dim_ = 0;
};

}  // namespace

LiftedProblem build_weighted_power_sdp(const VectorXd& rrh_weights, const NetworkConfig& cfg, const Channel& ch) {
  if (rrh_weights.size() != cfg.num_rrhs()) throw std::invalid_argument("one weight per RRH expected");
  Family f{Objective::kGroupPower, &rrh_weights, nullptr};
  return Assembler(all_rrhs(cfg), all_users(cfg), cfg, ch).build(f);
}

LiftedProblem build_admission_sdp(const VectorXd& user_weights, const NetworkConfig& cfg, const Channel& ch) {
  if (user_weights.size() != cfg.num_users()) throw std::invalid_argument("one weight per user expected");
  Family f{Objective::kSquaredSlack, &user_weights, nullptr};
  return Assembler(all_rrhs(cfg), all_users(cfg), cfg, ch).build(f);
}

LiftedProblem build_admission_l1(const std::vector<int>& users, const NetworkConfig& cfg, const Channel& ch) {
  Family f{Objective::kL1Slack, nullptr, nullptr};
  return Assembler(all_rrhs(cfg), users, cfg, ch).build(f);
}

LiftedProblem build_feasibility(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
                                const Channel& ch) {
  return Assembler(rrhs, users, cfg, ch).build(Family{});
}

LiftedProblem build_transmit_power_min(const std::vector<int>& rrhs, const std::vector<int>& users,
                                       const NetworkConfig& cfg, const Channel& ch) {
  return Assembler(rrhs, users, cfg, ch).build(Family{Objective::kTransmitPower, nullptr, nullptr});
}

LiftedProblem build_linf_iterate(const MatrixXd& pair_weights, const NetworkConfig& cfg, const Channel& ch) {
  if (pair_weights.rows() != cfg.num_rrhs() || pair_weights.cols() != cfg.num_rrhs()) {
    throw std::invalid_argument("pair weights must be L x L");
  }
  Family f{Objective::kLinf, nullptr, &pair_weights};
  return Assembler(all_rrhs(cfg), all_users(cfg), cfg, ch).build(f);
}

LiftedVars extract_lifted(const LiftedProblem& lp, const ConicSolution& sol, const NetworkConfig& cfg) {
  const auto& lay = lp.layout;
  const int n = cfg.total_antennas();
  const int na = lay.side;
  LiftedVars out;
  out.q.assign(cfg.num_groups(), MatrixXcd::Zero(n, n));
  if (lay.side == 0 || sol.s.size() == 0) return out;
  for (size_t g = 0; g < lay.groups.size(); ++g) {
    const MatrixXcd reduced = hmat(sol.s.segment(lay.psd_rows[g], hvec_dim(lay.side)), lay.side);
    MatrixXcd& q = out.q[lay.groups[g]];
    for (int j = 0; j < na; ++j) {
      for (int i = 0; i < na; ++i) q(lay.antenna_rows[i], lay.antenna_rows[j]) = reduced(i, j);
    }
  }
  return out;
}

VectorXd extract_slacks(const LiftedProblem& lp, const ConicSolution& sol) {
  const auto& lay = lp.layout;
  if (lay.slack_offset < 0) throw std::invalid_argument("problem has no slack variables");
  return sol.x.segment(lay.slack_offset, static_cast<Eigen::Index>(lay.users.size())).cwiseMax(0.0);
}

MatrixXd extract_linf_bounds(const LiftedProblem& lp, const ConicSolution& sol, const NetworkConfig& cfg) {
  const auto& lay = lp.layout;
  if (lay.linf_offset < 0) throw std::invalid_argument("problem has no l1/linf bounds");
  MatrixXd t = MatrixXd::Zero(cfg.num_rrhs(), cfg.num_rrhs());
  for (size_t i = 0; i < lay.linf_pairs.size(); ++i) {
    const auto [a, b] = lay.linf_pairs[i];
    t(a, b) = t(b, a) = std::max(0.0, sol.x(lay.linf_offset + static_cast<int>(i)));
  }
  return t;
}

}  // namespace gcran
