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

#include "gcran/recover.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcran/rng.h"

namespace gcran {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// The conic LP only seeds the exact fixed-point polish, so modest accuracy
// is enough.
ConicSettings lp_settings() {
  ConicSettings s;
  s.tol = 1e-8;
  s.max_iters = 2000;
  return s;
}

constexpr int kMaxFixedPointIters = 100000;
constexpr double kFixedPointTol = 1e-15;
// Largest accepted QoS violation after clipping onto the power limits: the
// audit tolerance itself.  Directions taken from a relaxation solved to
// residual r overshoot the power limits by O(r) on barely feasible sets.
constexpr double kClipQosTol = 1e-6;

}  // namespace

const char* to_string(RecoveryMethod method) {
  return method == RecoveryMethod::kRankOneExact ? "RankOneExact" : "Randomized";
}

double rank_ratio(const MatrixXcd& q) {
  if (q.rows() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(q, Eigen::EigenvaluesOnly);
  const VectorXd& lambda = eig.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  if (top <= 0.0) return 0.0;
  return std::max(0.0, lambda(lambda.size() - 2)) / top;
}

VectorXcd extract_rank_one(const MatrixXcd& q) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(q);
  const Eigen::Index n = q.rows();
  const double top = eig.eigenvalues()(n - 1);
  if (top <= 0.0) return VectorXcd::Zero(n);
  VectorXcd v = std::sqrt(top) * eig.eigenvectors().col(n - 1);
  const double floor = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > floor) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

// The LP's QoS rows form a standard interference function
//   T(p)_m = max_{k in G_m} gamma_k (sum_{i != m} p_i a_ki + sigma_k^2) / a_km,
// whose fixed point is the componentwise-smallest QoS-feasible p.  Since the
// power rows only get looser as p shrinks, that fixed point is the LP optimum
// whenever the LP is feasible.  Iterating T from the conic solution makes the
// answer exact.
std::optional<VectorXd> power_control_lp(const MatrixXcd& directions, const std::vector<int>& users,
                                         const NetworkConfig& cfg, const Channel& ch) {
  const int m = static_cast<int>(directions.cols());
  const std::vector<int> group_of = cfg.user_groups();
  std::vector<int> used;
  for (int g = 0; g < m; ++g) {
    if (directions.col(g).squaredNorm() > 0.0) used.push_back(g);
  }
  VectorXd powers = VectorXd::Zero(m);
  if (users.empty()) return powers;
  for (int k : users) {
    if (directions.col(group_of[k]).squaredNorm() == 0.0) return std::nullopt;
  }
  const int np = static_cast<int>(used.size());
  // gains(r, g) = |h_k^H w_g|^2 for the r-th user.
  const Eigen::MatrixXd gains = (ch.h(Eigen::all, users).adjoint() * directions).cwiseAbs2();

  ProblemBuilder b;
  b.add_variables("p", np);
  for (int i = 0; i < np; ++i) b.add_c(i, 1.0);
  const int qos = b.add_cone({ConeKind::kNonneg, static_cast<int>(users.size())});
  for (size_t r = 0; r < users.size(); ++r) {
    const int k = users[r];
    const double gamma = cfg.target_sinr(k);
    for (int i = 0; i < np; ++i) {
      const int g = used[i];
      b.add_a(qos + static_cast<int>(r), i, g == group_of[k] ? -gains(r, g) : gamma * gains(r, g));
    }
    b.set_b(qos + static_cast<int>(r), -gamma * cfg.noise_sigma(k) * cfg.noise_sigma(k));
  }
  const int pow = b.add_cone({ConeKind::kNonneg, cfg.num_rrhs()});
  for (int l = 0; l < cfg.num_rrhs(); ++l) {
    const int off = cfg.antenna_offset(l);
    for (int i = 0; i < np; ++i) {
      b.add_a(pow + l, i, directions.col(used[i]).segment(off, cfg.antennas[l]).squaredNorm());
    }
    b.set_b(pow + l, cfg.max_tx_power(l));
  }
  const int nonneg = b.add_cone({ConeKind::kNonneg, np});
  for (int i = 0; i < np; ++i) b.add_a(nonneg + i, i, -1.0);

  const ConicSolution sol = solve(b.build(), lp_settings());
  if (sol.status == SolveStatus::kPrimalInfeasible) return std::nullopt;
  if (sol.status == SolveStatus::kOptimal) {
    for (int i = 0; i < np; ++i) powers(used[i]) = std::max(0.0, sol.x(i));
  }

  // Fixed-point polish.  Divergence past any power budget means infeasible.
  const double ceiling = 1e3 * cfg.max_tx_power.sum();
  bool settled = false;
  for (int it = 0; it < kMaxFixedPointIters; ++it) {
    VectorXd next = VectorXd::Zero(m);
    for (size_t r = 0; r < users.size(); ++r) {
      const int k = users[r];
      const int g = group_of[k];
      if (gains(r, g) <= 0.0) return std::nullopt;
      double interference = cfg.noise_sigma(k) * cfg.noise_sigma(k);
      for (int i : used) {
        if (i != g) interference += powers(i) * gains(r, i);
      }
      next(g) = std::max(next(g), cfg.target_sinr(k) * interference / gains(r, g));
    }
    const double change = (next - powers).cwiseAbs().maxCoeff();
    powers = next;
    if (powers.sum() > ceiling) return std::nullopt;
    if (change <= kFixedPointTol * std::max(1.0, powers.maxCoeff())) {
      settled = true;
      break;
    }
  }
  if (!settled) return std::nullopt;

  // Clip onto the power limits; shrinking every power by the same factor c
  // moves each QoS margin by at most (1 - c) gamma sigma^2.
  double shrink = 1.0;
  for (int l = 0; l < cfg.num_rrhs(); ++l) {
    const int off = cfg.antenna_offset(l);
    double used_power = 0.0;
    for (int g : used) used_power += powers(g) * directions.col(g).segment(off, cfg.antennas[l]).squaredNorm();
    if (used_power > cfg.max_tx_power(l)) shrink = std::min(shrink, cfg.max_tx_power(l) / used_power);
  }
  powers *= shrink;

  Beamformer v{directions * powers.cwiseSqrt().asDiagonal()};
  for (int k : users) {
    if (qos_margin(ch, v, k, cfg) > kClipQosTol) return std::nullopt;
  }
  return powers;
}

BeamformerAudit audit_beamformer(const Beamformer& v, const std::vector<int>& users, const NetworkConfig& cfg,
                                 const Channel& ch) {
  BeamformerAudit out;
  out.worst_qos_slack = users.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (int k : users) out.worst_qos_slack = std::min(out.worst_qos_slack, -qos_margin(ch, v, k, cfg));
  out.worst_power_ratio = rrh_power(v, cfg).cwiseQuotient(cfg.max_tx_power).maxCoeff();
  return out;
}

namespace {

Recovery finish(const MatrixXcd& directions, const VectorXd& powers, RecoveryReport report,
                const std::vector<int>& users, const NetworkConfig& cfg, const Channel& ch) {
  Recovery r;
  r.beamformer.v = directions * powers.cwiseSqrt().asDiagonal();
  r.report = std::move(report);
  r.report.transmit_w = network_power(r.beamformer, cfg).transmit_w;
  const BeamformerAudit audit = audit_beamformer(r.beamformer, users, cfg, ch);
  r.report.worst_qos_slack = audit.worst_qos_slack;
  r.report.worst_power_ratio = audit.worst_power_ratio;
  return r;
}

}  // namespace

std::optional<Recovery> gaussian_randomize(const LiftedVars& q, const std::vector<int>& users, const NetworkConfig& cfg,
                                           const Channel& ch, const RecoveryOptions& options) {
  const int m = cfg.num_groups();
  const int n = cfg.total_antennas();
  const std::vector<int> group_of = cfg.user_groups();
  std::vector<char> kept(m, 0);
  for (int k : users) kept[group_of[k]] = 1;

  RecoveryReport report;
  report.rank_ratio.assign(m, 0.0);
  for (int g = 0; g < m; ++g) {
    if (kept[g]) report.rank_ratio[g] = rank_ratio(q.q[g]);
  }
  report.rank_ratio_max = *std::max_element(report.rank_ratio.begin(), report.rank_ratio.end());

  if (report.rank_ratio_max <= options.rank_one_threshold) {
    MatrixXcd dirs = MatrixXcd::Zero(n, m);
    for (int g = 0; g < m; ++g) {
      if (!kept[g]) continue;
      const VectorXcd v = extract_rank_one(q.q[g]);
      if (v.norm() > 0.0) dirs.col(g) = v / v.norm();
    }
    if (auto p = power_control_lp(dirs, users, cfg, ch)) {
      report.method = RecoveryMethod::kRankOneExact;
      return finish(dirs, *p, report, users, cfg, ch);
    }
  }

  // Samples xi = L z with Q_m + shift I = L L^H and z ~ CN(0, I).
  std::vector<Eigen::MatrixXcd> factors(m);
  for (int g = 0; g < m; ++g) {
    if (!kept[g]) continue;
    const double shift = 1e-12 * std::max(q.q[g].trace().real(), 0.0) / n;
    MatrixXcd shifted = q.q[g];
    shifted.diagonal().array() += std::max(shift, std::numeric_limits<double>::min());
    Eigen::LLT<MatrixXcd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      factors[g] = llt.matrixL();
    } else {
      // Fall back to the PSD square root.
      Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(q.q[g]);
      factors[g] = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }
  }

  report.method = RecoveryMethod::kRandomized;
  int budget = options.candidates;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Stream stream(options.seed, "randomization", static_cast<std::uint64_t>(attempt));
    std::optional<Recovery> best;
    for (int j = 0; j < budget; ++j) {
      MatrixXcd dirs = MatrixXcd::Zero(n, m);
      for (int g = 0; g < m; ++g) {
        if (!kept[g]) continue;
        VectorXcd z(n);
        for (int i = 0; i < n; ++i) z(i) = stream.complex_normal();
        const VectorXcd xi = factors[g] * z;
        if (xi.norm() > 0.0) dirs.col(g) = xi / xi.norm();
      }
      ++report.candidates_tried;
      const auto p = power_control_lp(dirs, users, cfg, ch);
      if (!p) continue;
      Recovery cand = finish(dirs, *p, report, users, cfg, ch);
      if (!best || cand.report.transmit_w < best->report.transmit_w) best = std::move(cand);
    }
    if (best) {
      best->report.candidates_tried = report.candidates_tried;
      return best;
    }
    budget = options.candidates * options.retry_factor;
  }
  return std::nullopt;
}

}  // namespace gcran
