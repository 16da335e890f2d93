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

#include "gcran/select.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gcran {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// MDR asks the feasibility oracle once the largest l1 slack drops below this.
constexpr double kMdrSlackTol = 1e-4;
// Tolerance of the second transmit-power solve when recovery fails.
constexpr double kRefineTol = 1e-11;

std::vector<int> sorted_tail(const std::vector<int>& order, int from) {
  std::vector<int> out(order.begin() + from, order.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Indices sorted by key, ascending or descending, ties by smaller index.
std::vector<int> argsort(const VectorXd& key, bool descending) {
  std::vector<int> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return descending ? key(a) > key(b) : key(a) < key(b); });
  return idx;
}

ReweightedOptions reweighted_options(const PipelineParams& params, const VectorXd& rho, int size) {
  ReweightedOptions o;
  o.params = params.smoothing;
  o.solver = params.solver;
  o.rho = rho;
  o.initial_weights = params.initial_weights.size() == size ? params.initial_weights : VectorXd::Ones(size);
  o.warm_start = params.warm_start;
  return o;
}

bool has_success(const IterTrace& trace) {
  return std::any_of(trace.records.begin(), trace.records.end(),
                     [](const IterRecord& r) { return r.status == SolveStatus::kOptimal; });
}

double fronthaul_of(const std::vector<int>& rrhs, const NetworkConfig& cfg) {
  double total = 0.0;
  for (int l : rrhs) total += cfg.fronthaul_power(l);
  return total;
}

// Transmit-power SDP over (rrhs, users) followed by recovery.
struct Served {
  Beamformer beamformers;
  double sdr_transmit_w = 0.0;
  RecoveryReport recovery;
};

enum class ServeOutcome { kServed, kInfeasible, kRecoveryFailed, kSolverFailure };

struct TpSolve {
  ServeOutcome outcome = ServeOutcome::kSolverFailure;
  LiftedVars q;
  double transmit_w = 0.0;
  WarmStart point;
};

TpSolve solve_transmit_power(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
                             const Channel& ch, const ConicSettings& settings, const WarmStart* warm = nullptr) {
  TpSolve out;
  if (users.empty()) {
    out.outcome = ServeOutcome::kServed;
    out.q.q.assign(cfg.num_groups(), Eigen::MatrixXcd::Zero(cfg.total_antennas(), cfg.total_antennas()));
    return out;
  }
  const LiftedProblem lp = build_transmit_power_min(rrhs, users, cfg, ch);
  const ConicSolution sol = solve(lp.problem, settings, warm);
  if (sol.status == SolveStatus::kPrimalInfeasible) {
    out.outcome = ServeOutcome::kInfeasible;
    return out;
  }
  if (sol.status != SolveStatus::kOptimal) return out;
  out.outcome = ServeOutcome::kServed;
  out.q = extract_lifted(lp, sol, cfg);
  out.transmit_w = lifted_transmit_power(out.q, cfg);
  out.point = {sol.x, sol.y, sol.s};
  return out;
}

ServeOutcome recover_from(const TpSolve& tp, const std::vector<int>& users, const NetworkConfig& cfg,
                          const Channel& ch, const PipelineParams& params, Served* served) {
  if (users.empty()) {
    served->beamformers.v = Eigen::MatrixXcd::Zero(cfg.total_antennas(), cfg.num_groups());
    served->sdr_transmit_w = 0.0;
    served->recovery = RecoveryReport{};
    served->recovery.rank_ratio.assign(cfg.num_groups(), 0.0);
    return ServeOutcome::kServed;
  }
  RecoveryOptions ro = params.recovery;
  if (ro.seed == 0) ro.seed = ch.seed;
  auto rec = gaussian_randomize(tp.q, users, cfg, ch, ro);
  if (!rec) return ServeOutcome::kRecoveryFailed;
  served->beamformers = std::move(rec->beamformer);
  served->sdr_transmit_w = tp.transmit_w;
  served->recovery = std::move(rec->report);
  return ServeOutcome::kServed;
}

// On sets that are only just feasible, directions from a loose solve can
// miss the power limits by about the solver tolerance; one tighter re-solve
// from the same point usually fixes that.
ServeOutcome recover_refined(const TpSolve& tp, const std::vector<int>& rrhs, const std::vector<int>& users,
                             const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params,
                             Served* served) {
  const ServeOutcome first = recover_from(tp, users, cfg, ch, params, served);
  if (first != ServeOutcome::kRecoveryFailed) return first;
  ConicSettings fine = params.transmit;
  fine.tol = std::min(fine.tol, kRefineTol);
  const TpSolve refined = solve_transmit_power(rrhs, users, cfg, ch, fine, &tp.point);
  if (refined.outcome != ServeOutcome::kServed) return ServeOutcome::kRecoveryFailed;
  return recover_from(refined, users, cfg, ch, params, served);
}

ServeOutcome serve(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
                   const Channel& ch, const PipelineParams& params, Served* served, bool* degraded) {
  const TpSolve tp = solve_transmit_power(rrhs, users, cfg, ch, params.transmit);
  if (tp.outcome == ServeOutcome::kSolverFailure) *degraded = true;
  if (tp.outcome != ServeOutcome::kServed) return tp.outcome;
  return recover_refined(tp, rrhs, users, cfg, ch, params, served);
}

void fill_plan(const std::vector<int>& rrhs, Served&& served, const NetworkConfig& cfg, PlanResult* out) {
  out->status = PlanStatus::kOptimal;
  out->active_rrhs = rrhs;
  out->switched_off = cfg.num_rrhs() - static_cast<int>(rrhs.size());
  out->beamformers = std::move(served.beamformers);
  out->power = network_power(out->beamformers, cfg);
  out->sdr_transmit_w = served.sdr_transmit_w;
  out->sdr_network_w = served.sdr_transmit_w + fronthaul_of(rrhs, cfg);
  out->recovery = std::move(served.recovery);
}

void fill_admission(const std::vector<int>& users, Served&& served, const NetworkConfig& cfg, AdmissionResult* out) {
  out->status = PlanStatus::kOptimal;
  out->admitted = users;
  out->removed = cfg.num_users() - static_cast<int>(users.size());
  out->beamformers = std::move(served.beamformers);
  out->transmit_w = network_power(out->beamformers, cfg).transmit_w;
  out->sdr_transmit_w = served.sdr_transmit_w;
  out->recovery = std::move(served.recovery);
}

// Bisection over switch-off prefixes of `order`, then the transmit-power SDP
// over the survivors.  If recovery fails, RRHs are switched back on one at a
// time in reverse order.
void rrh_tail(const std::vector<int>& order, const NetworkConfig& cfg, const Channel& ch,
              const PipelineParams& params, PlanResult* out) {
  const std::vector<int> users = all_users(cfg);
  const int l = cfg.num_rrhs();
  const PrefixOracle oracle = [&](int i) {
    const Feasibility f = check_feasible(sorted_tail(order, i), users, cfg, ch, params.oracle);
    if (f == Feasibility::kUnknown) out->degraded = true;
    return f == Feasibility::kFeasible;
  };
  const BisectionResult cut = bisection_cut(l, oracle, SearchMode::kRrh, params.verify_monotone);
  out->oracle_calls = cut.oracle_calls;
  out->non_monotone = cut.non_monotone;
  for (int j0 = cut.cut; j0 >= 0; --j0) {
    const std::vector<int> active = sorted_tail(order, j0);
    Served served;
    const ServeOutcome o = serve(active, users, cfg, ch, params, &served, &out->degraded);
    if (o == ServeOutcome::kServed) {
      fill_plan(active, std::move(served), cfg, out);
      return;
    }
  }
  out->status = PlanStatus::kRecoveryFailed;
}

// Bisection over removal prefixes of `order`, then the transmit-power SDP
// over every RRH; more users are removed if recovery fails.
void admission_tail(const std::vector<int>& order, const NetworkConfig& cfg, const Channel& ch,
                    const PipelineParams& params, AdmissionResult* out) {
  const std::vector<int> rrhs = all_rrhs(cfg);
  const int k = cfg.num_users();
  const PrefixOracle oracle = [&](int i) {
    const Feasibility f = check_feasible(rrhs, sorted_tail(order, i), cfg, ch, params.oracle);
    if (f == Feasibility::kUnknown) out->degraded = true;
    return f == Feasibility::kFeasible;
  };
  const BisectionResult cut = bisection_cut(k, oracle, SearchMode::kUser, params.verify_monotone);
  out->oracle_calls = cut.oracle_calls;
  out->non_monotone = cut.non_monotone;
  for (int n0 = cut.cut; n0 <= k; ++n0) {
    const std::vector<int> users = sorted_tail(order, n0);
    Served served;
    if (serve(rrhs, users, cfg, ch, params, &served, &out->degraded) == ServeOutcome::kServed) {
      fill_admission(users, std::move(served), cfg, out);
      return;
    }
  }
  out->status = PlanStatus::kRecoveryFailed;
}

std::vector<int> members(std::uint32_t mask, int count) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

}  // namespace

// Feasibility answers only need the 1e-6 residual test.  Transmit-power
// solves feed recovery, where a loose solve on a barely feasible set leaves
// directions that miss the power limits.
PipelineParams::PipelineParams() {
  oracle.tol = 1e-6;
  // Feasible oracle solves finish in well under a thousand iterations; the
  // cap only bounds the time spent failing to certify infeasibility.
  oracle.max_iters = 5000;
  transmit.tol = 1e-9;
}

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kOptimal:
      return "Optimal";
    case PlanStatus::kInfeasible:
      return "Infeasible";
    case PlanStatus::kRecoveryFailed:
      return "RecoveryFailed";
    case PlanStatus::kSolverFailure:
      return "SolverFailure";
  }
  return "Unknown";
}

RrhOrdering rrh_ordering(const LiftedVars& q, const NetworkConfig& cfg, const Channel& ch) {
  const int l = cfg.num_rrhs();
  const VectorXd power = group_powers(q, cfg);
  RrhOrdering out;
  out.theta.resize(l);
  for (int i = 0; i < l; ++i) {
    const double kappa = ch.h.middleRows(cfg.antenna_offset(i), cfg.antennas[i]).squaredNorm();
    const double pc = cfg.fronthaul_power(i);
    out.theta(i) = pc > 0.0 ? std::sqrt(cfg.drain_inefficiency(i) * kappa / pc) * std::sqrt(std::max(power(i), 0.0))
                            : std::numeric_limits<double>::infinity();
  }
  out.order = argsort(out.theta, false);
  return out;
}

BisectionResult bisection_cut(int count, const PrefixOracle& oracle, SearchMode mode, bool verify) {
  if (count < 0) throw std::invalid_argument("bisection_cut: negative count");
  BisectionResult out;
  if (mode == SearchMode::kRrh) {
    // Invariant: low feasible, up infeasible.
    int low = 0;
    int up = count + 1;
    while (up - low > 1) {
      const int i = (low + up) / 2;
      ++out.oracle_calls;
      (oracle(i) ? low : up) = i;
    }
    out.cut = low;
  } else {
    // Invariant: low infeasible, up feasible.
    int low = -1;
    int up = count;
    while (up - low > 1) {
      const int i = low + (up - low) / 2;
      ++out.oracle_calls;
      (oracle(i) ? up : low) = i;
    }
    out.cut = up;
  }
  if (verify) {
    int scan = 0;
    if (mode == SearchMode::kRrh) {
      while (scan < count && oracle(scan + 1)) ++scan;
    } else {
      scan = count;
      while (scan > 0 && oracle(scan - 1)) --scan;
    }
    out.non_monotone = scan != out.cut;
  }
  return out;
}

Feasibility check_feasible(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
                           const Channel& ch, const ConicSettings& settings) {
  if (users.empty()) return Feasibility::kFeasible;
  const ConicSolution sol = solve(build_feasibility(rrhs, users, cfg, ch).problem, settings);
  if (sol.status == SolveStatus::kOptimal) return Feasibility::kFeasible;
  if (sol.status == SolveStatus::kPrimalInfeasible) return Feasibility::kInfeasible;
  return Feasibility::kUnknown;
}

namespace {

// Step 0 fallback when the first weighted subproblem neither solves nor
// certifies infeasibility: the zero-objective feasibility problem certifies
// far faster once targets are well out of reach.
bool full_network_infeasible(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  return check_feasible(all_rrhs(cfg), all_users(cfg), cfg, ch, params.oracle) == Feasibility::kInfeasible;
}

}  // namespace

PlanResult network_power_min(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  PlanResult out;
  LiftedProblem last;
  const ReweightedResult r = reweighted_solve(
      [&](const VectorXd& w) {
        last = build_weighted_power_sdp(w, cfg, ch);
        return last.problem;
      },
      [&](const ConicSolution& s) { return group_powers(extract_lifted(last, s, cfg), cfg); },
      reweighted_options(params, cfg.group_weights, cfg.num_rrhs()));
  out.trace = r.trace;
  if (r.trace.status == TraceStatus::kInfeasible) {
    out.status = PlanStatus::kInfeasible;
    return out;
  }
  if (!has_success(r.trace)) {
    out.status = full_network_infeasible(cfg, ch, params) ? PlanStatus::kInfeasible : PlanStatus::kSolverFailure;
    out.degraded = out.status == PlanStatus::kSolverFailure;
    return out;
  }
  if (r.trace.status == TraceStatus::kSolverFailure) out.degraded = true;
  const RrhOrdering ord = rrh_ordering(extract_lifted(last, r.solution, cfg), cfg, ch);
  rrh_tail(ord.order, cfg, ch, params, &out);
  return out;
}

AdmissionResult user_admission(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  AdmissionResult out;
  LiftedProblem last;
  const ReweightedResult r = reweighted_solve(
      [&](const VectorXd& w) {
        last = build_admission_sdp(w, cfg, ch);
        return last.problem;
      },
      [&](const ConicSolution& s) { return VectorXd(extract_slacks(last, s).cwiseAbs2()); },
      reweighted_options(params, VectorXd(), cfg.num_users()));
  out.trace = r.trace;
  if (!has_success(r.trace)) {
    out.status = PlanStatus::kSolverFailure;
    out.degraded = true;
    return out;
  }
  if (r.trace.status != TraceStatus::kConverged && r.trace.status != TraceStatus::kMaxIterations) out.degraded = true;
  const VectorXd slacks = extract_slacks(last, r.solution);
  admission_tail(argsort(slacks, true), cfg, ch, params, &out);
  return out;
}

PlanResult coordinated_beamforming(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  PlanResult out;
  const std::vector<int> rrhs = all_rrhs(cfg);
  Served served;
  switch (serve(rrhs, all_users(cfg), cfg, ch, params, &served, &out.degraded)) {
    case ServeOutcome::kServed:
      fill_plan(rrhs, std::move(served), cfg, &out);
      break;
    case ServeOutcome::kInfeasible:
      out.status = PlanStatus::kInfeasible;
      break;
    case ServeOutcome::kRecoveryFailed:
      out.status = PlanStatus::kRecoveryFailed;
      break;
    case ServeOutcome::kSolverFailure:
      out.status = PlanStatus::kSolverFailure;
      break;
  }
  return out;
}

PlanResult linf_pipeline(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  PlanResult out;
  const int l = cfg.num_rrhs();
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < l; ++a) {
    for (int b = a; b < l; ++b) pairs.emplace_back(a, b);
  }
  const int np = static_cast<int>(pairs.size());
  // Every ordered pair (l1, l2) carries its own weight in the sum, so a
  // shared off-diagonal bound is counted twice.
  auto to_matrix = [&](const VectorXd& w) {
    MatrixXd m = MatrixXd::Zero(l, l);
    for (int i = 0; i < np; ++i) m(pairs[i].first, pairs[i].second) = m(pairs[i].second, pairs[i].first) = w(i);
    return m;
  };
  LiftedProblem last;
  PipelineParams p = params;
  p.smoothing.p = 1.0;
  const ReweightedResult r = reweighted_solve(
      [&](const VectorXd& w) {
        last = build_linf_iterate(to_matrix(w), cfg, ch);
        return last.problem;
      },
      [&](const ConicSolution& s) {
        const MatrixXd t = extract_linf_bounds(last, s, cfg);
        VectorXd z(np);
        for (int i = 0; i < np; ++i) z(i) = t(pairs[i].first, pairs[i].second) * t(pairs[i].first, pairs[i].second);
        return z;
      },
      reweighted_options(p, VectorXd(), np));
  out.trace = r.trace;
  if (r.trace.status == TraceStatus::kInfeasible) {
    out.status = PlanStatus::kInfeasible;
    return out;
  }
  if (!has_success(r.trace)) {
    out.status = full_network_infeasible(cfg, ch, params) ? PlanStatus::kInfeasible : PlanStatus::kSolverFailure;
    out.degraded = out.status == PlanStatus::kSolverFailure;
    return out;
  }
  if (r.trace.status == TraceStatus::kSolverFailure) out.degraded = true;

  // Largest covariance entry magnitude over the rows of each RRH.
  const LiftedVars q = extract_lifted(last, r.solution, cfg);
  VectorXd priority = VectorXd::Zero(l);
  for (int i = 0; i < l; ++i) {
    for (const auto& qm : q.q) {
      priority(i) = std::max(priority(i), qm.middleRows(cfg.antenna_offset(i), cfg.antennas[i]).cwiseAbs().maxCoeff());
    }
  }
  rrh_tail(argsort(priority, false), cfg, ch, params, &out);
  return out;
}

AdmissionResult mdr_admission(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  AdmissionResult out;
  const std::vector<int> rrhs = all_rrhs(cfg);
  std::vector<int> users = all_users(cfg);
  while (!users.empty()) {
    const LiftedProblem lp = build_admission_l1(users, cfg, ch);
    const ConicSolution sol = solve(lp.problem, params.oracle);
    ++out.oracle_calls;
    if (sol.status != SolveStatus::kOptimal) out.degraded = true;
    const VectorXd slacks = extract_slacks(lp, sol);
    Eigen::Index worst = 0;
    const double largest = slacks.maxCoeff(&worst);
    if (largest <= kMdrSlackTol && check_feasible(rrhs, users, cfg, ch, params.oracle) == Feasibility::kFeasible) {
      Served served;
      if (serve(rrhs, users, cfg, ch, params, &served, &out.degraded) == ServeOutcome::kServed) {
        fill_admission(users, std::move(served), cfg, &out);
        return out;
      }
    }
    // layout.users is ascending, so maxCoeff's first-index rule breaks ties.
    users.erase(std::find(users.begin(), users.end(), lp.layout.users[worst]));
  }
  Served served;
  serve(rrhs, users, cfg, ch, params, &served, &out.degraded);
  fill_admission(users, std::move(served), cfg, &out);
  return out;
}

PlanResult exhaustive_rrh(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  const int l = cfg.num_rrhs();
  if (l > kMaxExhaustive) throw std::invalid_argument("exhaustive search limited to 10 RRHs");
  PlanResult out;
  const std::vector<int> users = all_users(cfg);
  const TpSolve everything = solve_transmit_power(all_rrhs(cfg), users, cfg, ch, params.oracle);
  ++out.oracle_calls;
  if (everything.outcome == ServeOutcome::kInfeasible) {
    out.status = PlanStatus::kInfeasible;
    return out;
  }
  if (everything.outcome != ServeOutcome::kServed) {
    out.status = PlanStatus::kSolverFailure;
    out.degraded = true;
    return out;
  }

  const std::uint32_t full = (1u << l) - 1;
  std::vector<std::uint32_t> masks(full);
  std::iota(masks.begin(), masks.end(), 1u);
  std::vector<double> fronthaul(full + 1, 0.0);
  for (std::uint32_t m = 1; m <= full; ++m) fronthaul[m] = fronthaul_of(members(m, l), cfg);
  // Larger sets first, so every superset of a set is settled before it.
  std::stable_sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int ca = std::popcount(a);
    const int cb = std::popcount(b);
    return ca != cb ? ca > cb : fronthaul[a] < fronthaul[b];
  });

  // Serving from fewer RRHs never lowers transmit power: a subset is
  // infeasible below an infeasible set, and its transmit power is bounded by
  // that of any solved superset.
  struct Candidate {
    double network_w;
    std::uint32_t mask;
    TpSolve tp;
  };
  std::vector<Candidate> found;
  std::vector<std::uint32_t> infeasible;
  std::vector<std::pair<std::uint32_t, double>> solved = {{full, everything.transmit_w}};
  double best = everything.transmit_w + fronthaul[full];
  found.push_back({best, full, everything});
  for (std::uint32_t m : masks) {
    if (m == full) continue;
    if (fronthaul[m] + everything.transmit_w >= best) continue;
    const auto inside = [m](std::uint32_t super) { return (m & ~super) == 0; };
    if (std::any_of(infeasible.begin(), infeasible.end(), inside)) continue;
    double floor = everything.transmit_w;
    for (const auto& [super, watts] : solved) {
      if (inside(super)) floor = std::max(floor, watts);
    }
    if (fronthaul[m] + floor >= best) continue;
    TpSolve tp = solve_transmit_power(members(m, l), users, cfg, ch, params.oracle);
    ++out.oracle_calls;
    if (tp.outcome != ServeOutcome::kServed) {
      if (tp.outcome == ServeOutcome::kSolverFailure) out.degraded = true;
      infeasible.push_back(m);
      continue;
    }
    const double value = tp.transmit_w + fronthaul[m];
    best = std::min(best, value);
    solved.emplace_back(m, tp.transmit_w);
    found.push_back({value, m, std::move(tp)});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.network_w < b.network_w; });
  // Candidates were ranked at the oracle tolerance; the one served is
  // re-solved at the transmit tolerance first.
  for (const Candidate& c : found) {
    const std::vector<int> rrhs = members(c.mask, l);
    const TpSolve tp = solve_transmit_power(rrhs, users, cfg, ch, params.transmit, &c.tp.point);
    if (tp.outcome != ServeOutcome::kServed) continue;
    Served served;
    if (recover_refined(tp, rrhs, users, cfg, ch, params, &served) == ServeOutcome::kServed) {
      fill_plan(rrhs, std::move(served), cfg, &out);
      return out;
    }
  }
  out.status = PlanStatus::kRecoveryFailed;
  return out;
}

AdmissionResult exhaustive_users(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params) {
  const int k = cfg.num_users();
  if (k > kMaxExhaustive) throw std::invalid_argument("exhaustive search limited to 10 users");
  AdmissionResult out;
  const std::vector<int> rrhs = all_rrhs(cfg);
  for (int size = k; size >= 1; --size) {
    // Subsets of this size in lexicographic order.
    std::vector<char> pick(k, 0);
    std::fill(pick.begin(), pick.begin() + size, 1);
    struct Candidate {
      double transmit_w;
      std::vector<int> users;
      TpSolve tp;
    };
    std::vector<Candidate> found;
    do {
      std::vector<int> users;
      for (int i = 0; i < k; ++i) {
        if (pick[i]) users.push_back(i);
      }
      ++out.oracle_calls;
      const Feasibility f = check_feasible(rrhs, users, cfg, ch, params.oracle);
      if (f == Feasibility::kUnknown) out.degraded = true;
      if (f != Feasibility::kFeasible) continue;
      TpSolve tp = solve_transmit_power(rrhs, users, cfg, ch, params.oracle);
      if (tp.outcome == ServeOutcome::kSolverFailure) out.degraded = true;
      if (tp.outcome != ServeOutcome::kServed) continue;
      found.push_back({tp.transmit_w, std::move(users), std::move(tp)});
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::stable_sort(found.begin(), found.end(),
                     [](const Candidate& a, const Candidate& b) { return a.transmit_w < b.transmit_w; });
    for (const Candidate& c : found) {
      const TpSolve tp = solve_transmit_power(rrhs, c.users, cfg, ch, params.transmit, &c.tp.point);
      if (tp.outcome != ServeOutcome::kServed) continue;
      Served served;
      if (recover_refined(tp, rrhs, c.users, cfg, ch, params, &served) == ServeOutcome::kServed) {
        fill_admission(c.users, std::move(served), cfg, &out);
        return out;
      }
    }
  }
  Served served;
  recover_from(TpSolve{}, {}, cfg, ch, params, &served);
  fill_admission({}, std::move(served), cfg, &out);
  return out;
}

}  // namespace gcran
