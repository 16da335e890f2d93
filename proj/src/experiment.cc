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

#include "gcran/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "gcran/rng.h"

namespace gcran {

namespace {

// Relative slack allowed on objective increases and dominance checks.
constexpr double kAuditRelTol = 1e-6;

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Calls the bisection may spend on `count` ordered entries.
int call_bound(int count) { return static_cast<int>(std::ceil(std::log2(count + 1.0))); }

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string p_label(double p) { return "p=" + format_double(p); }

struct CellContext {
  NetworkConfig cfg;
  Channel ch;
  double sinr_db;
  std::uint64_t seed;
};

CellContext make_context(const NetworkConfig& base, double sinr_db, std::uint64_t seed) {
  CellContext c{with_target_sinr_db(base, sinr_db), {}, sinr_db, seed};
  c.ch = generate_channel(c.cfg, seed);
  return c;
}

void fail(const CellContext& c, const std::string& algorithm, const std::string& what, CellOutput* out) {
  out->failures.push_back({c.seed, c.sinr_db, algorithm, what});
}

void audit_recovered(const CellContext& c, const std::string& algorithm, const Beamformer& v,
                     const std::vector<int>& users, CellOutput* out) {
  const BeamformerAudit a = audit_beamformer(v, users, c.cfg, c.ch);
  if (!a.ok()) {
    fail(c, algorithm,
         "feasibility audit: worst QoS slack " + format_double(a.worst_qos_slack) + ", worst power ratio " +
             format_double(a.worst_power_ratio),
         out);
  }
}

void audit_trace(const CellContext& c, const std::string& algorithm, const IterTrace& trace, CellOutput* out) {
  for (size_t i = 1; i < trace.records.size(); ++i) {
    const double prev = trace.records[i - 1].objective;
    const double next = trace.records[i].objective;
    if (next - prev > kAuditRelTol * std::max(1.0, std::abs(prev))) {
      fail(c, algorithm, "objective increased at iteration " + std::to_string(trace.records[i].iteration), out);
      return;
    }
  }
}

void audit_calls(const CellContext& c, const std::string& algorithm, int calls, int count, CellOutput* out) {
  if (calls > call_bound(count)) {
    fail(c, algorithm, "bisection used " + std::to_string(calls) + " oracle calls", out);
  }
}

NetpowerRow plan_row(const CellContext& c, const std::string& algorithm, std::optional<double> p,
                     const PlanResult& r) {
  NetpowerRow row;
  row.seed = c.seed;
  row.sinr_db = c.sinr_db;
  row.algorithm = algorithm;
  row.p = p;
  row.status = to_string(r.status);
  row.iterations = static_cast<int>(r.trace.records.size());
  if (r.status == PlanStatus::kOptimal) {
    row.network_w = r.power.total_w;
    row.transmit_w = r.power.transmit_w;
    row.fronthaul_w = r.power.fronthaul_w;
    row.active_rrhs = static_cast<int>(r.power.active_rrhs.size());
    row.rank_ratio_max = r.recovery.rank_ratio_max;
  }
  return row;
}

AdmissionRow admission_row(const CellContext& c, const std::string& algorithm, std::optional<double> p,
                           const AdmissionResult& r) {
  AdmissionRow row;
  row.seed = c.seed;
  row.sinr_db = c.sinr_db;
  row.algorithm = algorithm;
  row.p = p;
  row.status = to_string(r.status);
  if (r.status == PlanStatus::kOptimal) {
    row.admitted = static_cast<int>(r.admitted.size());
    row.removed = r.removed;
    row.transmit_w = r.transmit_w;
  }
  return row;
}

void run_admission_algorithms(const CellContext& c, const ExperimentSpec& spec,
                              const std::vector<std::string>& algorithms, CellOutput* out) {
  const size_t first = out->admission.size();
  const auto record = [&](const std::string& name, std::optional<double> p, const AdmissionResult& r) {
    out->admission.push_back(admission_row(c, name, p, r));
    if (r.status == PlanStatus::kOptimal) audit_recovered(c, name, r.beamformers, r.admitted, out);
  };
  for (const std::string& name : algorithms) {
    if (name == "ir2a") {
      for (double p : spec.p) {
        const AdmissionResult r = user_admission(c.cfg, c.ch, pipeline_params(spec, p));
        record(name, p, r);
        if (r.status == PlanStatus::kOptimal) audit_calls(c, name, r.oracle_calls, c.cfg.num_users(), out);
        audit_trace(c, name, r.trace, out);
      }
    } else if (name == "mdr") {
      record(name, std::nullopt, mdr_admission(c.cfg, c.ch, pipeline_params(spec, 1.0)));
    } else if (name == "exhaustive") {
      record(name, std::nullopt, exhaustive_users(c.cfg, c.ch, pipeline_params(spec, 1.0)));
    }
  }
  // Enumeration admits the most users of any method.
  const auto best = std::find_if(out->admission.begin() + first, out->admission.end(), [](const AdmissionRow& r) {
    return r.algorithm == "exhaustive" && r.admitted;
  });
  if (best == out->admission.end()) return;
  for (auto it = out->admission.begin() + first; it != out->admission.end(); ++it) {
    if (it->admitted && *it->admitted > *best->admitted) {
      fail(c, it->algorithm, "admitted more users than exhaustive search", out);
    }
  }
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kConvergence:
      return "convergence";
    case Experiment::kNetpower:
      return "netpower";
    case Experiment::kAdmission:
      return "admission";
    case Experiment::kOracleAudit:
      return "oracle-audit";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::kConvergence, Experiment::kNetpower, Experiment::kAdmission,
                       Experiment::kOracleAudit}) {
    if (name == to_string(e)) return e;
  }
  throw SpecError("unknown experiment '" + name + "' (expected convergence, netpower, admission or oracle-audit)");
}

std::vector<std::string> default_algorithms(Experiment e, const NetworkConfig& cfg) {
  const bool rrh_enum = cfg.num_rrhs() <= kMaxExhaustive && cfg.num_users() <= kMaxExhaustive;
  const bool user_enum = cfg.num_users() <= kMaxExhaustive;
  switch (e) {
    case Experiment::kConvergence:
      return {"ir2a"};
    case Experiment::kNetpower: {
      std::vector<std::string> out = {"ir2a", "l1linf", "cb"};
      if (rrh_enum) out.push_back("exhaustive");
      out.push_back("mdr");
      return out;
    }
    case Experiment::kAdmission: {
      std::vector<std::string> out = {"ir2a", "mdr"};
      if (user_enum) out.push_back("exhaustive");
      return out;
    }
    case Experiment::kOracleAudit: {
      std::vector<std::string> out = {"ir2a"};
      if (rrh_enum) out.push_back("exhaustive");
      return out;
    }
  }
  return {};
}

ExperimentSpec resolve_spec(ExperimentSpec spec, const Scenario& scenario) {
  const NetworkConfig& cfg = scenario.network;
  if (spec.seeds.empty()) {
    if (scenario.seeds <= 0) throw SpecError("no seeds given and the scenario names none");
    for (int s = 0; s < scenario.seeds; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (spec.sinr_db.empty()) spec.sinr_db = scenario.sinr_db;
  if (spec.sinr_db.empty()) {
    const double first = cfg.target_sinr(0);
    if ((cfg.target_sinr.array() != first).any()) {
      throw SpecError("no SINR list given and the scenario's targets differ per user");
    }
    spec.sinr_db = {10.0 * std::log10(first)};
  }

  static const std::vector<std::string> kKnown = {"ir2a", "l1linf", "cb", "exhaustive", "mdr"};
  std::vector<std::string> valid = {"ir2a"};
  switch (spec.experiment) {
    case Experiment::kConvergence:
      break;
    case Experiment::kNetpower:
      valid = kKnown;
      break;
    case Experiment::kAdmission:
      valid = {"ir2a", "mdr", "exhaustive"};
      break;
    case Experiment::kOracleAudit:
      valid = {"ir2a", "exhaustive"};
      break;
  }
  if (spec.algorithms.empty()) spec.algorithms = default_algorithms(spec.experiment, cfg);
  for (const std::string& a : spec.algorithms) {
    if (!contains(kKnown, a)) throw SpecError("unknown algorithm '" + a + "' (expected one of " + join(kKnown) + ")");
    if (!contains(valid, a)) {
      throw SpecError("algorithm '" + a + "' does not apply to " + to_string(spec.experiment) +
                      " (valid: " + join(valid) + ")");
    }
  }
  if (contains(spec.algorithms, "exhaustive")) {
    const bool rrh_side = spec.experiment == Experiment::kNetpower || spec.experiment == Experiment::kOracleAudit;
    if (rrh_side && cfg.num_rrhs() > kMaxExhaustive) {
      throw SpecError("exhaustive search is limited to " + std::to_string(kMaxExhaustive) + " RRHs; scenario has " +
                      std::to_string(cfg.num_rrhs()));
    }
    if (cfg.num_users() > kMaxExhaustive) {
      throw SpecError("exhaustive search is limited to " + std::to_string(kMaxExhaustive) + " users; scenario has " +
                      std::to_string(cfg.num_users()));
    }
  }
  if (spec.p.empty()) spec.p = {1.0};
  for (double p : spec.p) {
    if (!(p > 0.0 && p <= 1.0)) throw SpecError("p must lie in (0, 1], got " + format_double(p));
  }
  if (spec.tol && !(*spec.tol > 0.0)) throw SpecError("--tol must be positive");
  if (spec.max_iters && *spec.max_iters < 1) throw SpecError("--max-iters must be at least 1");
  if (spec.threads < 1) spec.threads = 1;
  return spec;
}

PipelineParams pipeline_params(const ExperimentSpec& spec, double p) {
  PipelineParams params;
  params.smoothing.p = p;
  if (spec.tol) params.solver.tol = *spec.tol;
  if (spec.max_iters) {
    params.solver.max_iters = *spec.max_iters;
    params.transmit.max_iters = *spec.max_iters;
    params.oracle.max_iters = std::min(params.oracle.max_iters, *spec.max_iters);
  }
  return params;
}

void CellOutput::append(CellOutput&& other) {
  auto move_all = [](auto& into, auto& from) {
    into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
  };
  move_all(convergence, other.convergence);
  move_all(netpower, other.netpower);
  move_all(admission, other.admission);
  move_all(oracle_audit, other.oracle_audit);
  move_all(failures, other.failures);
}

CellOutput run_convergence_cell(const NetworkConfig& base, double sinr_db, std::uint64_t seed,
                                const ExperimentSpec& spec) {
  const CellContext c = make_context(base, sinr_db, seed);
  CellOutput out;
  const int l = c.cfg.num_rrhs();
  Stream stream(seed, "initial-weights", 0);
  Eigen::VectorXd random_start(l);
  for (int i = 0; i < l; ++i) random_start(i) = stream.uniform();
  for (double p : spec.p) {
    for (const bool random : {false, true}) {
      PipelineParams params = pipeline_params(spec, p);
      params.initial_weights = random ? random_start : Eigen::VectorXd::Ones(l);
      std::string label = random ? "random" : "fixed";
      if (spec.p.size() > 1) label += "/" + p_label(p);
      const PlanResult r = network_power_min(c.cfg, c.ch, params);
      for (const IterRecord& rec : r.trace.records) out.convergence.push_back({seed, label, rec.iteration, rec.objective});
      audit_trace(c, "ir2a", r.trace, &out);
      if (r.status == PlanStatus::kOptimal) audit_recovered(c, "ir2a", r.beamformers, all_users(c.cfg), &out);
    }
  }
  return out;
}

CellOutput run_netpower_cell(const NetworkConfig& base, double sinr_db, std::uint64_t seed,
                             const ExperimentSpec& spec) {
  const CellContext c = make_context(base, sinr_db, seed);
  CellOutput out;
  const std::vector<int> users = all_users(c.cfg);
  const Feasibility f = check_feasible(all_rrhs(c.cfg), users, c.cfg, c.ch, PipelineParams().oracle);
  const auto record = [&](const std::string& name, std::optional<double> p, const PlanResult& r) {
    out.netpower.push_back(plan_row(c, name, p, r));
    if (r.status == PlanStatus::kOptimal) audit_recovered(c, name, r.beamformers, users, &out);
  };

  if (f != Feasibility::kFeasible) {
    // Not every user can be served: the cell becomes an admission problem.
    for (const std::string& name : spec.algorithms) {
      if (name == "mdr") continue;
      PlanResult none;
      none.status = PlanStatus::kInfeasible;
      if (name == "ir2a") {
        for (double p : spec.p) record(name, p, none);
      } else {
        record(name, name == "l1linf" ? std::optional<double>(1.0) : std::nullopt, none);
      }
    }
    std::vector<std::string> admission;
    for (const char* name : {"ir2a", "mdr", "exhaustive"}) {
      if (contains(spec.algorithms, name)) admission.push_back(name);
    }
    if (admission.empty()) admission.push_back("ir2a");
    run_admission_algorithms(c, spec, admission, &out);
    return out;
  }

  for (const std::string& name : spec.algorithms) {
    if (name == "ir2a") {
      for (double p : spec.p) {
        const PlanResult r = network_power_min(c.cfg, c.ch, pipeline_params(spec, p));
        record(name, p, r);
        if (r.status == PlanStatus::kOptimal) audit_calls(c, name, r.oracle_calls, c.cfg.num_rrhs(), &out);
        audit_trace(c, name, r.trace, &out);
      }
    } else if (name == "l1linf") {
      record(name, 1.0, linf_pipeline(c.cfg, c.ch, pipeline_params(spec, 1.0)));
    } else if (name == "cb") {
      record(name, std::nullopt, coordinated_beamforming(c.cfg, c.ch, pipeline_params(spec, 1.0)));
    } else if (name == "exhaustive") {
      record(name, std::nullopt, exhaustive_rrh(c.cfg, c.ch, pipeline_params(spec, 1.0)));
    }
  }
  // Enumeration minimizes the relaxed network power over every RRH set, and
  // recovery is exact on rank-one solutions.
  const auto best = std::find_if(out.netpower.begin(), out.netpower.end(), [](const NetpowerRow& r) {
    return r.algorithm == "exhaustive" && r.network_w && *r.rank_ratio_max <= RecoveryOptions().rank_one_threshold;
  });
  if (best != out.netpower.end()) {
    for (const NetpowerRow& r : out.netpower) {
      if (r.network_w && *r.network_w < *best->network_w * (1.0 - kAuditRelTol)) {
        fail(c, r.algorithm, "network power below the exhaustive optimum", &out);
      }
    }
  }
  return out;
}

CellOutput run_admission_cell(const NetworkConfig& base, double sinr_db, std::uint64_t seed,
                              const ExperimentSpec& spec) {
  const CellContext c = make_context(base, sinr_db, seed);
  CellOutput out;
  run_admission_algorithms(c, spec, spec.algorithms, &out);
  return out;
}

CellOutput run_oracle_audit_cell(const NetworkConfig& base, double sinr_db, std::uint64_t seed,
                                 const ExperimentSpec& spec) {
  const CellContext c = make_context(base, sinr_db, seed);
  CellOutput out;
  const std::vector<int> rrhs = all_rrhs(c.cfg);
  const std::vector<int> users = all_users(c.cfg);
  const bool enumerate = contains(spec.algorithms, "exhaustive");
  PipelineParams params = pipeline_params(spec, spec.p.front());
  params.verify_monotone = true;

  OracleAuditRow row;
  row.seed = seed;
  row.sinr_db = sinr_db;
  if (check_feasible(rrhs, users, c.cfg, c.ch, params.oracle) == Feasibility::kFeasible) {
    const PlanResult r = network_power_min(c.cfg, c.ch, params);
    row.mode = "rrh";
    row.status = to_string(r.status);
    row.cut = r.status == PlanStatus::kOptimal ? r.switched_off : 0;
    row.oracle_calls = r.oracle_calls;
    row.call_bound = call_bound(c.cfg.num_rrhs());
    row.non_monotone = r.non_monotone;
    if (enumerate) {
      // Most RRHs any feasible set leaves switched off.
      const int l = c.cfg.num_rrhs();
      int most = 0;
      for (std::uint32_t mask = 1; mask < (1u << l); ++mask) {
        const int off = l - std::popcount(mask);
        if (off <= most) continue;
        std::vector<int> active;
        for (int i = 0; i < l; ++i) {
          if (mask & (1u << i)) active.push_back(i);
        }
        if (check_feasible(active, users, c.cfg, c.ch, params.oracle) == Feasibility::kFeasible) most = off;
      }
      row.exhaustive_cut = most;
      if (r.status == PlanStatus::kOptimal && row.cut > most) fail(c, "ir2a", "switched off more RRHs than any feasible set", &out);
    }
  } else {
    const AdmissionResult r = user_admission(c.cfg, c.ch, params);
    row.mode = "user";
    row.status = to_string(r.status);
    row.cut = r.status == PlanStatus::kOptimal ? r.removed : 0;
    row.oracle_calls = r.oracle_calls;
    row.call_bound = call_bound(c.cfg.num_users());
    row.non_monotone = r.non_monotone;
    if (enumerate) {
      const AdmissionResult e = exhaustive_users(c.cfg, c.ch, params);
      if (e.status == PlanStatus::kOptimal) {
        row.exhaustive_cut = e.removed;
        if (r.status == PlanStatus::kOptimal && row.cut < e.removed) fail(c, "ir2a", "removed fewer users than exhaustive search", &out);
      }
    }
  }
  if (row.oracle_calls > row.call_bound) fail(c, "ir2a", "bisection exceeded its call bound", &out);
  out.oracle_audit.push_back(row);
  return out;
}

CellOutput run_experiment(const ExperimentSpec& spec, const Scenario& scenario) {
  struct Cell {
    double sinr_db;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double db : spec.sinr_db) {
    for (std::uint64_t seed : spec.seeds) cells.push_back({db, seed});
  }
  std::vector<CellOutput> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& cell = cells[i];
        switch (spec.experiment) {
          case Experiment::kConvergence:
            results[i] = run_convergence_cell(scenario.network, cell.sinr_db, cell.seed, spec);
            break;
          case Experiment::kNetpower:
            results[i] = run_netpower_cell(scenario.network, cell.sinr_db, cell.seed, spec);
            break;
          case Experiment::kAdmission:
            results[i] = run_admission_cell(scenario.network, cell.sinr_db, cell.seed, spec);
            break;
          case Experiment::kOracleAudit:
            results[i] = run_oracle_audit_cell(scenario.network, cell.sinr_db, cell.seed, spec);
            break;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(spec.threads, 1, std::max(1, static_cast<int>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  CellOutput out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.append(std::move(results[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV.

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
std::string field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "seed,init_label,iteration,objective\n";
  for (const ConvergenceRow& r : rows) {
    out << r.seed << ',' << r.init_label << ',' << r.iteration << ',' << format_double(r.objective) << '\n';
  }
}

void write_netpower_csv(const std::vector<NetpowerRow>& rows, std::ostream& out) {
  out << "seed,sinr_db,algorithm,p,network_w,transmit_w,fronthaul_w,active_rrhs,iterations,rank_ratio_max,status\n";
  for (const NetpowerRow& r : rows) {
    out << r.seed << ',' << format_double(r.sinr_db) << ',' << r.algorithm << ',' << field(r.p) << ','
        << field(r.network_w) << ',' << field(r.transmit_w) << ',' << field(r.fronthaul_w) << ','
        << field(r.active_rrhs) << ',' << r.iterations << ',' << field(r.rank_ratio_max) << ',' << r.status << '\n';
  }
}

void write_admission_csv(const std::vector<AdmissionRow>& rows, std::ostream& out) {
  out << "seed,sinr_db,algorithm,p,admitted,removed,transmit_w,status\n";
  for (const AdmissionRow& r : rows) {
    out << r.seed << ',' << format_double(r.sinr_db) << ',' << r.algorithm << ',' << field(r.p) << ','
        << field(r.admitted) << ',' << field(r.removed) << ',' << field(r.transmit_w) << ',' << r.status << '\n';
  }
}

void write_oracle_audit_csv(const std::vector<OracleAuditRow>& rows, std::ostream& out) {
  out << "seed,sinr_db,mode,status,cut,oracle_calls,call_bound,non_monotone,exhaustive_cut\n";
  for (const OracleAuditRow& r : rows) {
    out << r.seed << ',' << format_double(r.sinr_db) << ',' << r.mode << ',' << r.status << ',' << r.cut << ','
        << r.oracle_calls << ',' << r.call_bound << ',' << (r.non_monotone ? 1 : 0) << ',' << field(r.exhaustive_cut)
        << '\n';
  }
}

void write_summary_csv(const CellOutput& output, std::ostream& out) {
  struct Acc {
    int runs = 0;
    int optimal = 0;
    double network = 0.0, transmit = 0.0, fronthaul = 0.0, active = 0.0, admitted = 0.0, iterations = 0.0;
  };
  using Key = std::tuple<std::string, double, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, Acc> acc;
  const auto slot = [&](const Key& k) -> Acc& {
    auto [it, inserted] = acc.try_emplace(k);
    if (inserted) order.push_back(k);
    return it->second;
  };

  // Convergence: one run per (seed, label) trace.
  std::map<std::pair<std::uint64_t, std::string>, int> traces;
  std::vector<std::pair<std::uint64_t, std::string>> trace_order;
  for (const ConvergenceRow& r : output.convergence) {
    auto [it, inserted] = traces.try_emplace({r.seed, r.init_label}, 0);
    if (inserted) trace_order.push_back(it->first);
    it->second = std::max(it->second, r.iteration);
  }
  for (const auto& t : trace_order) {
    Acc& a = slot({"convergence", 0.0, t.second, ""});
    ++a.runs;
    a.iterations += traces[t];
  }
  for (const NetpowerRow& r : output.netpower) {
    Acc& a = slot({"netpower", r.sinr_db, r.algorithm, field(r.p)});
    ++a.runs;
    a.iterations += r.iterations;
    if (!r.network_w) continue;
    ++a.optimal;
    a.network += *r.network_w;
    a.transmit += *r.transmit_w;
    a.fronthaul += *r.fronthaul_w;
    a.active += *r.active_rrhs;
  }
  for (const AdmissionRow& r : output.admission) {
    Acc& a = slot({"admission", r.sinr_db, r.algorithm, field(r.p)});
    ++a.runs;
    if (!r.admitted) continue;
    ++a.optimal;
    a.transmit += *r.transmit_w;
    a.admitted += *r.admitted;
  }
  for (const OracleAuditRow& r : output.oracle_audit) {
    Acc& a = slot({"oracle-audit", r.sinr_db, r.mode, ""});
    ++a.runs;
    if (r.status == "Optimal") ++a.optimal;
    a.iterations += r.oracle_calls;
  }

  out << "table,sinr_db,algorithm,p,runs,optimal,mean_network_w,mean_transmit_w,mean_fronthaul_w,mean_active_rrhs,"
         "mean_admitted,mean_iterations\n";
  for (const Key& k : order) {
    const Acc& a = acc[k];
    const auto& [table, db, algorithm, p] = k;
    const auto mean = [&](double sum, bool applies) -> std::string {
      if (!applies || a.optimal == 0) return "";
      return format_double(sum / a.optimal);
    };
    const bool net = table == "netpower";
    const bool adm = table == "admission";
    out << table << ',' << (table == "convergence" ? "" : format_double(db)) << ',' << algorithm << ',' << p << ','
        << a.runs << ',' << (table == "convergence" ? "" : std::to_string(a.optimal)) << ','
        << mean(a.network, net) << ',' << mean(a.transmit, net || adm) << ',' << mean(a.fronthaul, net) << ','
        << mean(a.active, net) << ',' << mean(a.admitted, adm) << ','
        << (a.runs > 0 && !adm ? format_double(a.iterations / a.runs) : "") << '\n';
  }
}

void write_outputs(const CellOutput& output, Experiment e, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  const auto write = [&](const std::string& name, const auto& writer) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    writer(f);
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
  };
  switch (e) {
    case Experiment::kConvergence:
      write("convergence.csv", [&](std::ostream& o) { write_convergence_csv(output.convergence, o); });
      break;
    case Experiment::kNetpower:
      write("netpower.csv", [&](std::ostream& o) { write_netpower_csv(output.netpower, o); });
      write("admission.csv", [&](std::ostream& o) { write_admission_csv(output.admission, o); });
      break;
    case Experiment::kAdmission:
      write("admission.csv", [&](std::ostream& o) { write_admission_csv(output.admission, o); });
      break;
    case Experiment::kOracleAudit:
      write("oracle_audit.csv", [&](std::ostream& o) { write_oracle_audit_csv(output.oracle_audit, o); });
      break;
  }
  write("summary.csv", [&](std::ostream& o) { write_summary_csv(output, o); });
}

}  // namespace gcran
