#pragma once

// Experiment orchestration: run an algorithm online over instances, verify the
// output, optionally compare with the exact offline optimum, and summarize.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "leaselab/generators.hpp"
#include "leaselab/ocdsl.hpp"
#include "leaselab/odsl_primal_dual.hpp"
#include "leaselab/oracle.hpp"
#include "leaselab/parking_permit.hpp"

namespace leaselab {

enum class Algorithm { Ocdsl, OdslPd, OdslRr, Pp };

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "ocdsl") return Algorithm::Ocdsl;
  if (name == "odsl-pd") return Algorithm::OdslPd;
  if (name == "odsl-rr") return Algorithm::OdslRr;
  if (name == "pp") return Algorithm::Pp;
  throw Error(ErrorKind::BadParams, "unknown algorithm '" + name + "'");
}

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Ocdsl: return "ocdsl";
    case Algorithm::OdslPd: return "odsl-pd";
    case Algorithm::OdslRr: return "odsl-rr";
    case Algorithm::Pp: return "pp";
  }
  return "?";
}

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Ocdsl;
  std::variant<Instance, GenParams> source;
  std::string instance_id = "instance";
  int trials = 1;
  std::uint64_t base_seed = 1;
  bool oracle = false;
  bool timing = false;  // wall time makes output non-reproducible, so it is opt-in
  int threads = 1;
};

struct RunRecord {
  std::string instance_id;
  std::string algorithm;
  std::uint64_t seed = 0;
  Cost online_cost = 0;
  Cost c1 = 0;
  Cost c2 = 0;
  std::optional<Cost> opt_cost;
  std::optional<double> ratio;
  int n = 0;
  int num_leases = 0;
  int max_degree = 0;
  int steps = 0;
  std::optional<double> wall_time_ms;
};

/// The online output of one trial together with its record.
struct TrialOutcome {
  RunRecord record;
  PurchaseLedger ledger;
  std::vector<StepReport> steps;  // ocdsl / odsl-rr only
  double fractional_cost = 0.0;
  std::size_t max_dominator_count = 0;
  Cost dual_value = 0;
};

inline double ratio_of(const Cost& online, const Cost& opt) {
  if (opt == Cost(0)) return online == Cost(0) ? 1.0 : std::numeric_limits<double>::infinity();
  return to_double(online / opt);
}

/// Runs one algorithm online over `inst` with `seed`, verifies feasibility and,
/// when `oracle` is set, computes the exact optimum.
inline TrialOutcome run_trial(const Instance& inst, Algorithm algorithm, std::uint64_t seed, bool oracle, bool timing = false,
                              const std::string& instance_id = "instance") {
  const auto t0 = std::chrono::steady_clock::now();
  TrialOutcome out;
  RunRecord& rec = out.record;
  rec.instance_id = instance_id;
  rec.algorithm = to_string(algorithm);
  rec.seed = seed;
  rec.n = inst.graph.node_count();
  rec.num_leases = static_cast<int>(inst.catalog.size());
  rec.max_degree = max_degree(inst.graph);
  rec.steps = static_cast<int>(inst.requests.size());

  switch (algorithm) {
    case Algorithm::Ocdsl:
    case Algorithm::OdslRr: {
      const CoverMode mode = algorithm == Algorithm::Ocdsl ? CoverMode::Connected : CoverMode::DominationOnly;
      OcdslState st(inst.graph, inst.catalog, seed, mode);
      for (const Request& r : inst.requests) out.steps.push_back(st.serve_request(r.nodes, r.t));
      out.ledger = st.ledger();
      rec.c1 = st.phase1_cost();
      rec.c2 = st.phase2_cost();
      out.fractional_cost = st.fractional_cost();
      out.max_dominator_count = st.max_dominator_count();
      if (!check_solution(inst, out.ledger, mode))
        throw Error(ErrorKind::InfeasibleOutput, std::string(to_string(algorithm)) + " produced an infeasible ledger (seed " +
                                                     std::to_string(seed) + ")");
      if (oracle) rec.opt_cost = (mode == CoverMode::Connected ? offline_opt(inst) : offline_opt_ds(inst)).cost;
      break;
    }
    case Algorithm::OdslPd: {
      DualState st(inst.graph, inst.catalog);
      for (const Request& r : inst.requests)
        for (NodeId u : r.nodes) st.serve(u, r.t);
      out.ledger = st.ledger();
      rec.c1 = st.primal_cost();
      out.dual_value = st.dual_value();
      if (!check_solution(inst, out.ledger, CoverMode::DominationOnly))
        throw Error(ErrorKind::InfeasibleOutput, "odsl-pd produced an infeasible ledger");
      if (oracle) rec.opt_cost = offline_opt_ds(inst).cost;
      break;
    }
    case Algorithm::Pp: {
      // The instance is read as a single permit: every request time is a rainy day.
      PermitState st(inst.catalog);
      std::vector<Time> rainy;
      for (const Request& r : inst.requests) {
        rainy.push_back(r.t);
        for (const Permit& p : st.request(r.t)) out.ledger.add(Triplet{0, p.lease, p.start}, r.t, inst.catalog);
      }
      rec.c1 = st.total_cost();
      for (Time t : rainy)
        if (!st.covered(t)) throw Error(ErrorKind::InfeasibleOutput, "pp left day " + std::to_string(t) + " uncovered");
      if (oracle) rec.opt_cost = pp_offline_opt(rainy, inst.catalog, std::max<Time>(inst.horizon(), 1));
      break;
    }
  }
  rec.online_cost = rec.c1 + rec.c2;
  if (rec.opt_cost) rec.ratio = ratio_of(rec.online_cost, *rec.opt_cost);
  if (timing)
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Trial i uses seed derive_seed(base, i); generated instances are drawn from
/// that seed and the algorithm from a seed derived from it in turn.
struct TrialSetup {
  Instance instance;
  std::uint64_t algorithm_seed = 0;
};

inline TrialSetup trial_setup(const ExperimentConfig& cfg, int i) {
  const std::uint64_t trial_seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(i));
  return {std::holds_alternative<Instance>(cfg.source) ? std::get<Instance>(cfg.source)
                                                       : gen_instance(std::get<GenParams>(cfg.source), trial_seed),
          derive_seed(trial_seed, 1)};
}

inline TrialOutcome run_indexed_trial(const ExperimentConfig& cfg, int i) {
  const TrialSetup setup = trial_setup(cfg, i);
  return run_trial(setup.instance, cfg.algorithm, setup.algorithm_seed, cfg.oracle, cfg.timing, cfg.instance_id);
}

inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.trials));
  std::vector<std::exception_ptr> failures(records.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      try {
        records[i] = run_indexed_trial(cfg, i).record;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(cfg.threads, cfg.trials));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return records;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kRecordHeader =
    "instance_id,algorithm,seed,online_cost,c1,c2,opt_cost,ratio,n,num_leases,max_degree,steps,wall_time_ms";

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << kRecordHeader << '\n';
  for (const RunRecord& r : records) {
    os << r.instance_id << ',' << r.algorithm << ',' << r.seed << ',' << to_string(r.online_cost) << ',' << to_string(r.c1)
       << ',' << to_string(r.c2) << ',' << (r.opt_cost ? to_string(*r.opt_cost) : "") << ','
       << (r.ratio ? format_double(*r.ratio) : "") << ',' << r.n << ',' << r.num_leases << ',' << r.max_degree << ','
       << r.steps << ',' << (r.wall_time_ms ? format_double(*r.wall_time_ms) : "") << '\n';
  }
  return os.str();
}

inline std::vector<RunRecord> records_from_csv(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (line != kRecordHeader) throw Error(ErrorKind::BadInput, "unexpected record header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) f.push_back(field);
    f.resize(13);
    try {
      RunRecord r;
      r.instance_id = f[0];
      r.algorithm = f[1];
      r.seed = std::stoull(f[2]);
      r.online_cost = parse_cost(f[3]);
      r.c1 = parse_cost(f[4]);
      r.c2 = parse_cost(f[5]);
      if (!f[6].empty()) r.opt_cost = parse_cost(f[6]);
      if (!f[7].empty()) r.ratio = std::stod(f[7]);
      r.n = std::stoi(f[8]);
      r.num_leases = std::stoi(f[9]);
      r.max_degree = std::stoi(f[10]);
      r.steps = std::stoi(f[11]);
      if (!f[12].empty()) r.wall_time_ms = std::stod(f[12]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::BadInput, "malformed record row: " + line);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary

struct SummaryRow {
  std::string instance_id;
  std::string algorithm;
  int trials = 0;
  int with_ratio = 0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
  double std_ratio = 0.0;
  Cost total_online = 0;
  Cost total_c1 = 0;
  Cost total_c2 = 0;
  bool decomposition_ok = true;  // c1 + c2 == online in every row
};

inline std::vector<SummaryRow> report(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) groups[{r.instance_id, r.algorithm}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    SummaryRow s{key.first, key.second, static_cast<int>(rows.size())};
    std::vector<double> ratios;
    for (const RunRecord* r : rows) {
      s.total_online += r->online_cost;
      s.total_c1 += r->c1;
      s.total_c2 += r->c2;
      s.decomposition_ok = s.decomposition_ok && r->c1 + r->c2 == r->online_cost;
      if (r->ratio) ratios.push_back(*r->ratio);
    }
    s.with_ratio = static_cast<int>(ratios.size());
    if (!ratios.empty()) {
      double sum = 0.0;
      for (double x : ratios) sum += x;
      s.mean_ratio = sum / static_cast<double>(ratios.size());
      double var = 0.0;
      for (double x : ratios) var += (x - s.mean_ratio) * (x - s.mean_ratio);
      s.std_ratio = ratios.size() > 1 ? std::sqrt(var / static_cast<double>(ratios.size() - 1)) : 0.0;
      std::sort(ratios.begin(), ratios.end());
      const std::size_t m = ratios.size();
      s.median_ratio = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
      s.max_ratio = ratios.back();
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "instance_id,algorithm,trials,with_ratio,mean_ratio,median_ratio,max_ratio,std_ratio,total_online,total_c1,total_c2,"
        "decomposition_ok\n";
  for (const SummaryRow& s : rows) {
    auto ratio = [&](double v) { return s.with_ratio > 0 ? format_double(v) : std::string(); };
    os << s.instance_id << ',' << s.algorithm << ',' << s.trials << ',' << s.with_ratio << ',' << ratio(s.mean_ratio) << ','
       << ratio(s.median_ratio) << ',' << ratio(s.max_ratio) << ',' << ratio(s.std_ratio) << ',' << to_string(s.total_online)
       << ',' << to_string(s.total_c1) << ',' << to_string(s.total_c2) << ','
       << (s.decomposition_ok ? "yes" : "no") << '\n';
  }
  return os.str();
}

inline std::string summary_to_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-8s %6s %10s %10s %10s %12s %12s\n", "instance", "algo", "trials", "mean", "median",
                "max", "C1", "C2");
  os << line;
  for (const SummaryRow& s : rows) {
    std::snprintf(line, sizeof line, "%-20s %-8s %6d %10.4f %10.4f %10.4f %12s %12s\n", s.instance_id.c_str(),
                  s.algorithm.c_str(), s.trials, s.mean_ratio, s.median_ratio, s.max_ratio, to_string(s.total_c1).c_str(),
                  to_string(s.total_c2).c_str());
    os << line;
  }
  return os.str();
}

}  // namespace leaselab
