// leaselab command-line driver: gen | run | oracle | verify | pp | report.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leaselab/leaselab.hpp"

using namespace leaselab;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

/// "1:1,4:3/2" -> catalog of (duration, cost) pairs.
LeaseCatalog parse_leases(const std::string& text) {
  std::vector<std::pair<Time, Cost>> pairs;
  for (const std::string& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::BadInput, "lease '" + item + "' is not duration:cost");
    pairs.emplace_back(std::stoll(item.substr(0, colon)), parse_cost(item.substr(colon + 1)));
  }
  return LeaseCatalog::from_pairs(pairs);
}

std::vector<Time> parse_times(const std::string& text) {
  std::vector<Time> out;
  for (const std::string& item : split(text, ',')) out.push_back(std::stoll(item));
  return out;
}

/// Writes to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  out << text;
}

struct GenOptions {
  std::string kind = "path";
  std::string leases;
  GenParams params;

  void add_to(CLI::App* app) {
    app->add_option("--kind", kind, "path|star|grid|gnp|pp-adversary")->capture_default_str();
    app->add_option("--n", params.n, "node count")->capture_default_str();
    app->add_option("--p", params.p, "gnp edge probability")->capture_default_str();
    app->add_option("--rows", params.rows, "grid rows")->capture_default_str();
    app->add_option("--cols", params.cols, "grid columns")->capture_default_str();
    app->add_option("--steps", params.steps, "request steps")->capture_default_str();
    app->add_option("--time-step", params.time_step, "spacing of request times")->capture_default_str();
    app->add_option("--request-size", params.request_size, "nodes per request (0: random)")->capture_default_str();
    app->add_option("--num-leases", params.num_leases, "random catalog size")->capture_default_str();
    app->add_option("--leases", leases, "explicit catalog, e.g. 1:1,4:3/2");
  }

  GenParams resolve() const {
    GenParams p = params;
    p.kind = parse_graph_kind(kind);
    if (!leases.empty()) p.catalog = parse_leases(leases);
    return p;
  }
};

int cmd_gen(const GenOptions& gen, std::uint64_t seed, const std::string& out) {
  emit(out, to_json(gen_instance(gen.resolve(), seed)).dump(2) + "\n");
  return 0;
}

struct RunOptions {
  std::string instance;
  std::string algorithm = "ocdsl";
  std::string id;
  std::string out;
  std::string steps_jsonl;
  std::string dump_hst;
  int trials = 1;
  int threads = 1;
  bool oracle = false;
  bool timing = false;
};

int cmd_run(const RunOptions& o, const GenOptions& gen, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.algorithm = parse_algorithm(o.algorithm);
  if (!o.instance.empty()) {
    cfg.source = load_instance(o.instance);
  } else {
    cfg.source = gen.resolve();
  }
  cfg.instance_id = !o.id.empty() ? o.id : !o.instance.empty() ? o.instance : gen.kind;
  cfg.trials = o.trials;
  cfg.base_seed = seed;
  cfg.oracle = o.oracle;
  cfg.timing = o.timing;
  cfg.threads = o.threads;
  emit(o.out, records_to_csv(run_experiment(cfg)));

  if (!o.steps_jsonl.empty()) {
    std::ostringstream lines;
    for (int i = 0; i < cfg.trials; ++i) {
      const TrialOutcome outcome = run_indexed_trial(cfg, i);
      for (const StepReport& step : outcome.steps) {
        auto j = to_json(step);
        j["trial"] = i;
        lines << j.dump() << "\n";
      }
    }
    emit(o.steps_jsonl, lines.str());
  }
  if (!o.dump_hst.empty()) {
    const TrialSetup setup = trial_setup(cfg, 0);
    OcdslState st(setup.instance.graph, setup.instance.catalog, setup.algorithm_seed);
    std::ostringstream text;
    st.osfl().hst().dump(text);
    emit(o.dump_hst, text.str());
  }
  return 0;
}

int cmd_oracle(const std::string& instance, bool domination_only, const std::string& out) {
  const Instance inst = load_instance(instance);
  const OfflineSolution sol = domination_only ? offline_opt_ds(inst) : offline_opt(inst);
  std::cout << "opt_cost," << to_string(sol.cost) << "\n";
  emit(out, ledger_to_csv(sol.ledger));
  return 0;
}

int cmd_verify(const std::string& instance, const std::string& ledger_path, bool domination_only) {
  const Instance inst = load_instance(instance);
  std::ifstream in(ledger_path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot read " + ledger_path);
  const PurchaseLedger ledger = ledger_from_csv(in, inst.catalog);
  for (const Request& r : inst.requests) {
    const auto active = ledger.active_nodes(inst.graph, inst.catalog, r.t);
    const bool ok = domination_only ? check_dominated_step(inst.graph, active, r.nodes)
                                    : check_feasible_step(inst.graph, active, r.nodes).ok;
    if (!ok) {
      std::cout << "infeasible at t=" << r.t << "\n";
      return 1;
    }
  }
  std::cout << "feasible, cost " << to_string(ledger.total_cost()) << "\n";
  return 0;
}

int cmd_pp(const std::string& leases, const std::string& rainy_text, const std::string& out) {
  const LeaseCatalog cat = parse_leases(leases);
  const std::vector<Time> rainy = parse_times(rainy_text);
  if (rainy.empty()) throw Error(ErrorKind::EmptyRequest, "no rainy days");
  PermitState st(cat);
  std::ostringstream csv;
  csv << "t,lease,start,cost\n";
  for (Time t : rainy)
    for (const Permit& p : st.request(t)) csv << t << "," << p.lease << "," << p.start << "," << to_string(cat[p.lease].cost) << "\n";
  const Cost opt = pp_offline_opt(rainy, cat, *std::max_element(rainy.begin(), rainy.end()) + cat.longest().duration);
  csv << "online_cost," << to_string(st.total_cost()) << "\n";
  csv << "opt_cost," << to_string(opt) << "\n";
  csv << "ratio," << format_double(ratio_of(st.total_cost(), opt)) << "\n";
  emit(out, csv.str());
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<RunRecord> records;
  for (const std::string& path : inputs) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::BadInput, "cannot read " + path);
    for (RunRecord& r : records_from_csv(in)) records.push_back(std::move(r));
  }
  const auto summary = report(records);
  std::cout << summary_to_table(summary);
  if (!out.empty()) emit(out, summary_to_csv(summary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online connected dominating set leasing experiments"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::string out;

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance as JSON");
  gen.add_to(gen_cmd);
  gen_cmd->add_option("--seed", seed)->capture_default_str();
  gen_cmd->add_option("--out", out, "output file (default stdout)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run an online algorithm over trials and emit CSV records");
  gen.add_to(run_cmd);
  run_cmd->add_option("--instance", run.instance, "instance JSON (otherwise generated per trial)");
  run_cmd->add_option("--algorithm", run.algorithm, "ocdsl|odsl-pd|odsl-rr|pp")->capture_default_str();
  run_cmd->add_option("--trials", run.trials)->capture_default_str();
  run_cmd->add_option("--seed", seed)->capture_default_str();
  run_cmd->add_option("--threads", run.threads)->capture_default_str();
  run_cmd->add_option("--id", run.id, "instance_id column value");
  run_cmd->add_flag("--oracle", run.oracle, "compute the exact offline optimum");
  run_cmd->add_flag("--timing", run.timing, "record wall time (output no longer reproducible)");
  run_cmd->add_option("--out", run.out, "CSV output (default stdout)");
  run_cmd->add_option("--steps-jsonl", run.steps_jsonl, "per-step reports as JSON lines");
  run_cmd->add_option("--dump-hst", run.dump_hst, "text dump of the tree used in trial 0");

  std::string instance, ledger;
  bool domination_only = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact offline optimum of a small instance");
  oracle_cmd->add_option("--instance", instance)->required();
  oracle_cmd->add_flag("--domination-only", domination_only, "drop the connectivity requirement");
  oracle_cmd->add_option("--out", out, "optimal ledger CSV (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "check a purchase ledger against an instance");
  verify_cmd->add_option("--instance", instance)->required();
  verify_cmd->add_option("--ledger", ledger)->required();
  verify_cmd->add_flag("--domination-only", domination_only, "drop the connectivity requirement");

  std::string leases, rainy;
  auto* pp_cmd = app.add_subcommand("pp", "online parking permit on a rainy-day list");
  pp_cmd->add_option("--leases", leases, "catalog, e.g. 1:1,4:2")->required();
  pp_cmd->add_option("--rainy", rainy, "rainy days, e.g. 0,1,5")->required();
  pp_cmd->add_option("--out", out, "CSV output (default stdout)");

  std::vector<std::string> inputs;
  auto* report_cmd = app.add_subcommand("report", "summarize run CSVs");
  report_cmd->add_option("inputs", inputs, "record CSV files")->required();
  report_cmd->add_option("--out", out, "summary CSV");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen_cmd) return cmd_gen(gen, seed, out);
    if (*run_cmd) return cmd_run(run, gen, seed);
    if (*oracle_cmd) return cmd_oracle(instance, domination_only, out);
    if (*verify_cmd) return cmd_verify(instance, ledger, domination_only);
    if (*pp_cmd) return cmd_pp(leases, rainy, out);
    if (*report_cmd) return cmd_report(inputs, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
