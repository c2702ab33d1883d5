// dre: compute envelopes, validate points, run campaigns, report convergence.

#include "CLI11.hpp"
#include "dre/dispatch/campaign.hpp"
#include "dre/encoder/encoder.hpp"
#include "dre/irr/io.hpp"
#include "dre/irr/irr.hpp"
#include "dre/irr/report.hpp"
#include "dre/lra/smtlib.hpp"
#include "dre/model/io.hpp"
#include "dre/model/parametrize.hpp"
#include "dre/model/validate.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace dre;

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kInvalidNominal = 3, kBudget = 4, kConfig = 5 };

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_input(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("no such file: " + path);
  return model::read_file(path);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

struct Inputs {
  std::string problem;
  std::string plan;
  std::string directives;
};

/// A problem with an STN plan, or a base problem with a time-triggered plan
/// (`.tt`) and optional directives. `.json` documents are read as JSON.
model::ParametrizedPair load(const Inputs& in) {
  std::string text = read_input(in.problem);
  auto problem = ends_with(in.problem, ".json") ? model::problem_from_json(nlohmann::json::parse(text))
                                                : model::parse_problem(text);
  if (ends_with(in.plan, ".tt")) {
    auto tt = model::parse_time_triggered_plan(read_input(in.plan));
    auto directives = in.directives.empty() ? std::vector<model::Directive>{}
                                            : model::parse_directives(read_input(in.directives));
    return model::parametrize(problem, tt, directives);
  }
  if (!in.directives.empty()) throw ConfigError("--directives needs a time-triggered plan (.tt)");
  std::string plan_text = read_input(in.plan);
  auto plan = ends_with(in.plan, ".json") ? model::plan_from_json(nlohmann::json::parse(plan_text), problem)
                                          : model::parse_plan(plan_text, problem);
  return {problem, plan, {}};
}

std::map<std::string, Rational> parse_bindings(const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, Rational> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(std::string(flag) + " expects name=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    } catch (const std::invalid_argument&) {
      throw ConfigError(std::string(flag) + ": '" + item.substr(eq + 1) + "' is not a rational");
    }
  }
  return out;
}

std::unique_ptr<lra::Solver> make_solver(const std::string& backend) {
  if (backend.empty() || backend == "builtin") return std::make_unique<lra::BuiltinSolver>();
  if (!fs::exists(backend)) throw ConfigError("SMT backend not found: " + backend);
  return std::make_unique<lra::ExternalSolver>(backend);
}

struct ComputeArgs {
  Inputs in;
  std::string beta = "1";
  std::vector<std::string> omega;
  std::optional<std::size_t> budget_steps;
  std::optional<double> budget_seconds;
  std::string out;
  std::string log;
  std::string dump;
  std::string backend = "builtin";
};

int cmd_compute(const ComputeArgs& a) {
  auto pair = load(a.in);
  irr::IrrOptions o;
  try {
    o.beta = parse_rational(a.beta);
  } catch (const std::invalid_argument&) {
    throw ConfigError("--beta: '" + a.beta + "' is not a rational");
  }
  o.omega = parse_bindings(a.omega, "--omega");
  o.max_steps = a.budget_steps;
  o.max_seconds = a.budget_seconds;
  auto solver = make_solver(a.backend);
  o.solver = solver.get();

  std::unique_ptr<std::ofstream> log;
  if (!a.log.empty()) {
    if (fs::path(a.log).has_parent_path()) fs::create_directories(fs::path(a.log).parent_path());
    log = std::make_unique<std::ofstream>(a.log);
    if (!*log) throw ConfigError("cannot write " + a.log);
    o.sink = [&log](const irr::Snapshot& s) { *log << irr::snapshot_to_json(s).dump() << "\n" << std::flush; };
  }
  auto enc = enc::encode(pair.problem, pair.plan);
  if (!a.dump.empty()) enc::dump_encoding(enc, a.dump);
  auto result = irr::run_irr(pair.problem, enc, o);
  write_output(a.out, irr::dre_to_json(pair.problem, result, o).dump(2) + "\n");
  if (result.converged) return kOk;
  std::cerr << "budget exhausted after " << result.steps << " steps; unconverged:";
  for (const auto& n : result.unconverged) std::cerr << " " << n;
  std::cerr << "\n";
  return kBudget;
}

struct ValidateArgs {
  Inputs in;
  std::vector<std::string> points;
  std::string dre;
  std::string schedule;
  std::string backend = "builtin";
};

model::Schedule read_schedule(const std::string& path) {
  auto doc = nlohmann::json::parse(read_input(path));
  if (!doc.is_object()) throw ConfigError("schedule must be a JSON object of timepoint -> time");
  model::Schedule s;
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_string() && !v.is_number()) throw ConfigError("time of '" + k + "' must be a rational");
    s[k] = v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
  }
  return s;
}

int cmd_validate(const ValidateArgs& a) {
  auto pair = load(a.in);
  const auto& p = pair.problem;
  auto solver = make_solver(a.backend);
  auto enc = enc::encode(p, pair.plan);
  bool ok = true;

  if (!a.dre.empty()) {
    auto region = irr::dre_from_json(nlohmann::json::parse(read_input(a.dre)));
    bool inside = irr::check_in_envelope(region, enc, *solver);
    std::cout << "envelope " << a.dre << ": " << (inside ? "valid" : "INVALID") << "\n";
    ok = ok && inside;
  }
  if (a.dre.empty() || !a.points.empty() || !a.schedule.empty()) {
    model::Valuation v = p.nominal_valuation();
    for (const auto& [k, x] : parse_bindings(a.points, "--point")) {
      if (!p.find_parameter(k)) throw UndeclaredSymbol(k);
      v[k] = x;
    }
    model::Schedule s;
    if (!a.schedule.empty()) {
      s = read_schedule(a.schedule);
    } else {
      std::map<std::string, LinearExpression> bind;
      for (const auto& [k, x] : v) bind[k] = LinearExpression(x);
      auto witness = solver->check(lra::substitute(enc.tn && enc.eff, bind));
      if (!witness.sat) {
        std::cout << "point: INVALID (no schedule satisfies the plan's constraints)\n";
        return kFailed;
      }
      s = enc::schedule_from_model(pair.plan, *witness.model);
    }
    auto report = model::explain_concrete(p, pair.plan, v, s);
    std::cout << "point:";
    for (const auto& [k, x] : v) std::cout << " " << k << "=" << to_string(x);
    std::cout << "\nschedule:";
    for (std::size_t idx : pair.plan.order) {
      const auto& name = pair.plan.timepoints[idx].name;
      if (s.count(name)) std::cout << " " << name << "=" << to_string(s.at(name));
    }
    std::cout << "\n" << (report.valid ? "valid" : "INVALID: " + report.reason) << "\n";
    ok = ok && report.valid;
  }
  return ok ? kOk : kFailed;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::optional<unsigned> jobs;
  std::string out_dir = "simulation";
};

int cmd_simulate(const SimulateArgs& a) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_input(a.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("campaign document is not JSON: ") + e.what());
  }
  if (doc.is_object() && a.seed) doc["seed"] = *a.seed;
  if (doc.is_object() && a.episodes) doc["episodes"] = *a.episodes;
  auto cfg = dispatch::campaign_from_json(doc, fs::absolute(a.config).parent_path().string());
  if (a.jobs) cfg.jobs = *a.jobs;
  auto result = dispatch::simulate_campaign(cfg, dispatch::named_replanner(cfg.replanner));
  fs::create_directories(a.out_dir);
  write_output((fs::path(a.out_dir) / "results.csv").string(), dispatch::results_csv(result));
  std::string traces;
  for (const auto& e : result.episodes) traces += e.trace + "\n";
  write_output((fs::path(a.out_dir) / "traces.jsonl").string(), traces);
  std::cout << cfg.name << " (seed " << cfg.seed << ", " << cfg.episodes << " episodes)\n"
            << dispatch::results_table(result);
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> logs;
  bool allow_partial = false;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<irr::RunLog> runs;
  for (const auto& path : a.logs) runs.push_back(irr::read_snapshot_log(read_input(path), path));
  write_output(a.out, irr::report_csv(irr::convergence_report(runs, a.allow_partial)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupled robustness envelopes for temporal plans"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Grow an envelope around the nominal parameter values");
  c->add_option("problem", compute.in.problem, "Problem document")->required();
  c->add_option("plan", compute.in.plan, "STN plan, or time-triggered plan (.tt)")->required();
  c->add_option("--directives", compute.in.directives, "Parametrization directives for a .tt plan");
  c->add_option("--beta", compute.beta, "Precision: stop once every step is below beta")->capture_default_str();
  c->add_option("--omega", compute.omega, "Initial step weight, name=value (repeatable)");
  c->add_option("--budget-steps", compute.budget_steps, "Stop after this many steps");
  c->add_option("--budget-seconds", compute.budget_seconds, "Stop after this much wall-clock time");
  c->add_option("-o,--out", compute.out, "Envelope JSON (default: stdout)");
  c->add_option("--log", compute.log, "Snapshot log, one JSON object per line");
  c->add_option("--dump-encoding", compute.dump, "Write the encoding as SMT-LIB2 files into this directory");
  c->add_option("--smt-backend", compute.backend, "builtin, or path to an SMT-LIB2 solver executable")
      ->capture_default_str();

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check a parameter point or an envelope against a plan");
  v->add_option("problem", validate.in.problem, "Problem document")->required();
  v->add_option("plan", validate.in.plan, "STN plan, or time-triggered plan (.tt)")->required();
  v->add_option("--directives", validate.in.directives, "Parametrization directives for a .tt plan");
  v->add_option("--point", validate.points, "Parameter value, name=value (repeatable; nominal otherwise)");
  v->add_option("--schedule", validate.schedule, "JSON object of timepoint -> time (found by the solver otherwise)");
  v->add_option("--dre", validate.dre, "Envelope JSON to check as a whole");
  v->add_option("--smt-backend", validate.backend, "builtin, or path to an SMT-LIB2 solver executable")
      ->capture_default_str();

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run an execution campaign");
  s->add_option("config", simulate.config, "Campaign JSON document")->required();
  s->add_option("--seed", simulate.seed, "Override the campaign seed");
  s->add_option("--episodes", simulate.episodes, "Override the episode count");
  s->add_option("--jobs", simulate.jobs, "Worker threads")->check(CLI::PositiveNumber);
  s->add_option("--out-dir", simulate.out_dir, "Directory for results.csv and traces.jsonl")->capture_default_str();

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Convergence per step across snapshot logs");
  r->add_option("logs", report.logs, "Snapshot logs")->required();
  r->add_flag("--allow-partial", report.allow_partial, "Accept logs of runs that did not finish");
  r->add_option("-o,--out", report.out, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*c) return cmd_compute(compute);
    if (*v) return cmd_validate(validate);
    if (*s) return cmd_simulate(simulate);
    if (*r) return cmd_report(report);
  } catch (const irr::InvalidNominal& e) {
    std::cerr << "invalid nominal: " << e.what() << "\n";
    return kInvalidNominal;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InconsistentPlan& e) {
    std::cerr << "inconsistent plan: " << e.what() << "\n";
    return kParse;
  } catch (const irr::IncompleteLog& e) {
    std::cerr << "error: " << e.what() << " (use --allow-partial)\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
