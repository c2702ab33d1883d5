#include "dre/dispatch/campaign.hpp"

#include "config.hpp"
#include "dre/core/error.hpp"
#include "dre/dispatch/delivery.hpp"
#include "dre/encoder/encoder.hpp"
#include "dre/irr/irr.hpp"
#include "dre/model/io.hpp"

#include <atomic>
#include <filesystem>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace dre::dispatch {

using model::ParametrizedProblem;
using nlohmann::json;

namespace {

Instance load_instance(const json& j, const std::string& base_dir) {
  detail::allow_only(j, {"name", "dir"}, "instance");
  Instance inst;
  inst.name = detail::string_field(j, "name");
  std::filesystem::path dir = std::filesystem::path(base_dir) / detail::string_field(j, "dir");
  auto read = [&](const char* file) {
    auto path = dir / file;
    if (!std::filesystem::exists(path)) throw ConfigError("instance '" + inst.name + "': missing " + path.string());
    return model::read_file(path.string());
  };
  inst.problem = model::parse_problem(read("base.txt"));
  inst.plan = model::parse_time_triggered_plan(read("plan.tt"));
  inst.directives = model::parse_directives(read("directives.txt"));
  return inst;
}

/// Directives whose action the plan actually uses.
std::vector<model::Directive> relevant(const std::vector<model::Directive>& all, const model::TimeTriggeredPlan& tt) {
  std::set<std::string> used;
  for (const auto& a : tt) used.insert(a.action);
  std::vector<model::Directive> out;
  for (const auto& d : all)
    if (used.count(d.action)) out.push_back(d);
  return out;
}

class DreCache {
 public:
  DreCache(Rational beta, std::size_t budget) : beta_(std::move(beta)), budget_(budget) {}

  irr::Dre get(const model::ParametrizedPair& pair) {
    std::string key = model::print_problem(pair.problem) + "\n" + model::print_plan(pair.plan);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    irr::IrrOptions o;
    o.beta = beta_;
    o.max_steps = budget_;
    auto enc = enc::encode(pair.problem, pair.plan);
    irr::Dre r = irr::run_irr(pair.problem, enc, o).region;
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, r).first->second;
  }

 private:
  Rational beta_;
  std::size_t budget_;
  std::mutex mutex_;
  std::map<std::string, irr::Dre> cache_;
};

json bounds_json(const irr::Dre& box) {
  json j = json::object();
  for (std::size_t i = 0; i < box.size(); ++i) j[box.names()[i]] = {to_string(box[i].lower), to_string(box[i].upper)};
  return j;
}

EpisodeResult run_episode(const CampaignConfig& cfg, const Instance& inst, const Policy& policy, std::size_t episode,
                          const Replanner& replanner, DreCache& cache) {
  EpisodeResult res{inst.name, policy.name(), episode, false, 0, "", 0, 0, ""};
  json log;
  log["instance"] = inst.name;
  log["policy"] = policy.name();
  log["episode"] = episode;
  log["dispatches"] = json::array();

  EpisodeEnvironment env(cfg.environment, episode);
  ParametrizedProblem problem = inst.problem;
  model::TimeTriggeredPlan tt = inst.plan;
  Rational elapsed = 0;
  std::vector<std::optional<Rational>> achieved(problem.goals.size());
  {
    auto init = problem.constant_values();
    for (const auto& f : problem.fluents) init[f.name] = f.initial.evaluate(init);
    for (std::size_t g = 0; g < problem.goals.size(); ++g)
      if (problem.goals[g].condition.holds(init)) achieved[g] = Rational(0);
  }

  try {
    for (;;) {
      auto pair = model::parametrize(problem, tt, relevant(inst.directives, tt));
      irr::Dre bounds = policy.kind == Policy::Kind::Envelope ? cache.get(pair)
                                                              : baseline_bounds(pair.problem, policy.slack_percent);
      auto trace = dispatch(pair.problem, pair.plan, bounds, env);
      json d = trace_to_json(trace);
      d["offset"] = to_string(elapsed);
      d["bounds"] = bounds_json(bounds);
      log["dispatches"].push_back(d);

      if (policy.kind == Policy::Kind::Envelope && trace.stop == StopReason::Completed &&
          trace.all_observations_inside) {
        ++res.guaranteed_dispatches;
        if (!trace.goals_achieved) ++res.guarantee_violations;
      }
      auto state = problem.constant_values();
      for (const auto& [f, v] : trace.final_state) state[f] = v;
      for (std::size_t g = 0; g < problem.goals.size(); ++g) {
        if (!problem.goals[g].condition.holds(state)) achieved[g].reset();
        else if (trace.goal_written[g]) achieved[g] = elapsed + *trace.goal_written[g];
      }
      elapsed += trace.end_time;

      if (trace.outcome == Outcome::Success) {
        res.success = true;
        break;
      }
      if (trace.outcome == Outcome::Failure) {
        res.failure = std::string(stop_reason_name(trace.stop)) + (trace.detail.empty() ? "" : ": " + trace.detail);
        break;
      }
      if (++res.replans > cfg.max_replans) {
        res.failure = "replan limit reached";
        break;
      }
      elapsed += cfg.replan_latency;
      auto next = rebase(inst.problem, trace.final_state, elapsed, achieved);
      if (!next) {
        res.failure = "deadline passed";
        break;
      }
      auto plan = replanner ? replanner(*next) : std::nullopt;
      if (!plan) {
        res.failure = "no plan";
        break;
      }
      problem = std::move(*next);
      tt = std::move(*plan);
    }
  } catch (const std::exception& e) {
    res.success = false;
    res.failure = std::string("error: ") + e.what();
  }
  if (res.success)
    for (std::size_t g = 0; g < inst.problem.goals.size(); ++g) {
      const auto& dl = inst.problem.goals[g].deadline;
      if (!achieved[g] || (dl && *achieved[g] > *dl)) {
        res.success = false;
        res.failure = "goal " + inst.problem.goals[g].condition.str() + " missed";
      }
    }
  log["success"] = res.success;
  log["replans"] = res.replans;
  log["elapsed"] = to_string(elapsed);
  if (!res.failure.empty()) log["failure"] = res.failure;
  res.trace = log.dump();
  return res;
}

std::string percent(double x) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << x;
  return o.str();
}

std::string decimal(double x) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(2) << x;
  return o.str();
}

}  // namespace

CampaignConfig campaign_from_json(const json& doc, const std::string& base_dir) {
  using namespace detail;
  allow_only(doc, {"name", "seed", "episodes", "policies", "instances", "environment", "irr", "replan", "jobs"},
             "campaign");
  CampaignConfig c;
  c.name = doc.contains("name") ? string_field(doc, "name") : "campaign";
  c.seed = static_cast<std::uint64_t>(integer_field(doc, "seed", 0));
  c.episodes = static_cast<std::size_t>(integer_field(doc, "episodes", 1));
  const auto& policies = field(doc, "policies");
  if (!policies.is_array() || policies.empty()) throw ConfigError("'policies' must be a nonempty array");
  for (const auto& p : policies) {
    if (!p.is_string()) throw ConfigError("policy names must be strings");
    c.policies.push_back(parse_policy(p.get<std::string>()));
  }
  const auto& instances = field(doc, "instances");
  if (!instances.is_array() || instances.empty()) throw ConfigError("'instances' must be a nonempty array");
  for (const auto& i : instances) c.instances.push_back(load_instance(i, base_dir));
  c.environment = environment_from_json(doc.value("environment", json::object()), c.seed);
  if (doc.contains("irr")) {
    const auto& irr = doc["irr"];
    allow_only(irr, {"beta", "budget_steps"}, "irr");
    if (irr.contains("beta")) c.beta = rational_field(irr, "beta");
    if (c.beta <= 0) throw ConfigError("beta must be positive");
    if (irr.contains("budget_steps")) c.irr_budget_steps = static_cast<std::size_t>(integer_field(irr, "budget_steps", 0));
  }
  if (doc.contains("replan")) {
    const auto& r = doc["replan"];
    allow_only(r, {"latency", "max_replans", "replanner"}, "replan");
    if (r.contains("latency")) c.replan_latency = rational_field(r, "latency");
    if (c.replan_latency < 0) throw ConfigError("replan latency must be nonnegative");
    if (r.contains("max_replans")) c.max_replans = static_cast<std::size_t>(integer_field(r, "max_replans", 0));
    if (r.contains("replanner")) c.replanner = string_field(r, "replanner");
    named_replanner(c.replanner);
  }
  if (doc.contains("jobs")) c.jobs = static_cast<unsigned>(integer_field(doc, "jobs", 1));
  return c;
}

Replanner named_replanner(const std::string& name) {
  if (name == "delivery") return naive_delivery_replan;
  if (name == "none") return nullptr;
  throw ConfigError("unknown replanner '" + name + "'");
}

std::optional<ParametrizedProblem> rebase(const ParametrizedProblem& base, const Assignment& state,
                                          const Rational& elapsed,
                                          const std::vector<std::optional<Rational>>& achieved_at) {
  ParametrizedProblem p = base;
  auto values = p.constant_values();
  for (auto& f : p.fluents) {
    auto it = state.find(f.name);
    if (it == state.end()) throw ConfigError("state misses fluent '" + f.name + "'");
    f.initial = LinearExpression(it->second);
    values[f.name] = it->second;
  }
  for (std::size_t g = 0; g < p.goals.size(); ++g) {
    auto& goal = p.goals[g];
    if (!goal.deadline) continue;
    if (goal.condition.holds(values)) {
      Rational when = g < achieved_at.size() && achieved_at[g] ? *achieved_at[g] : Rational(0);
      if (when > *goal.deadline) return std::nullopt;
      goal.deadline.reset();
      continue;
    }
    Rational remaining = *goal.deadline - elapsed;
    if (remaining < 0) return std::nullopt;
    goal.deadline = remaining;
  }
  return p;
}

const PolicySummary& CampaignResult::row(const std::string& instance, const std::string& policy) const {
  for (const auto& r : rows)
    if (r.instance == instance && r.policy == policy) return r;
  throw std::out_of_range("no result row for " + instance + "/" + policy);
}

CampaignResult simulate_campaign(const CampaignConfig& cfg, const Replanner& replanner) {
  struct Task {
    std::size_t instance, policy, episode;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cfg.instances.size(); ++i)
    for (std::size_t p = 0; p < cfg.policies.size(); ++p)
      for (std::size_t e = 0; e < cfg.episodes; ++e) tasks.push_back({i, p, e});

  DreCache cache(cfg.beta, cfg.irr_budget_steps);
  std::vector<EpisodeResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < tasks.size();) {
      const Task& t = tasks[k];
      results[k] = run_episode(cfg, cfg.instances[t.instance], cfg.policies[t.policy], t.episode, replanner, cache);
    }
  };
  unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignResult out;
  for (std::size_t k = 0; k < tasks.size(); k += cfg.episodes) {
    PolicySummary s;
    s.instance = results[k].instance;
    s.policy = results[k].policy;
    s.episodes = cfg.episodes;
    std::size_t replans = 0;
    for (std::size_t e = k; e < k + cfg.episodes; ++e) {
      const auto& r = results[e];
      if (r.success) {
        ++s.successes;
        replans += r.replans;
      }
      s.guaranteed_dispatches += r.guaranteed_dispatches;
      s.guarantee_violations += r.guarantee_violations;
    }
    s.coverage = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.episodes);
    s.avg_replans = s.successes ? static_cast<double>(replans) / static_cast<double>(s.successes) : 0.0;
    out.rows.push_back(s);
  }
  out.episodes = std::move(results);
  return out;
}

std::string results_csv(const CampaignResult& result) {
  std::ostringstream o;
  o << "instance,policy,coverage,avg_replans\n";
  for (const auto& r : result.rows)
    o << r.instance << "," << r.policy << "," << percent(r.coverage) << "," << decimal(r.avg_replans) << "\n";
  return o.str();
}

std::string results_table(const CampaignResult& result) {
  std::ostringstream o;
  std::string current;
  for (const auto& r : result.rows) {
    if (r.instance != current) {
      current = r.instance;
      o << current << "\n  " << std::left << std::setw(8) << "Policy" << std::right << std::setw(10) << "Coverage"
        << std::setw(14) << "Avg Replans" << "\n";
    }
    o << "  " << std::left << std::setw(8) << r.policy << std::right << std::setw(9) << percent(r.coverage) << "%"
      << std::setw(14) << decimal(r.avg_replans) << "\n";
  }
  return o.str();
}

}  // namespace dre::dispatch
