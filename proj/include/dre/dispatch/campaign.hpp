#pragma once

#include "dre/dispatch/dispatch.hpp"
#include "dre/dispatch/environment.hpp"
#include "dre/model/parametrize.hpp"

#include "json.hpp"
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dre::dispatch {

/// A base problem, its time-triggered plan, and what to parametrize.
struct Instance {
  std::string name;
  model::ParametrizedProblem problem;
  model::TimeTriggeredPlan plan;
  std::vector<model::Directive> directives;
};

/// Current situation (initial values = current state, deadlines = remaining
/// time) to a new plan, or nullopt when no plan is found.
using Replanner = std::function<std::optional<model::TimeTriggeredPlan>(const model::ParametrizedProblem&)>;

struct CampaignConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t episodes = 1;
  std::vector<Policy> policies;
  std::vector<Instance> instances;
  EnvironmentModel environment;
  Rational beta{1};
  std::size_t irr_budget_steps = 500;  // per IRR run; the resulting DRE is used as-is
  Rational replan_latency{5};          // simulated seconds between a stop and the new plan
  std::size_t max_replans = 50;
  std::string replanner = "delivery";  // or "none"
  unsigned jobs = 1;
};

/// Relative paths in the document resolve against `base_dir`.
CampaignConfig campaign_from_json(const nlohmann::json& doc, const std::string& base_dir);

/// Problem seen `elapsed` into an episode from `state`. Deadlines shrink by
/// `elapsed`; a goal that holds and was achieved in time loses its deadline.
/// nullopt when some deadline can no longer be met.
std::optional<model::ParametrizedProblem> rebase(const model::ParametrizedProblem& base, const Assignment& state,
                                                 const Rational& elapsed,
                                                 const std::vector<std::optional<Rational>>& achieved_at);

struct EpisodeResult {
  std::string instance;
  std::string policy;
  std::size_t episode = 0;
  bool success = false;
  std::size_t replans = 0;
  std::string failure;  // empty on success
  /// Dispatches that completed with every observation inside the envelope.
  std::size_t guaranteed_dispatches = 0;
  /// ...of which did not achieve the goals. Must stay 0.
  std::size_t guarantee_violations = 0;
  std::string trace;  // one JSON line
};

struct PolicySummary {
  std::string instance;
  std::string policy;
  std::size_t episodes = 0;
  std::size_t successes = 0;
  double coverage = 0;     // percent
  double avg_replans = 0;  // over successful episodes
  std::size_t guaranteed_dispatches = 0;
  std::size_t guarantee_violations = 0;
};

struct CampaignResult {
  std::vector<PolicySummary> rows;     // instance-major, policies in config order
  std::vector<EpisodeResult> episodes;  // same order, episodes ascending
  const PolicySummary& row(const std::string& instance, const std::string& policy) const;
};

CampaignResult simulate_campaign(const CampaignConfig& config, const Replanner& replanner);
/// The replanner named in the config.
Replanner named_replanner(const std::string& name);

/// instance,policy,coverage,avg_replans
std::string results_csv(const CampaignResult& result);
/// Plain-text table: policy, coverage, average replans.
std::string results_table(const CampaignResult& result);

}  // namespace dre::dispatch
