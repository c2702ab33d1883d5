#pragma once

#include "dre/dispatch/environment.hpp"
#include "dre/irr/dre.hpp"
#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"
#include "dre/model/stn.hpp"

#include "json.hpp"
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dre::dispatch {

/// DREEx trusts an envelope; Bl-X trusts nominal values within X percent.
struct Policy {
  enum class Kind { Envelope, Baseline };
  Kind kind = Kind::Envelope;
  int slack_percent = 0;

  static Policy envelope() { return {}; }
  static Policy baseline(int slack) { return {Kind::Baseline, slack}; }
  std::string name() const;
  bool operator==(const Policy&) const = default;
};

/// "DREEx" or "Bl-<X>".
Policy parse_policy(const std::string& name);

/// The box of parameter values a baseline accepts: nominal * (1 +- X/100),
/// lower ends clamped at 0.
irr::Dre baseline_bounds(const model::ParametrizedProblem& problem, int slack_percent);

/// Dispatch window; no max means unbounded above.
struct Window {
  Rational min;
  std::optional<Rational> max;
  bool contains(const Rational& t) const { return min <= t && (!max || t <= *max); }
  bool operator==(const Window&) const = default;
};

/// The plan's STN with every parametric bound relaxed to its loosest value
/// over a box, the happening-order chain, the plan start at 0, and the
/// observed times fixed as they arrive.
class DispatchNetwork {
 public:
  DispatchNetwork(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan,
                  const irr::Dre& bounds);
  bool consistent() const { return consistent_; }
  /// nullopt when the network is inconsistent.
  std::optional<Window> window(std::size_t timepoint) const;
  /// Fixes t; returns false (and stays inconsistent) when t is impossible.
  bool observe(std::size_t timepoint, const Rational& t);

 private:
  model::DistanceGraph graph_;
  std::size_t origin_;
  bool consistent_ = true;
};

/// Window of `timepoint` given the times already observed.
std::optional<Window> min_max_dispatch_time(const model::ParametrizedProblem& problem,
                                            const model::ParametrizedSTNPlan& plan, const irr::Dre& bounds,
                                            const model::Schedule& observed, const std::string& timepoint);

/// How each parameter is revealed during execution.
struct ParameterRole {
  enum class Kind { Duration, Rate, Unused };
  Kind kind = Kind::Unused;
  std::string action;  // duration: the action of `instance`
  int instance = 0;
  std::string fluent;  // rate: the fluent whose effect uses it
};

/// A parameter bounding exactly one instance's duration is a duration; one
/// read by conditions or effects is a rate. Anything else is a ConfigError.
std::map<std::string, ParameterRole> parameter_roles(const model::ParametrizedProblem& problem,
                                                     const model::ParametrizedSTNPlan& plan);

struct HappeningRecord {
  std::string timepoint;
  std::string action;  // empty for the plan start
  int instance = 0;
  bool is_start = false;
  std::optional<Window> window;  // absent for ends that completed after dispatch stopped
  Rational time;
  std::map<std::string, Rational> observed;  // parameter values revealed here
};

enum class Outcome { Success, ReplanTriggered, Failure };
const char* outcome_name(Outcome o);

enum class StopReason {
  Completed,
  LateStart,          // now is past a start's window
  EndOutsideWindow,   // an action completed before min or after max
  OutsideBounds,      // an observed parameter value left the policy's box
  ConditionViolated,  // the world broke a condition: no recovery
};
const char* stop_reason_name(StopReason r);

struct ExecutionTrace {
  std::vector<HappeningRecord> records;  // in observed-time order
  Outcome outcome = Outcome::Failure;
  StopReason stop = StopReason::Completed;
  std::string detail;
  bool goals_achieved = false;
  Assignment final_state;  // fluents only
  Rational end_time;              // last physical event, including ends drained after a stop
  std::vector<std::optional<Rational>> goal_written;  // per goal: last write of one of its fluents
  bool all_observations_inside = true;           // every observed value inside the policy box
};

/// Event-driven execution of the plan under a policy box: starts fire at the
/// earliest time their window allows, ends arrive when the environment says,
/// and dispatch stops on the first window or bound violation. Actions still
/// running when dispatch stops complete physically before the trace closes.
ExecutionTrace dispatch(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan,
                        const irr::Dre& bounds, Environment& env);

nlohmann::json trace_to_json(const ExecutionTrace& trace);

}  // namespace dre::dispatch
