#pragma once

#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dre::model {

/// Selects a quantity of a concrete plan to become a parameter.
///   duration <action>[#k] [as <name>] [weight <w>]
///   rate <action> <fluent> [as <name>] [weight <w>]
struct Directive {
  enum class Kind { Duration, Rate };
  Kind kind = Kind::Duration;
  std::string action;
  std::optional<int> instance;  // duration only; all instances when absent
  std::string fluent;           // rate only
  std::optional<std::string> name;
  Rational weight{1};
  bool operator==(const Directive&) const = default;
};

Directive parse_directive(std::string_view line);
/// One directive per non-blank line; ';' comments.
std::vector<Directive> parse_directives(std::string_view text);

struct ParametrizedPair {
  ParametrizedProblem problem;
  ParametrizedSTNPlan plan;
  Schedule schedule;  // the time-triggered plan's own times, per timepoint
};

/// Turns a time-triggered plan into a parametrized STN plan. Happenings are
/// ordered by time, ties by plan-file position (start before end). Each start
/// is tied to its predecessor happening by the original gap; each end is pinned
/// to its start by the duration (a parameter when selected); goal deadlines
/// bound their achieving happening.
ParametrizedPair parametrize(const ParametrizedProblem& problem, const TimeTriggeredPlan& plan,
                             const std::vector<Directive>& directives);

}  // namespace dre::model
