#pragma once

#include "dre/core/linear_expression.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dre::model {

enum class TimepointKind { PlanStart, ActionStart, ActionEnd };

struct Timepoint {
  std::string name;
  TimepointKind kind = TimepointKind::PlanStart;
  std::string action;  // empty for the plan start
  int instance = 0;
  bool operator==(const Timepoint&) const = default;
};

/// later - earlier <= bound, where bound is a rational optionally plus or
/// minus one parameter.
struct StnConstraint {
  std::string later;
  std::string earlier;
  LinearExpression bound;
  bool operator==(const StnConstraint&) const = default;
};

struct ActionInstance {
  std::string action;
  int instance = 0;
  std::size_t start = 0;  // timepoint indices
  std::size_t end = 0;
};

struct ParametrizedSTNPlan {
  std::string name;
  std::vector<Timepoint> timepoints;
  std::vector<StnConstraint> constraints;
  std::vector<std::size_t> order;  // happening order, indices into timepoints

  bool operator==(const ParametrizedSTNPlan&) const = default;

  std::optional<std::size_t> index_of(const std::string& timepoint) const;
  std::size_t plan_start() const;
  std::vector<ActionInstance> instances() const;
  /// Position of each timepoint in the happening order.
  std::vector<std::size_t> positions() const;
};

/// Concrete timepoint name -> time.
using Schedule = Assignment;

/// One entry of a time-triggered plan: `start: (action) [duration]`.
struct TimedAction {
  Rational start;
  std::string action;
  Rational duration;
  bool operator==(const TimedAction&) const = default;
};

using TimeTriggeredPlan = std::vector<TimedAction>;

}  // namespace dre::model
