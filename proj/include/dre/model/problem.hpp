#pragma once

#include "dre/core/linear_expression.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dre::model {

/// A real-valued uncertain quantity with its value in the original plan and
/// its widening weight.
struct Parameter {
  std::string name;
  Rational nominal;
  Rational weight{1};
  bool operator==(const Parameter&) const = default;
};

/// Named numeric literal usable in expressions; a parametrization directive
/// can turn it into a Parameter inside one action.
struct Constant {
  std::string name;
  Rational value;
  bool operator==(const Constant&) const = default;
};

enum class FluentKind { Numeric, Boolean };

struct Fluent {
  std::string name;
  FluentKind kind = FluentKind::Numeric;
  LinearExpression initial;  // over parameters and constants; 0/1 for booleans
  bool operator==(const Fluent&) const = default;
};

enum class Relation { LessEq, Less, Eq };

/// `lhs rel 0`. Documents are normalized so that `a >= b` becomes `b - a <= 0`.
struct Condition {
  LinearExpression lhs;
  Relation relation = Relation::LessEq;
  bool operator==(const Condition&) const = default;

  bool holds(const Assignment& values) const;
  std::string str() const;
};

struct Effect {
  std::string fluent;
  LinearExpression value;  // over fluents (pre-state), parameters and constants
  bool operator==(const Effect&) const = default;
};

struct DurativeAction {
  std::string name;
  std::optional<Rational> duration;  // nominal duration, informational
  std::vector<Condition> at_start;
  std::vector<Condition> over_all;
  std::vector<Condition> at_end;
  std::vector<Effect> start_effects;
  std::vector<Effect> end_effects;
  bool operator==(const DurativeAction&) const = default;
};

/// A goal condition on the final state. With a deadline, the happening that
/// last writes a fluent of the condition must occur no later than it.
struct Goal {
  Condition condition;
  std::optional<Rational> deadline;
  bool operator==(const Goal&) const = default;
};

struct ParametrizedProblem {
  std::string name;
  Rational epsilon{Rational(1) / 1000};
  std::vector<Parameter> parameters;
  std::vector<Constant> constants;
  std::vector<Fluent> fluents;
  std::vector<DurativeAction> actions;
  std::vector<Goal> goals;

  bool operator==(const ParametrizedProblem&) const = default;

  const Parameter* find_parameter(const std::string& name) const;
  const Constant* find_constant(const std::string& name) const;
  const Fluent* find_fluent(const std::string& name) const;
  const DurativeAction* find_action(const std::string& name) const;

  /// Parameter -> nominal value.
  Assignment nominal_valuation() const;
  /// Constant -> value.
  Assignment constant_values() const;
};

/// Total map Parameter -> value, all >= 0.
using Valuation = Assignment;

}  // namespace dre::model
