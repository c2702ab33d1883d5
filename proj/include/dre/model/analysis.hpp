#pragma once

// Structural facts shared by the encoder, the concrete validator and the
// dispatcher: happening sequence, read/write sets, interference, goal achievers.

#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <set>

namespace dre::model {

struct Happening {
  std::size_t timepoint = 0;
  const DurativeAction* action = nullptr;  // null for the plan start
  bool is_start = false;
  int instance = 0;

  const std::vector<Condition>& conditions() const;
  const std::vector<Effect>& effects() const;
};

/// Happenings in happening order; element 0 is the plan start.
std::vector<Happening> happenings(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan);

std::set<std::string> fluents_read(const ParametrizedProblem& problem, const Happening& h);
std::set<std::string> fluents_written(const Happening& h);

/// Two happenings interfere when one writes a fluent the other reads or writes.
bool interfere(const ParametrizedProblem& problem, const Happening& a, const Happening& b);

/// Position in the happening order of the last happening writing a fluent of
/// the goal condition; 0 (the plan start) when none does.
std::size_t goal_achiever(const ParametrizedProblem& problem, const std::vector<Happening>& seq, const Goal& goal);

/// Difference constraint `later - earlier <= bound` between happening positions.
struct OrderEdge {
  std::size_t later;
  std::size_t earlier;
  Rational bound;
};

/// The order-fixing chain: consecutive happenings a, b get t_a <= t_b,
/// strengthened to t_a + epsilon <= t_b when they interfere.
std::vector<OrderEdge> order_chain(const ParametrizedProblem& problem, const std::vector<Happening>& seq);

}  // namespace dre::model
