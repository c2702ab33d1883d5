#pragma once

#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <string>

namespace dre::model {

struct ValidationReport {
  bool valid = true;
  std::string reason;  // first violation found, empty when valid
};

/// Reference semantics of plan validity under a concrete valuation and
/// schedule: plan start at 0, STN constraints, happening order respected,
/// interfering happenings at least epsilon apart, every condition on the
/// states it guards, goals on the final state and deadlines on achievers.
ValidationReport explain_concrete(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan,
                                  const Valuation& v, const Schedule& schedule);

inline bool validate_concrete(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan, const Valuation& v,
                              const Schedule& schedule) {
  return explain_concrete(problem, plan, v, schedule).valid;
}

}  // namespace dre::model
