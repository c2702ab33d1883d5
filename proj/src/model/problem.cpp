#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <algorithm>
#include <stdexcept>

namespace dre::model {

namespace {

template <typename T>
const T* find_named(const std::vector<T>& items, const std::string& name) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.name == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

bool Condition::holds(const Assignment& values) const {
  Rational x = lhs.evaluate(values);
  switch (relation) {
    case Relation::LessEq: return x <= 0;
    case Relation::Less: return x < 0;
    case Relation::Eq: return x == 0;
  }
  return false;
}

std::string Condition::str() const {
  LinearExpression terms = lhs;
  terms.set_constant(0);
  std::string left = terms.is_constant() ? "0" : terms.str();
  const char* rel = relation == Relation::LessEq ? " <= " : relation == Relation::Less ? " < " : " = ";
  return left + rel + to_string(-lhs.constant());
}

const Parameter* ParametrizedProblem::find_parameter(const std::string& name) const {
  return find_named(parameters, name);
}
const Constant* ParametrizedProblem::find_constant(const std::string& name) const {
  return find_named(constants, name);
}
const Fluent* ParametrizedProblem::find_fluent(const std::string& name) const { return find_named(fluents, name); }
const DurativeAction* ParametrizedProblem::find_action(const std::string& name) const {
  return find_named(actions, name);
}

Assignment ParametrizedProblem::nominal_valuation() const {
  Assignment v;
  for (const auto& p : parameters) v[p.name] = p.nominal;
  return v;
}

Assignment ParametrizedProblem::constant_values() const {
  Assignment v;
  for (const auto& c : constants) v[c.name] = c.value;
  return v;
}

std::optional<std::size_t> ParametrizedSTNPlan::index_of(const std::string& timepoint) const {
  for (std::size_t i = 0; i < timepoints.size(); ++i)
    if (timepoints[i].name == timepoint) return i;
  return std::nullopt;
}

std::size_t ParametrizedSTNPlan::plan_start() const {
  for (std::size_t i = 0; i < timepoints.size(); ++i)
    if (timepoints[i].kind == TimepointKind::PlanStart) return i;
  throw std::logic_error("plan has no plan-start timepoint");
}

std::vector<ActionInstance> ParametrizedSTNPlan::instances() const {
  std::vector<ActionInstance> out;
  for (std::size_t i = 0; i < timepoints.size(); ++i) {
    const auto& tp = timepoints[i];
    if (tp.kind != TimepointKind::ActionStart) continue;
    ActionInstance inst{tp.action, tp.instance, i, i};
    for (std::size_t j = 0; j < timepoints.size(); ++j)
      if (timepoints[j].kind == TimepointKind::ActionEnd && timepoints[j].action == tp.action &&
          timepoints[j].instance == tp.instance)
        inst.end = j;
    out.push_back(inst);
  }
  return out;
}

std::vector<std::size_t> ParametrizedSTNPlan::positions() const {
  std::vector<std::size_t> pos(timepoints.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  return pos;
}

}  // namespace dre::model
