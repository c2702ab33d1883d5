#include "dre/model/analysis.hpp"

#include <algorithm>

namespace dre::model {

namespace {

const std::vector<Condition> kNoConditions;
const std::vector<Effect> kNoEffects;

void add_fluents(const ParametrizedProblem& problem, const LinearExpression& e, std::set<std::string>& out) {
  for (const auto& [name, c] : e.terms())
    if (problem.find_fluent(name)) out.insert(name);
}

}  // namespace

const std::vector<Condition>& Happening::conditions() const {
  if (!action) return kNoConditions;
  return is_start ? action->at_start : action->at_end;
}

const std::vector<Effect>& Happening::effects() const {
  if (!action) return kNoEffects;
  return is_start ? action->start_effects : action->end_effects;
}

std::vector<Happening> happenings(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan) {
  std::vector<Happening> seq;
  seq.reserve(plan.order.size());
  for (std::size_t idx : plan.order) {
    const Timepoint& tp = plan.timepoints[idx];
    Happening h;
    h.timepoint = idx;
    if (tp.kind != TimepointKind::PlanStart) {
      h.action = problem.find_action(tp.action);
      h.is_start = tp.kind == TimepointKind::ActionStart;
      h.instance = tp.instance;
    }
    seq.push_back(h);
  }
  return seq;
}

std::set<std::string> fluents_read(const ParametrizedProblem& problem, const Happening& h) {
  std::set<std::string> out;
  for (const auto& c : h.conditions()) add_fluents(problem, c.lhs, out);
  for (const auto& e : h.effects()) add_fluents(problem, e.value, out);
  return out;
}

std::set<std::string> fluents_written(const Happening& h) {
  std::set<std::string> out;
  for (const auto& e : h.effects()) out.insert(e.fluent);
  return out;
}

bool interfere(const ParametrizedProblem& problem, const Happening& a, const Happening& b) {
  auto wa = fluents_written(a);
  auto wb = fluents_written(b);
  if (wa.empty() && wb.empty()) return false;
  auto ra = fluents_read(problem, a);
  auto rb = fluents_read(problem, b);
  auto touches = [](const std::set<std::string>& w, const std::set<std::string>& r, const std::set<std::string>& w2) {
    for (const auto& f : w)
      if (r.count(f) || w2.count(f)) return true;
    return false;
  };
  return touches(wa, rb, wb) || touches(wb, ra, wa);
}

std::size_t goal_achiever(const ParametrizedProblem& problem, const std::vector<Happening>& seq, const Goal& goal) {
  std::set<std::string> goal_fluents;
  add_fluents(problem, goal.condition.lhs, goal_fluents);
  std::size_t last = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (const auto& f : fluents_written(seq[i]))
      if (goal_fluents.count(f)) last = i;
  return last;
}

std::vector<OrderEdge> order_chain(const ParametrizedProblem& problem, const std::vector<Happening>& seq) {
  std::vector<OrderEdge> out;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    Rational sep = interfere(problem, seq[i - 1], seq[i]) ? problem.epsilon : Rational(0);
    out.push_back({i - 1, i, -sep});  // t_{i-1} - t_i <= -sep
  }
  return out;
}

}  // namespace dre::model
