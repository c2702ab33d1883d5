#include "dre/model/validate.hpp"

#include <set>

// Reference oracle. Everything here is computed directly from the definitions
// and must not reuse the encoder, the solver, or the shared plan analysis.

namespace dre::model {

namespace {

struct Step {
  const DurativeAction* action = nullptr;
  bool is_start = false;
  std::size_t timepoint = 0;
};

std::set<std::string> fluent_symbols(const ParametrizedProblem& p, const LinearExpression& e) {
  std::set<std::string> out;
  for (const auto& [s, c] : e.terms())
    for (const auto& f : p.fluents)
      if (f.name == s) out.insert(s);
  return out;
}

struct Touch {
  std::set<std::string> reads;
  std::set<std::string> writes;
};

Touch touch(const ParametrizedProblem& p, const Step& s) {
  Touch t;
  if (!s.action) return t;
  const auto& conds = s.is_start ? s.action->at_start : s.action->at_end;
  const auto& effs = s.is_start ? s.action->start_effects : s.action->end_effects;
  for (const auto& c : conds)
    for (const auto& f : fluent_symbols(p, c.lhs)) t.reads.insert(f);
  for (const auto& e : effs) {
    t.writes.insert(e.fluent);
    for (const auto& f : fluent_symbols(p, e.value)) t.reads.insert(f);
  }
  return t;
}

bool conflict(const Touch& a, const Touch& b) {
  for (const auto& f : a.writes)
    if (b.reads.count(f) || b.writes.count(f)) return true;
  for (const auto& f : b.writes)
    if (a.reads.count(f)) return true;
  return false;
}

ValidationReport fail(std::string why) { return {false, std::move(why)}; }

}  // namespace

ValidationReport explain_concrete(const ParametrizedProblem& p, const ParametrizedSTNPlan& plan, const Valuation& v,
                                  const Schedule& schedule) {
  Assignment base;
  for (const auto& k : p.constants) base[k.name] = k.value;
  for (const auto& x : p.parameters) {
    auto it = v.find(x.name);
    if (it == v.end()) return fail("valuation misses parameter " + x.name);
    base[x.name] = it->second;
  }
  auto time_of = [&](const std::string& tp) -> const Rational* {
    auto it = schedule.find(tp);
    return it == schedule.end() ? nullptr : &it->second;
  };
  for (const auto& tp : plan.timepoints)
    if (!time_of(tp.name)) return fail("schedule misses timepoint " + tp.name);

  for (const auto& tp : plan.timepoints)
    if (tp.kind == TimepointKind::PlanStart && *time_of(tp.name) != 0) return fail("plan start is not at time 0");

  for (const auto& k : plan.constraints) {
    Rational gap = *time_of(k.later) - *time_of(k.earlier);
    if (gap > k.bound.evaluate(base))
      return fail("constraint " + k.later + " - " + k.earlier + " <= " + k.bound.str() + " violated");
  }

  std::vector<Step> steps;
  for (std::size_t idx : plan.order) {
    const Timepoint& tp = plan.timepoints[idx];
    Step s;
    s.timepoint = idx;
    if (tp.kind != TimepointKind::PlanStart) {
      s.action = p.find_action(tp.action);
      s.is_start = tp.kind == TimepointKind::ActionStart;
    }
    steps.push_back(s);
  }
  auto when = [&](const Step& s) { return *time_of(plan.timepoints[s.timepoint].name); };

  for (std::size_t i = 1; i < steps.size(); ++i)
    if (when(steps[i]) < when(steps[i - 1]))
      return fail("happening " + plan.timepoints[steps[i].timepoint].name + " scheduled before its predecessor");

  std::vector<Touch> touches;
  for (const auto& s : steps) touches.push_back(touch(p, s));
  for (std::size_t i = 0; i < steps.size(); ++i)
    for (std::size_t j = i + 1; j < steps.size(); ++j)
      if (conflict(touches[i], touches[j]) && when(steps[j]) - when(steps[i]) < p.epsilon)
        return fail("interfering happenings " + plan.timepoints[steps[i].timepoint].name + " and " +
                    plan.timepoints[steps[j].timepoint].name + " closer than epsilon");

  // states[i] is the state after step i.
  std::vector<Assignment> states;
  Assignment s0 = base;
  for (const auto& f : p.fluents) s0[f.name] = f.initial.evaluate(base);
  states.push_back(s0);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const Assignment& pre = states.back();
    Assignment post = pre;
    const Step& s = steps[i];
    if (s.action) {
      const auto& conds = s.is_start ? s.action->at_start : s.action->at_end;
      for (const auto& c : conds)
        if (!c.holds(pre))
          return fail("condition " + c.str() + " of " + plan.timepoints[s.timepoint].name + " fails");
      const auto& effs = s.is_start ? s.action->start_effects : s.action->end_effects;
      for (const auto& e : effs) post[e.fluent] = e.value.evaluate(pre);
    }
    states.push_back(std::move(post));
  }

  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (!steps[i].action || !steps[i].is_start) continue;
    const Timepoint& st = plan.timepoints[steps[i].timepoint];
    std::size_t end = i;
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      const Timepoint& tp = plan.timepoints[steps[j].timepoint];
      if (tp.kind == TimepointKind::ActionEnd && tp.action == st.action && tp.instance == st.instance) end = j;
    }
    for (std::size_t k = i; k < end; ++k)
      for (const auto& c : steps[i].action->over_all)
        if (!c.holds(states[k]))
          return fail("invariant " + c.str() + " of " + st.action + " " + std::to_string(st.instance) + " fails");
  }

  const Assignment& final_state = states.back();
  for (const auto& g : p.goals) {
    if (!g.condition.holds(final_state)) return fail("goal " + g.condition.str() + " not reached");
    if (!g.deadline) continue;
    auto goal_fluents = fluent_symbols(p, g.condition.lhs);
    Rational achieved = 0;
    for (std::size_t i = 1; i < steps.size(); ++i)
      for (const auto& f : touches[i].writes)
        if (goal_fluents.count(f)) achieved = when(steps[i]);
    if (achieved > *g.deadline) return fail("goal " + g.condition.str() + " achieved after its deadline");
  }
  return {};
}

}  // namespace dre::model
