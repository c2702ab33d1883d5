#include "dre/model/parametrize.hpp"

#include "dre/core/error.hpp"
#include "dre/model/analysis.hpp"
#include "dre/model/io.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dre::model {

namespace {

Directive read_directive(detail::Cursor& c) {
  Directive d;
  std::string kind = c.word("'duration' or 'rate'");
  if (kind == "duration") {
    d.kind = Directive::Kind::Duration;
    d.action = c.word("action name");
    if (c.accept("#")) {
      Rational k = c.number("instance number");
      if (denominator_of(k) != 1 || k < 1) c.fail("instance number must be a positive integer");
      d.instance = static_cast<int>(k.convert_to<long>());
    }
  } else if (kind == "rate") {
    d.kind = Directive::Kind::Rate;
    d.action = c.word("action name");
    d.fluent = c.word("fluent name");
  } else {
    c.fail("directive must start with 'duration' or 'rate'");
  }
  if (c.accept("as")) d.name = c.word("parameter name");
  if (c.accept("weight")) {
    d.weight = c.number("weight");
    if (d.weight <= 0) c.fail("weight must be positive");
  }
  c.finish();
  return d;
}

struct Event {
  Rational time;
  std::size_t entry;
  bool is_start;
};

void replace_symbol(LinearExpression& e, const std::string& from, const std::string& to) {
  if (!e.mentions(from)) return;
  e = e.substitute({{from, LinearExpression::symbol(to)}});
}

}  // namespace

Directive parse_directive(std::string_view line) {
  auto lines = detail::tokenize(line);
  if (lines.size() != 1) throw ParseError("expected exactly one directive");
  detail::Cursor c(lines.front());
  return read_directive(c);
}

std::vector<Directive> parse_directives(std::string_view text) {
  std::vector<Directive> out;
  for (const auto& line : detail::tokenize(text)) {
    detail::Cursor c(line);
    out.push_back(read_directive(c));
  }
  return out;
}

ParametrizedPair parametrize(const ParametrizedProblem& problem, const TimeTriggeredPlan& tt,
                             const std::vector<Directive>& directives) {
  ParametrizedPair out{problem, {}, {}};
  ParametrizedProblem& p = out.problem;
  ParametrizedSTNPlan& plan = out.plan;

  std::vector<int> instance(tt.size());
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i < tt.size(); ++i) {
    if (!problem.find_action(tt[i].action)) throw UndeclaredSymbol(tt[i].action);
    instance[i] = ++counts[tt[i].action];
  }

  auto add_parameter = [&](const std::string& name, const Rational& nominal, const Rational& weight) {
    if (p.find_parameter(name) || p.find_constant(name) || p.find_fluent(name))
      throw ConfigError("parameter name '" + name + "' is already in use");
    if (nominal < 0) throw ConfigError("parameter '" + name + "' would have a negative nominal value");
    p.parameters.push_back({name, nominal, weight});
  };

  // Duration parameters per plan entry.
  std::vector<std::optional<std::string>> duration_param(tt.size());
  std::set<std::pair<std::string, std::string>> rated;
  for (const auto& d : directives) {
    if (d.kind == Directive::Kind::Duration) {
      if (!counts.count(d.action)) throw ConfigError("no instance of '" + d.action + "' in the plan");
      if (d.instance && *d.instance > counts[d.action])
        throw ConfigError("the plan has no instance " + std::to_string(*d.instance) + " of '" + d.action + "'");
      for (std::size_t i = 0; i < tt.size(); ++i) {
        if (tt[i].action != d.action || (d.instance && *d.instance != instance[i])) continue;
        if (duration_param[i])
          throw ConfigError("duration of '" + d.action + "' instance " + std::to_string(instance[i]) +
                            " selected twice");
        std::string base = d.name.value_or("d_" + d.action);
        bool suffixed = d.instance ? !d.name : counts[d.action] > 1;
        std::string name = suffixed ? base + "_" + std::to_string(instance[i]) : base;
        add_parameter(name, tt[i].duration, d.weight);
        duration_param[i] = name;
      }
    } else {
      const DurativeAction* a = p.find_action(d.action);
      if (!a) throw ConfigError("unknown action '" + d.action + "'");
      if (!p.find_fluent(d.fluent)) throw ConfigError("unknown fluent '" + d.fluent + "'");
      if (!rated.insert({d.action, d.fluent}).second)
        throw ConfigError("rate of '" + d.fluent + "' in '" + d.action + "' selected twice");
      std::set<std::string> consts;
      for (const auto* list : {&a->start_effects, &a->end_effects})
        for (const auto& e : *list)
          if (e.fluent == d.fluent)
            for (const auto& [s, k] : e.value.terms())
              if (p.find_constant(s)) consts.insert(s);
      if (consts.size() != 1)
        throw ConfigError("effect of '" + d.action + "' on '" + d.fluent + "' must use exactly one named constant");
      const std::string constant = *consts.begin();
      std::string name = d.name.value_or("r_" + d.action + "_" + d.fluent);
      add_parameter(name, p.find_constant(constant)->value, d.weight);
      auto& act = *std::find_if(p.actions.begin(), p.actions.end(),
                                [&](const DurativeAction& x) { return x.name == d.action; });
      for (auto* list : {&act.at_start, &act.over_all, &act.at_end})
        for (auto& c : *list) replace_symbol(c.lhs, constant, name);
      for (auto* list : {&act.start_effects, &act.end_effects})
        for (auto& e : *list) replace_symbol(e.value, constant, name);
    }
  }

  std::vector<Event> events;
  for (std::size_t i = 0; i < tt.size(); ++i) {
    events.push_back({tt[i].start, i, true});
    events.push_back({tt[i].start + tt[i].duration, i, false});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.entry != b.entry) return a.entry < b.entry;
    return a.is_start && !b.is_start;
  });

  plan.name = problem.name + "-plan";
  plan.timepoints.push_back({"t0", TimepointKind::PlanStart, "", 0});
  out.schedule["t0"] = 0;
  std::vector<std::string> start_name(tt.size());
  for (std::size_t k = 0; k < events.size(); ++k) {
    const Event& e = events[k];
    std::string name = "t" + std::to_string(k + 1);
    plan.timepoints.push_back({name, e.is_start ? TimepointKind::ActionStart : TimepointKind::ActionEnd,
                               tt[e.entry].action, instance[e.entry]});
    out.schedule[name] = e.time;
    if (e.is_start) {
      start_name[e.entry] = name;
      const std::string& prev = plan.timepoints[k].name;
      Rational prev_time = k == 0 ? Rational(0) : events[k - 1].time;
      plan.constraints.push_back({name, prev, e.time - prev_time});
      plan.constraints.push_back({prev, name, 0});
    } else {
      LinearExpression d = duration_param[e.entry] ? LinearExpression::symbol(*duration_param[e.entry])
                                                   : LinearExpression(tt[e.entry].duration);
      plan.constraints.push_back({name, start_name[e.entry], d});
      plan.constraints.push_back({start_name[e.entry], name, -d});
    }
  }
  for (std::size_t i = 0; i < plan.timepoints.size(); ++i) plan.order.push_back(i);

  auto seq = happenings(p, plan);
  for (const auto& g : p.goals) {
    if (!g.deadline) continue;
    std::size_t k = goal_achiever(p, seq, g);
    if (k == 0) continue;
    StnConstraint c{plan.timepoints[seq[k].timepoint].name, "t0", *g.deadline};
    if (std::find(plan.constraints.begin(), plan.constraints.end(), c) == plan.constraints.end())
      plan.constraints.push_back(c);
  }
  check_plan(plan, p);
  return out;
}

}  // namespace dre::model
