#include "dre/dispatch/dispatch.hpp"

#include "dre/core/error.hpp"
#include "dre/model/analysis.hpp"

#include <algorithm>
#include <set>

namespace dre::dispatch {

using model::Happening;
using model::ParametrizedProblem;
using model::ParametrizedSTNPlan;
using model::TimepointKind;

std::string Policy::name() const {
  return kind == Kind::Envelope ? "DREEx" : "Bl-" + std::to_string(slack_percent);
}

Policy parse_policy(const std::string& name) {
  if (name == "DREEx") return Policy::envelope();
  if (name.rfind("Bl-", 0) == 0 && name.size() > 3 && name.size() < 10 &&
      std::all_of(name.begin() + 3, name.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return Policy::baseline(std::stoi(name.substr(3)));
  throw ConfigError("unknown policy '" + name + "' (expected DREEx or Bl-<percent>)");
}

irr::Dre baseline_bounds(const ParametrizedProblem& problem, int slack_percent) {
  irr::Dre box;
  Rational f = Rational(slack_percent) / 100;
  for (const auto& p : problem.parameters)
    box.add(p.name, {std::max(Rational(0), Rational(p.nominal * (1 - f))), p.nominal * (1 + f)});
  return box;
}

DispatchNetwork::DispatchNetwork(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan,
                                 const irr::Dre& bounds)
    : graph_(plan.timepoints.size()), origin_(plan.plan_start()) {
  for (const auto& c : plan.constraints) {
    Rational loose = c.bound.constant();
    for (const auto& [s, a] : c.bound.terms()) {
      if (const auto* k = problem.find_constant(s)) {
        loose += a * k->value;
        continue;
      }
      const irr::Interval* range = nullptr;
      for (std::size_t i = 0; i < bounds.size(); ++i)
        if (bounds.names()[i] == s) range = &bounds[i];
      if (!range) throw ConfigError("no bounds for parameter '" + s + "'");
      loose += a * (a > 0 ? range->upper : range->lower);
    }
    graph_.constrain(*plan.index_of(c.later), *plan.index_of(c.earlier), loose);
  }
  auto seq = model::happenings(problem, plan);
  for (const auto& e : model::order_chain(problem, seq))
    graph_.constrain(seq[e.later].timepoint, seq[e.earlier].timepoint, e.bound);
  consistent_ = graph_.close() && observe(origin_, 0);
}

std::optional<Window> DispatchNetwork::window(std::size_t tp) const {
  if (!consistent_) return std::nullopt;
  const auto& back = graph_.distance(tp, origin_);
  Window w{back ? Rational(-*back) : Rational(0), graph_.distance(origin_, tp)};
  return w;
}

bool DispatchNetwork::observe(std::size_t tp, const Rational& t) {
  if (!consistent_) return false;
  if (tp == origin_ && t == 0) return true;
  consistent_ = graph_.tighten(tp, origin_, t) && graph_.tighten(origin_, tp, -t);
  return consistent_;
}

std::optional<Window> min_max_dispatch_time(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan,
                                            const irr::Dre& bounds, const model::Schedule& observed,
                                            const std::string& timepoint) {
  DispatchNetwork net(problem, plan, bounds);
  for (const auto& [name, t] : observed) {
    auto idx = plan.index_of(name);
    if (!idx) throw UndeclaredSymbol(name);
    if (!net.observe(*idx, t)) return std::nullopt;
  }
  auto idx = plan.index_of(timepoint);
  if (!idx) throw UndeclaredSymbol(timepoint);
  return net.window(*idx);
}

std::map<std::string, ParameterRole> parameter_roles(const ParametrizedProblem& problem,
                                                     const ParametrizedSTNPlan& plan) {
  std::map<std::string, ParameterRole> roles;
  for (const auto& p : problem.parameters) {
    ParameterRole& r = roles[p.name];
    for (const auto& c : plan.constraints) {
      if (!c.bound.mentions(p.name)) continue;
      const auto& a = plan.timepoints[*plan.index_of(c.later)];
      const auto& b = plan.timepoints[*plan.index_of(c.earlier)];
      bool pair = !a.action.empty() && a.action == b.action && a.instance == b.instance && a.kind != b.kind;
      bool plain = c.bound == LinearExpression::symbol(p.name) || c.bound == -LinearExpression::symbol(p.name);
      bool same = r.kind == ParameterRole::Kind::Unused || (r.action == a.action && r.instance == a.instance);
      if (!pair || !plain || !same)
        throw ConfigError("parameter '" + p.name + "' is not the duration of a single action instance");
      r = {ParameterRole::Kind::Duration, a.action, a.instance, ""};
    }
    for (const auto& act : problem.actions) {
      std::string fluent;
      bool used = false;
      for (const auto* list : {&act.at_start, &act.over_all, &act.at_end})
        for (const auto& c : *list) used = used || c.lhs.mentions(p.name);
      for (const auto* list : {&act.start_effects, &act.end_effects})
        for (const auto& e : *list)
          if (e.value.mentions(p.name)) {
            used = true;
            if (fluent.empty()) fluent = e.fluent;
          }
      if (!used) continue;
      if (r.kind == ParameterRole::Kind::Duration)
        throw ConfigError("parameter '" + p.name + "' is both a duration and read by '" + act.name + "'");
      if (r.kind == ParameterRole::Kind::Unused) r = {ParameterRole::Kind::Rate, "", 0, fluent.empty() ? p.name : fluent};
    }
  }
  return roles;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::ReplanTriggered: return "replan-triggered";
    case Outcome::Failure: return "failure";
  }
  return "?";
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::LateStart: return "late-start";
    case StopReason::EndOutsideWindow: return "end-outside-window";
    case StopReason::OutsideBounds: return "outside-bounds";
    case StopReason::ConditionViolated: return "condition-violated";
  }
  return "?";
}

namespace {

struct Running {
  const model::DurativeAction* action = nullptr;
  int instance = 0;
  std::size_t end_timepoint = 0;
  Rational start;
  Rational end;
  std::map<std::string, Rational> rates;
};

using Key = std::pair<std::string, int>;

class Executor {
 public:
  Executor(const ParametrizedProblem& p, const ParametrizedSTNPlan& plan, const irr::Dre& bounds, Environment& env)
      : p_(p), plan_(plan), bounds_(bounds), env_(env), roles_(parameter_roles(p, plan)), net_(p, plan, bounds) {
    world_ = p.constant_values();
    for (const auto& x : p.parameters) world_[x.name] = x.nominal;
    for (const auto& f : p.fluents) world_[f.name] = f.initial.evaluate(world_);
    nominal_ = world_;
    trace_.goal_written.assign(p.goals.size(), std::nullopt);
    for (const auto& g : p.goals) {
      std::set<std::string> fs;
      for (const auto& [s, c] : g.condition.lhs.terms())
        if (p.find_fluent(s)) fs.insert(s);
      goal_fluents_.push_back(fs);
    }
  }

  ExecutionTrace run() {
    auto seq = model::happenings(p_, plan_);
    bool stopped = false;
    for (const auto& h : seq) {
      if (!step(h)) {
        stopped = true;
        break;
      }
    }
    if (!stopped) trace_.stop = StopReason::Completed;
    if (trace_.stop != StopReason::ConditionViolated) drain();
    finish();
    return std::move(trace_);
  }

 private:
  const std::string& name_of(std::size_t tp) const { return plan_.timepoints[tp].name; }

  Rational nominal_duration(const std::string& action, int instance) const {
    std::optional<std::size_t> s, e;
    for (std::size_t i = 0; i < plan_.timepoints.size(); ++i) {
      const auto& tp = plan_.timepoints[i];
      if (tp.action != action || tp.instance != instance) continue;
      (tp.kind == TimepointKind::ActionStart ? s : e) = i;
    }
    for (const auto& c : plan_.constraints)
      if (c.later == name_of(*e) && c.earlier == name_of(*s)) return c.bound.evaluate(nominal_);
    const auto* a = p_.find_action(action);
    return a->duration.value_or(0);
  }

  bool outside(const std::string& param, const Rational& v) const {
    for (std::size_t i = 0; i < bounds_.size(); ++i)
      if (bounds_.names()[i] == param) return !bounds_[i].contains(v);
    return true;
  }

  /// Rates read by this happening of the instance, drawn on first use.
  void reveal_rates(const Happening& h, Running& r, HappeningRecord& rec) {
    for (const auto& [name, role] : roles_) {
      if (role.kind != ParameterRole::Kind::Rate || r.rates.count(name)) continue;
      bool used = false;
      for (const auto& c : h.conditions()) used = used || c.lhs.mentions(name);
      for (const auto& e : h.effects()) used = used || e.value.mentions(name);
      if (!used) continue;
      Rational v = env_.rate(r.action->name, role.fluent, nominal_.at(name));
      r.rates[name] = v;
      rec.observed[name] = v;
    }
  }

  void bind(const Running& r) {
    for (const auto& [name, v] : r.rates) world_[name] = v;
    for (const auto& [name, role] : roles_)
      if (role.kind == ParameterRole::Kind::Duration && role.action == r.action->name && role.instance == r.instance)
        world_[name] = r.end - r.start;
  }

  /// Conditions on the pre-state, effects, then invariants of everything still
  /// running on the post-state.
  bool physics(const Happening& h, const Running& r, const Rational& t) {
    bind(r);
    for (const auto& c : h.conditions())
      if (!c.holds(world_)) return violated("condition " + c.str() + " of " + r.action->name + " fails at " + to_string(t));
    Assignment post = world_;
    for (const auto& e : h.effects()) post[e.fluent] = e.value.evaluate(world_);
    world_ = std::move(post);
    for (const auto& e : h.effects())
      for (std::size_t g = 0; g < goal_fluents_.size(); ++g)
        if (goal_fluents_[g].count(e.fluent)) trace_.goal_written[g] = t;
    for (const auto& [key, other] : running_) {
      bind(other);
      for (const auto& c : other.action->over_all)
        if (!c.holds(world_))
          return violated("invariant " + c.str() + " of " + other.action->name + " fails at " + to_string(t));
    }
    return true;
  }

  bool violated(std::string why) {
    trace_.stop = StopReason::ConditionViolated;
    trace_.detail = std::move(why);
    return false;
  }

  bool stop(StopReason r, std::string why) {
    trace_.stop = r;
    trace_.detail = std::move(why);
    return false;
  }

  std::optional<Key> earliest_running() const {
    std::optional<Key> best;
    for (const auto& [k, r] : running_)
      if (!best || r.end < running_.at(*best).end) best = k;
    return best;
  }

  /// Completes a running action: physics, observation, bookkeeping.
  bool complete(const Key& key, std::optional<Window> window, HappeningRecord& rec) {
    Running r = running_.at(key);
    running_.erase(key);
    Happening h{r.end_timepoint, r.action, false, r.instance};
    rec = {name_of(r.end_timepoint), r.action->name, r.instance, false, window, r.end, {}};
    reveal_rates(h, r, rec);
    for (const auto& [name, role] : roles_)
      if (role.kind == ParameterRole::Kind::Duration && role.action == r.action->name && role.instance == r.instance)
        rec.observed[name] = r.end - r.start;
    now_ = std::max(now_, r.end);
    return physics(h, r, r.end);
  }

  bool check_observed(const HappeningRecord& rec) {
    for (const auto& [name, v] : rec.observed)
      if (outside(name, v)) {
        trace_.all_observations_inside = false;
        return stop(StopReason::OutsideBounds, name + " = " + to_string(v) + " outside the policy bounds");
      }
    return true;
  }

  bool step(const Happening& h) {
    const std::size_t tp = h.timepoint;
    auto w = net_.window(tp);
    if (!w) return stop(StopReason::LateStart, "temporal network inconsistent before " + name_of(tp));

    if (!h.action) {
      trace_.records.push_back({name_of(tp), "", 0, false, w, 0, {}});
      return true;
    }
    const Key key{h.action->name, h.instance};
    Rational t = h.is_start ? std::max(now_, w->min) : running_.at(key).end;
    if (h.is_start && w->max && t > *w->max)
      return stop(StopReason::LateStart, name_of(tp) + " cannot start by " + to_string(*w->max));

    // Something else finishing first breaks the happening order.
    if (auto first = earliest_running(); first && *first != key && running_.at(*first).end < t) {
      std::size_t other = running_.at(*first).end_timepoint;
      HappeningRecord rec;
      bool ok = complete(*first, net_.window(other), rec);
      trace_.records.push_back(rec);
      if (!ok) return false;
      if (!check_observed(rec)) return false;
      return stop(StopReason::EndOutsideWindow, name_of(other) + " completed out of order at " + to_string(rec.time));
    }

    HappeningRecord rec;
    if (h.is_start) {
      Running r{h.action, h.instance, 0, t, t, {}};
      for (const auto& x : plan_.instances())
        if (x.action == key.first && x.instance == key.second) r.end_timepoint = x.end;
      r.end = t + env_.duration(key.first, nominal_duration(key.first, key.second));
      rec = {name_of(tp), key.first, key.second, true, w, t, {}};
      reveal_rates(h, r, rec);
      now_ = t;
      running_[key] = r;
      bool ok = physics(h, r, t);
      trace_.records.push_back(rec);
      if (!ok) {
        running_.erase(key);
        return false;
      }
      net_.observe(tp, t);
      return check_observed(rec);
    }

    bool ok = complete(key, w, rec);
    trace_.records.push_back(rec);
    if (!ok) return false;
    if (!check_observed(rec)) return false;
    if (!w->contains(t) || !net_.observe(tp, t))
      return stop(StopReason::EndOutsideWindow, name_of(tp) + " at " + to_string(t) + " outside its window");
    return true;
  }

  void drain() {
    while (auto k = earliest_running()) {
      HappeningRecord rec;
      bool ok = complete(*k, std::nullopt, rec);
      trace_.records.push_back(rec);
      if (!ok) return;
    }
  }

  void finish() {
    std::stable_sort(trace_.records.begin(), trace_.records.end(),
                     [](const HappeningRecord& a, const HappeningRecord& b) { return a.time < b.time; });
    for (const auto& f : p_.fluents) trace_.final_state[f.name] = world_.at(f.name);
    trace_.end_time = now_;
    trace_.goals_achieved = true;
    for (std::size_t g = 0; g < p_.goals.size(); ++g) {
      const auto& goal = p_.goals[g];
      if (!goal.condition.holds(world_) || (goal.deadline && trace_.goal_written[g].value_or(0) > *goal.deadline))
        trace_.goals_achieved = false;
    }
    if (trace_.stop == StopReason::ConditionViolated) trace_.outcome = Outcome::Failure;
    else if (trace_.stop == StopReason::Completed)
      trace_.outcome = trace_.goals_achieved ? Outcome::Success : Outcome::Failure;
    else
      trace_.outcome = Outcome::ReplanTriggered;
  }

  const ParametrizedProblem& p_;
  const ParametrizedSTNPlan& plan_;
  const irr::Dre& bounds_;
  Environment& env_;
  std::map<std::string, ParameterRole> roles_;
  DispatchNetwork net_;
  Assignment world_;
  Assignment nominal_;
  std::vector<std::set<std::string>> goal_fluents_;
  std::map<Key, Running> running_;
  Rational now_{0};
  ExecutionTrace trace_;
};

}  // namespace

ExecutionTrace dispatch(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan, const irr::Dre& bounds,
                        Environment& env) {
  return Executor(problem, plan, bounds, env).run();
}

nlohmann::json trace_to_json(const ExecutionTrace& trace) {
  nlohmann::json j;
  j["outcome"] = outcome_name(trace.outcome);
  j["stop"] = stop_reason_name(trace.stop);
  if (!trace.detail.empty()) j["detail"] = trace.detail;
  j["goals_achieved"] = trace.goals_achieved;
  j["end_time"] = to_string(trace.end_time);
  j["records"] = nlohmann::json::array();
  for (const auto& r : trace.records) {
    nlohmann::json x;
    x["timepoint"] = r.timepoint;
    if (!r.action.empty()) {
      x["action"] = r.action;
      x["instance"] = r.instance;
      x["kind"] = r.is_start ? "start" : "end";
    }
    if (r.window) {
      x["min"] = to_string(r.window->min);
      x["max"] = r.window->max ? nlohmann::json(to_string(*r.window->max)) : nlohmann::json("inf");
    }
    x["time"] = to_string(r.time);
    if (!r.observed.empty()) {
      x["observed"] = nlohmann::json::object();
      for (const auto& [k, v] : r.observed) x["observed"][k] = to_string(v);
    }
    j["records"].push_back(x);
  }
  return j;
}

}  // namespace dre::dispatch
