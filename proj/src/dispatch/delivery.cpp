#include "dre/dispatch/delivery.hpp"

#include "dre/core/error.hpp"
#include "dre/model/io.hpp"
#include "dre/model/validate.hpp"

#include <algorithm>
#include <sstream>

namespace dre::dispatch {

using model::ParametrizedProblem;
using model::TimeTriggeredPlan;

DeliverySpec bundled_delivery(bool battery) {
  DeliverySpec s;
  s.orders = {{"o1", {120, 145, 170}, 950}, {"o2", {120, 145, 170}, 1850}};
  if (battery) {
    s.name = "delivery-s-battery";
    s.battery = DeliveryBattery{};
    s.rate_parameters = true;
  }
  return s;
}

std::string delivery_problem_text(const DeliverySpec& spec) {
  std::ostringstream o;
  auto r = [](const Rational& x) { return to_string(x); };
  o << "problem " << spec.name << "\nepsilon " << r(spec.epsilon) << "\n";
  if (spec.battery)
    for (const auto& ord : spec.orders)
      o << "const c_take_" << ord.id << " " << r(spec.battery->take_rate) << "\nconst c_deliver_" << ord.id << " "
        << r(spec.battery->deliver_rate) << "\n";
  o << "fluent free bool true\n";
  if (spec.battery) o << "fluent battery numeric " << r(spec.battery->capacity) << "\n";
  for (const auto& ord : spec.orders)
    o << "fluent held_" << ord.id << " bool false\nfluent step_" << ord.id << " numeric 0\nfluent delivered_" << ord.id
      << " bool false\n";
  auto drain = [&](const std::string& what, const std::string& id) {
    if (!spec.battery) return;
    std::string use = r(spec.battery->factor) + "*c_" + what + "_" + id;
    o << "  at-end condition battery >= " << use << "\n  at-end effect battery := battery - " << use << "\n";
  };
  for (const auto& ord : spec.orders) {
    const std::string& id = ord.id;
    o << "action take_" << id << " duration " << r(spec.take) << "\n  at-start condition free\n"
      << "  at-start condition not delivered_" << id << "\n  at-start effect free := false\n";
    drain("take", id);
    o << "  at-end effect held_" << id << " := true\nend\n";
    for (std::size_t j = 0; j < ord.prep.size(); ++j)
      o << "action prep_" << id << "_" << j + 1 << " duration " << r(ord.prep[j]) << "\n  at-start condition held_"
        << id << "\n  at-start condition step_" << id << " = " << j << "\n  over-all condition held_" << id
        << "\n  at-end effect step_" << id << " := " << j + 1 << "\nend\n";
    o << "action deliver_" << id << " duration " << r(spec.deliver) << "\n  at-start condition held_" << id
      << "\n  at-start condition step_" << id << " = " << ord.prep.size() << "\n";
    drain("deliver", id);
    o << "  at-end effect held_" << id << " := false\n  at-end effect delivered_" << id
      << " := true\n  at-end effect free := true\nend\n";
    o << "action dispose_" << id << " duration " << r(spec.dispose) << "\n  at-start condition held_" << id
      << "\n  at-end effect held_" << id << " := false\n  at-end effect step_" << id
      << " := 0\n  at-end effect free := true\nend\n";
  }
  for (const auto& ord : spec.orders) o << "goal delivered_" << ord.id << " deadline " << r(ord.deadline) << "\n";
  return o.str();
}

DeliveryInstance make_delivery(const DeliverySpec& spec) {
  DeliveryInstance out;
  out.problem = model::parse_problem(delivery_problem_text(spec));
  auto plan = naive_delivery_replan(out.problem);
  if (!plan) throw InconsistentPlan("the nominal delivery plan misses a deadline");
  out.plan = *plan;
  for (const auto& ord : spec.orders) {
    if (spec.rate_parameters) {
      for (const char* what : {"take_", "deliver_"}) {
        model::Directive d;
        d.kind = model::Directive::Kind::Rate;
        d.action = what + ord.id;
        d.fluent = "battery";
        out.directives.push_back(d);
      }
    } else {
      for (std::size_t j = 0; j < ord.prep.size(); ++j) {
        model::Directive d;
        d.action = "prep_" + ord.id + "_" + std::to_string(j + 1);
        out.directives.push_back(d);
      }
    }
  }
  return out;
}

std::optional<TimeTriggeredPlan> naive_delivery_replan(const ParametrizedProblem& current) {
  auto values = current.constant_values();
  for (const auto& f : current.fluents) values[f.name] = f.initial.evaluate(values);
  auto holds = [&](const std::string& f) { return values.count(f) && values.at(f) != 0; };

  struct Pending {
    std::string id;
    std::optional<Rational> deadline;
  };
  std::vector<std::string> held;
  std::vector<Pending> pending;
  for (const auto& f : current.fluents) {
    if (f.name.rfind("delivered_", 0) != 0) continue;
    std::string id = f.name.substr(10);
    if (holds("held_" + id)) held.push_back(id);
    if (holds(f.name)) continue;
    Pending p{id, std::nullopt};
    for (const auto& g : current.goals)
      if (g.condition.lhs.mentions(f.name) && g.deadline) p.deadline = p.deadline ? std::min(*p.deadline, *g.deadline) : *g.deadline;
    pending.push_back(p);
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.deadline && b.deadline) return *a.deadline < *b.deadline;
    return a.deadline.has_value() && !b.deadline;
  });

  TimeTriggeredPlan plan;
  Rational t = 0;
  auto add = [&](const std::string& name) {
    const auto* a = current.find_action(name);
    if (!a || !a->duration) throw ConfigError("delivery replanner needs a fixed-duration action '" + name + "'");
    plan.push_back({t, name, *a->duration});
    t += *a->duration + current.epsilon;
  };
  for (const auto& id : held) add("dispose_" + id);
  for (const auto& p : pending) {
    add("take_" + p.id);
    for (int j = 1; current.find_action("prep_" + p.id + "_" + std::to_string(j)); ++j)
      add("prep_" + p.id + "_" + std::to_string(j));
    add("deliver_" + p.id);
  }

  try {
    auto pair = model::parametrize(current, plan, {});
    if (!model::validate_concrete(pair.problem, pair.plan, {}, pair.schedule)) return std::nullopt;
  } catch (const InconsistentPlan&) {
    return std::nullopt;
  }
  return plan;
}

}  // namespace dre::dispatch
