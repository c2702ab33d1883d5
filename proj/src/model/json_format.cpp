#include "dre/core/error.hpp"
#include "dre/model/io.hpp"

namespace dre::model {

using nlohmann::json;

namespace {

Rational rat(const json& j, const char* field) {
  if (!j.is_string()) throw ParseError(std::string("field '") + field + "' must be a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw ParseError(std::string("field '") + field + "' is not a rational: " + j.get<std::string>());
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string text(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw ParseError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

json expr_to_json(const LinearExpression& e) {
  json terms = json::object();
  for (const auto& [s, c] : e.terms()) terms[s] = to_string(c);
  return {{"constant", to_string(e.constant())}, {"terms", terms}};
}

LinearExpression expr_from_json(const json& j) {
  LinearExpression e(rat(field(j, "constant"), "constant"));
  const json& terms = field(j, "terms");
  if (!terms.is_object()) throw ParseError("field 'terms' must be an object");
  for (const auto& [s, c] : terms.items()) e.add_term(s, rat(c, "terms"));
  return e;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::Less: return "<";
    case Relation::Eq: return "=";
  }
  return "";
}

json cond_to_json(const Condition& c) { return {{"lhs", expr_to_json(c.lhs)}, {"relation", relation_name(c.relation)}}; }

Condition cond_from_json(const json& j) {
  std::string r = text(j, "relation");
  Condition c;
  c.lhs = expr_from_json(field(j, "lhs"));
  if (r == "<=") c.relation = Relation::LessEq;
  else if (r == "<") c.relation = Relation::Less;
  else if (r == "=") c.relation = Relation::Eq;
  else throw ParseError("unknown relation '" + r + "'");
  return c;
}

json conds_to_json(const std::vector<Condition>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(cond_to_json(c));
  return out;
}

std::vector<Condition> conds_from_json(const json& j, const char* name) {
  std::vector<Condition> out;
  if (!j.contains(name)) return out;
  for (const auto& c : j.at(name)) out.push_back(cond_from_json(c));
  return out;
}

json effects_to_json(const std::vector<Effect>& es) {
  json out = json::array();
  for (const auto& e : es) out.push_back({{"fluent", e.fluent}, {"value", expr_to_json(e.value)}});
  return out;
}

std::vector<Effect> effects_from_json(const json& j, const char* name) {
  std::vector<Effect> out;
  if (!j.contains(name)) return out;
  for (const auto& e : j.at(name)) out.push_back({text(e, "fluent"), expr_from_json(field(e, "value"))});
  return out;
}

const char* kind_name(TimepointKind k) {
  switch (k) {
    case TimepointKind::PlanStart: return "plan-start";
    case TimepointKind::ActionStart: return "start";
    case TimepointKind::ActionEnd: return "end";
  }
  return "";
}

}  // namespace

json problem_to_json(const ParametrizedProblem& p) {
  json j;
  j["name"] = p.name;
  j["epsilon"] = to_string(p.epsilon);
  j["parameters"] = json::array();
  for (const auto& x : p.parameters)
    j["parameters"].push_back({{"name", x.name}, {"nominal", to_string(x.nominal)}, {"weight", to_string(x.weight)}});
  j["constants"] = json::array();
  for (const auto& k : p.constants) j["constants"].push_back({{"name", k.name}, {"value", to_string(k.value)}});
  j["fluents"] = json::array();
  for (const auto& f : p.fluents)
    j["fluents"].push_back({{"name", f.name},
                            {"type", f.kind == FluentKind::Boolean ? "bool" : "numeric"},
                            {"initial", expr_to_json(f.initial)}});
  j["actions"] = json::array();
  for (const auto& a : p.actions) {
    json ja = {{"name", a.name},
               {"at_start", conds_to_json(a.at_start)},
               {"over_all", conds_to_json(a.over_all)},
               {"at_end", conds_to_json(a.at_end)},
               {"start_effects", effects_to_json(a.start_effects)},
               {"end_effects", effects_to_json(a.end_effects)}};
    if (a.duration) ja["duration"] = to_string(*a.duration);
    j["actions"].push_back(ja);
  }
  j["goals"] = json::array();
  for (const auto& g : p.goals) {
    json jg = {{"condition", cond_to_json(g.condition)}};
    if (g.deadline) jg["deadline"] = to_string(*g.deadline);
    j["goals"].push_back(jg);
  }
  return j;
}

ParametrizedProblem problem_from_json(const json& j) {
  try {
    ParametrizedProblem p;
    p.name = text(j, "name");
    if (j.contains("epsilon")) p.epsilon = rat(j.at("epsilon"), "epsilon");
    for (const auto& x : j.value("parameters", json::array())) {
      Parameter param{text(x, "name"), rat(field(x, "nominal"), "nominal"), 1};
      if (x.contains("weight")) param.weight = rat(x.at("weight"), "weight");
      p.parameters.push_back(param);
    }
    for (const auto& k : j.value("constants", json::array()))
      p.constants.push_back({text(k, "name"), rat(field(k, "value"), "value")});
    for (const auto& f : j.value("fluents", json::array())) {
      std::string type = text(f, "type");
      if (type != "bool" && type != "numeric") throw ParseError("fluent type must be 'bool' or 'numeric'");
      p.fluents.push_back({text(f, "name"), type == "bool" ? FluentKind::Boolean : FluentKind::Numeric,
                           expr_from_json(field(f, "initial"))});
    }
    for (const auto& a : j.value("actions", json::array())) {
      DurativeAction act;
      act.name = text(a, "name");
      if (a.contains("duration")) act.duration = rat(a.at("duration"), "duration");
      act.at_start = conds_from_json(a, "at_start");
      act.over_all = conds_from_json(a, "over_all");
      act.at_end = conds_from_json(a, "at_end");
      act.start_effects = effects_from_json(a, "start_effects");
      act.end_effects = effects_from_json(a, "end_effects");
      p.actions.push_back(std::move(act));
    }
    for (const auto& g : j.value("goals", json::array())) {
      Goal goal{cond_from_json(field(g, "condition")), std::nullopt};
      if (g.contains("deadline")) goal.deadline = rat(g.at("deadline"), "deadline");
      p.goals.push_back(goal);
    }
    check_problem(p);
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed problem JSON: ") + e.what());
  }
}

json plan_to_json(const ParametrizedSTNPlan& plan) {
  json j;
  j["name"] = plan.name;
  j["timepoints"] = json::array();
  for (const auto& tp : plan.timepoints) {
    json jt = {{"name", tp.name}, {"kind", kind_name(tp.kind)}};
    if (tp.kind != TimepointKind::PlanStart) {
      jt["action"] = tp.action;
      jt["instance"] = tp.instance;
    }
    j["timepoints"].push_back(jt);
  }
  j["order"] = json::array();
  for (std::size_t i : plan.order) j["order"].push_back(plan.timepoints[i].name);
  j["constraints"] = json::array();
  for (const auto& k : plan.constraints)
    j["constraints"].push_back({{"later", k.later}, {"earlier", k.earlier}, {"bound", expr_to_json(k.bound)}});
  return j;
}

ParametrizedSTNPlan plan_from_json(const json& j, const ParametrizedProblem& problem) {
  try {
    ParametrizedSTNPlan plan;
    plan.name = text(j, "name");
    for (const auto& t : field(j, "timepoints")) {
      Timepoint tp;
      tp.name = text(t, "name");
      std::string kind = text(t, "kind");
      if (kind == "plan-start") {
        tp.kind = TimepointKind::PlanStart;
      } else if (kind == "start" || kind == "end") {
        tp.kind = kind == "start" ? TimepointKind::ActionStart : TimepointKind::ActionEnd;
        tp.action = text(t, "action");
        tp.instance = field(t, "instance").get<int>();
      } else {
        throw ParseError("unknown timepoint kind '" + kind + "'");
      }
      plan.timepoints.push_back(tp);
    }
    if (j.contains("order")) {
      for (const auto& n : j.at("order")) {
        auto idx = plan.index_of(n.get<std::string>());
        if (!idx) throw UndeclaredSymbol(n.get<std::string>());
        plan.order.push_back(*idx);
      }
    } else {
      for (std::size_t i = 0; i < plan.timepoints.size(); ++i) plan.order.push_back(i);
    }
    for (const auto& k : j.value("constraints", json::array()))
      plan.constraints.push_back({text(k, "later"), text(k, "earlier"), expr_from_json(field(k, "bound"))});
    check_plan(plan, problem);
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed plan JSON: ") + e.what());
  }
}

}  // namespace dre::model
