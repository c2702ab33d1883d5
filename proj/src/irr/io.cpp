#include "dre/irr/io.hpp"

namespace dre::irr {

using nlohmann::json;

namespace {

Rational rat(const json& j) {
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception&) {
    throw ParseError("expected a \"p/q\" rational, got " + j.dump());
  }
}

}  // namespace

json dre_to_json(const model::ParametrizedProblem& problem, const IrrResult& result, const IrrOptions& options) {
  json params = json::array();
  for (std::size_t i = 0; i < result.region.size(); ++i) {
    const auto& name = result.region.names()[i];
    const auto* p = problem.find_parameter(name);
    params.push_back({{"name", name},
                      {"lower", to_string(result.region[i].lower)},
                      {"upper", to_string(result.region[i].upper)},
                      {"nominal", p ? to_string(p->nominal) : "0"}});
  }
  json omega = json::object();
  for (const auto& p : problem.parameters) {
    auto it = options.omega.find(p.name);
    omega[p.name] = to_string(it == options.omega.end() ? p.weight : it->second);
  }
  json run = {{"beta", to_string(options.beta)},
              {"omega", omega},
              {"steps", result.steps},
              {"first_widening_step", result.first_widening_step ? json(*result.first_widening_step) : json()},
              {"wallclock_ms", result.wallclock_ms},
              {"converged", result.converged},
              {"budget_exhausted", result.budget_exhausted},
              {"unconverged", result.unconverged}};
  return {{"problem", problem.name}, {"parameters", params}, {"run", run}};
}

Dre dre_from_json(const json& doc) {
  try {
    Dre r;
    for (const auto& p : doc.at("parameters"))
      r.add(p.at("name").get<std::string>(), {rat(p.at("lower")), rat(p.at("upper"))});
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed envelope document: ") + e.what());
  }
}

json snapshot_to_json(const Snapshot& s) {
  json params = json::array();
  for (std::size_t i = 0; i < s.region.size(); ++i) {
    json p = {{"name", s.region.names()[i]},
              {"lower", to_string(s.region[i].lower)},
              {"upper", to_string(s.region[i].upper)}};
    if (i < s.delta.size()) p["delta"] = to_string(s.delta[i]);
    params.push_back(p);
  }
  json j = {{"step", s.step}, {"event", event_name(s.event)}, {"wallclock_ms", s.wallclock_ms}, {"parameters", params}};
  if (s.parameter) j["parameter"] = s.region.names()[*s.parameter];
  if (s.direction) j["direction"] = *s.direction == Direction::Upper ? "UB" : "LB";
  if (s.event == Event::Done) j["converged"] = s.converged;
  return j;
}

Snapshot snapshot_from_json(const json& j) {
  try {
    Snapshot s;
    s.step = j.at("step").get<std::size_t>();
    std::string ev = j.at("event").get<std::string>();
    const Event all[] = {Event::Accepted, Event::Rejected, Event::Halved, Event::FirstWidening, Event::Done};
    bool known = false;
    for (Event e : all)
      if (ev == event_name(e)) {
        s.event = e;
        known = true;
      }
    if (!known) throw ParseError("unknown snapshot event '" + ev + "'");
    s.wallclock_ms = j.value("wallclock_ms", 0.0);
    for (const auto& p : j.at("parameters")) {
      s.region.add(p.at("name").get<std::string>(), {rat(p.at("lower")), rat(p.at("upper"))});
      if (p.contains("delta")) s.delta.push_back(rat(p.at("delta")));
    }
    if (j.contains("parameter")) {
      const auto& names = s.region.names();
      auto it = std::find(names.begin(), names.end(), j.at("parameter").get<std::string>());
      if (it != names.end()) s.parameter = static_cast<std::size_t>(it - names.begin());
    }
    if (j.contains("direction")) s.direction = j.at("direction") == "UB" ? Direction::Upper : Direction::Lower;
    s.converged = j.value("converged", false);
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed snapshot: ") + e.what());
  }
}

}  // namespace dre::irr
