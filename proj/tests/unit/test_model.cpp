#include "doctest.h"

#include "dre/core/error.hpp"
#include "dre/model/analysis.hpp"
#include "dre/model/io.hpp"
#include "dre/model/parametrize.hpp"
#include "dre/model/stn.hpp"
#include "dre/model/validate.hpp"
#include "fixtures.hpp"

#include <random>

using namespace dre;
using namespace dre::model;

namespace {

ParametrizedProblem unit_problem() { return parse_problem(fixtures::text("unit/problem.txt")); }
ParametrizedSTNPlan unit_plan(const ParametrizedProblem& p) { return parse_plan(fixtures::text("unit/plan.txt"), p); }

Schedule times(std::initializer_list<std::pair<const char*, long>> xs) {
  Schedule s;
  for (const auto& [k, v] : xs) s[k] = v;
  return s;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("unit problem parses with one parameter") {
  auto p = unit_problem();
  CHECK(p.name == "unit");
  CHECK(p.epsilon == Rational(1) / 1000);
  REQUIRE(p.parameters.size() == 1);
  CHECK(p.parameters[0].name == "g");
  CHECK(p.parameters[0].nominal == 10);
  CHECK(p.parameters[0].weight == 1);
  REQUIRE(p.actions.size() == 1);
  CHECK(p.actions[0].end_effects.size() == 1);
  REQUIRE(p.goals.size() == 1);
  CHECK(p.goals[0].deadline == Rational(20));
  CHECK(p.goals[0].condition.holds({{"done", 1}}));
  CHECK_FALSE(p.goals[0].condition.holds({{"done", 0}}));
}

TEST_CASE("problem errors") {
  std::string ok = fixtures::text("unit/problem.txt");
  CHECK_THROWS_AS(parse_problem(replace(ok, "goal done", "goal finished")), UndeclaredSymbol);
  try {
    parse_problem(replace(ok, "epsilon 1/1000", "epsilon 0"));
    FAIL("accepted epsilon 0");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
    CHECK(e.line() == 3);
  }
  try {
    parse_problem("problem p\nfluent x numeric 0\ngoal x >= 1 +\n");
    FAIL("accepted dangling operator");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_problem("problem p\nfluent x numeric 0\nfluent x numeric 1\n"), ParseError);
  CHECK_THROWS_AS(parse_problem("problem p\nfluent x numeric y\n"), UndeclaredSymbol);
  CHECK_THROWS_AS(parse_problem("problem p\nfluent x numeric 0\naction a\n  at-end effect x := 1\n"), ParseError);
  CHECK_THROWS_AS(
      parse_problem("problem p\nfluent x numeric 0\naction a\n  at-end effect x := 1\n  at-end effect x := 2\nend\n"),
      ParseError);
  CHECK_THROWS_AS(parse_problem("problem p\nparam g nominal -1\n"), ParseError);
  CHECK_THROWS_AS(parse_problem("fluent x numeric 0\n"), ParseError);
}

TEST_CASE("boolean sugar and comparison normalization") {
  auto p = parse_problem(
      "problem p\nfluent f bool false\nfluent x numeric 3\n"
      "goal f\ngoal not f\ngoal x > 2\ngoal 2*x = 6\n");
  REQUIRE(p.goals.size() == 4);
  Assignment s{{"f", 1}, {"x", 3}};
  CHECK(p.goals[0].condition.holds(s));
  CHECK_FALSE(p.goals[1].condition.holds(s));
  CHECK(p.goals[2].condition.holds(s));
  CHECK(p.goals[3].condition.holds(s));
  CHECK(p.goals[2].condition.relation == Relation::Less);
  CHECK(p.fluents[0].initial == LinearExpression(0));
}

TEST_CASE("unit plan parses and has the expected nominal schedule") {
  auto p = unit_problem();
  auto plan = unit_plan(p);
  CHECK(plan.timepoints.size() == 3);
  CHECK(plan.constraints.size() == 5);
  auto s = earliest_schedule(p, plan, p.nominal_valuation());
  REQUIRE(s);
  CHECK(*s == times({{"t0", 0}, {"t1", 0}, {"t2", 10}}));
  CHECK(validate_concrete(p, plan, p.nominal_valuation(), *s));
}

TEST_CASE("plan errors") {
  auto p = unit_problem();
  std::string ok = fixtures::text("unit/plan.txt");
  CHECK_THROWS_AS(parse_plan(ok + "constraint t2 - t0 <= 5\n", p), InconsistentPlan);
  CHECK_THROWS_AS(parse_plan(replace(replace(ok, "timepoint t2 end work 1\n", ""), "order t0 t1 t2", "order t0 t1"), p),
                  ParseError);
  CHECK_THROWS_AS(parse_plan(replace(ok, "start work 1", "start rest 1"), p), UndeclaredSymbol);
  CHECK_THROWS_AS(parse_plan(replace(ok, "<= g", "<= h"), p), UndeclaredSymbol);
  CHECK_THROWS_AS(parse_plan(replace(ok, "order t0 t1 t2", "order t1 t0 t2"), p), ParseError);
  CHECK_THROWS_AS(parse_plan(replace(ok, "order t0 t1 t2", "order t0 t2 t1"), p), ParseError);
  CHECK_THROWS_AS(parse_plan(replace(ok, "order t0 t1 t2", "order t0 t1"), p), ParseError);
}

TEST_CASE("validate_concrete on the unit fixture") {
  auto p = unit_problem();
  auto plan = unit_plan(p);
  CHECK(validate_concrete(p, plan, {{"g", 10}}, times({{"t0", 0}, {"t1", 0}, {"t2", 10}})));
  auto late = explain_concrete(p, plan, {{"g", 25}}, times({{"t0", 0}, {"t1", 0}, {"t2", 25}}));
  CHECK_FALSE(late.valid);
  CHECK_FALSE(validate_concrete(p, plan, {{"g", 10}}, times({{"t0", 0}, {"t1", 0}, {"t2", 9}})));
  CHECK_FALSE(validate_concrete(p, plan, {{"g", 10}}, times({{"t0", 1}, {"t1", 1}, {"t2", 11}})));
  CHECK_FALSE(validate_concrete(p, plan, {{"g", 10}}, times({{"t0", 0}, {"t1", 0}})));
  CHECK_FALSE(validate_concrete(p, plan, {}, times({{"t0", 0}, {"t1", 0}, {"t2", 10}})));
}

TEST_CASE("deadline is checked on the achieving happening") {
  // Without the STN deadline constraint only the goal deadline catches lateness.
  auto p = unit_problem();
  std::string text = replace(fixtures::text("unit/plan.txt"), "constraint t2 - t0 <= 20\n", "");
  auto plan = parse_plan(text, p);
  CHECK(validate_concrete(p, plan, {{"g", 20}}, times({{"t0", 0}, {"t1", 0}, {"t2", 20}})));
  auto r = explain_concrete(p, plan, {{"g", 21}}, times({{"t0", 0}, {"t1", 0}, {"t2", 21}}));
  CHECK_FALSE(r.valid);
  CHECK(r.reason.find("deadline") != std::string::npos);
}

TEST_CASE("parametrize reproduces the hand-built unit fixture") {
  auto pair = fixtures::load("unit");
  auto p = unit_problem();
  CHECK(pair.problem == p);
  CHECK(pair.plan == unit_plan(p));
  CHECK(pair.schedule == times({{"t0", 0}, {"t1", 0}, {"t2", 10}}));
}

TEST_CASE("parametrize with no directives keeps constants") {
  auto base = parse_problem(fixtures::text("unit/base.txt"));
  auto tt = parse_time_triggered_plan(fixtures::text("unit/plan.tt"));
  auto pair = parametrize(base, tt, {});
  CHECK(pair.problem == base);
  for (const auto& c : pair.plan.constraints) CHECK(c.bound.is_constant());
  CHECK(validate_concrete(pair.problem, pair.plan, {}, pair.schedule));
}

TEST_CASE("twoact parametrization") {
  auto pair = fixtures::load("twoact");
  const auto& plan = pair.plan;
  REQUIRE(plan.timepoints.size() == 5);
  CHECK(plan.timepoints[2].kind == TimepointKind::ActionEnd);
  CHECK(plan.timepoints[2].action == "a1");
  CHECK(plan.timepoints[3].action == "a2");
  CHECK(pair.problem.parameters.size() == 2);
  CHECK(pair.schedule.at("t3") == parse_rational("5.001"));
  StnConstraint gap{"t3", "t2", parse_rational("0.001")};
  StnConstraint deadline{"t4", "t0", 20};
  CHECK(std::find(plan.constraints.begin(), plan.constraints.end(), gap) != plan.constraints.end());
  CHECK(std::find(plan.constraints.begin(), plan.constraints.end(), deadline) != plan.constraints.end());
  auto seq = happenings(pair.problem, plan);
  CHECK(interfere(pair.problem, seq[1], seq[2]));  // a1 reads res, then writes it
  CHECK(interfere(pair.problem, seq[2], seq[3]));  // both write res
  CHECK_FALSE(interfere(pair.problem, seq[3], seq[4]));
  CHECK_FALSE(interfere(pair.problem, seq[0], seq[1]));
}

TEST_CASE("rate directive replaces the constant across the action") {
  auto base = parse_problem(
      "problem b\nconst c 2\nconst k 7\nfluent battery numeric 100\nfluent done bool false\n"
      "action go duration 5\n  at-end condition battery >= 5*c\n  at-end effect battery := battery - 5*c\n"
      "  at-end effect done := true\nend\n"
      "action other\n  at-end effect battery := battery - c\nend\n"
      "goal done\n");
  auto tt = parse_time_triggered_plan("0: (go) [5]\n");
  auto pair = parametrize(base, tt, {parse_directive("rate go battery weight 2")});
  const auto* r = pair.problem.find_parameter("r_go_battery");
  REQUIRE(r);
  CHECK(r->nominal == 2);
  CHECK(r->weight == 2);
  const auto* go = pair.problem.find_action("go");
  CHECK(go->end_effects[0].value == LinearExpression::symbol("battery") - LinearExpression::symbol("r_go_battery") * 5);
  CHECK(go->at_end[0].lhs.mentions("r_go_battery"));
  CHECK(pair.problem.find_action("other")->end_effects[0].value.mentions("c"));
  CHECK(validate_concrete(pair.problem, pair.plan, pair.problem.nominal_valuation(), pair.schedule));
  CHECK_FALSE(validate_concrete(pair.problem, pair.plan, {{"r_go_battery", 21}}, pair.schedule));

  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("rate go done")}), ConfigError);
  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("rate fly battery")}), ConfigError);
  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("rate go battery"), parse_directive("rate go battery")}),
                  ConfigError);
}

TEST_CASE("duration directive errors and naming") {
  auto base = parse_problem(fixtures::text("unit/base.txt"));
  auto tt = parse_time_triggered_plan("0: (work) [10]\n10.5: (work) [4]\n");
  auto pair = parametrize(base, tt, {parse_directive("duration work")});
  CHECK(pair.problem.find_parameter("d_work_1"));
  CHECK(pair.problem.find_parameter("d_work_2")->nominal == 4);
  auto one = parametrize(base, tt, {parse_directive("duration work#2 as late")});
  CHECK(one.problem.parameters.size() == 1);
  CHECK(one.problem.parameters[0].name == "late");
  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("duration rest")}), ConfigError);
  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("duration work#3")}), ConfigError);
  CHECK_THROWS_AS(parametrize(base, tt, {parse_directive("duration work"), parse_directive("duration work#1")}),
                  ConfigError);
  CHECK_THROWS_AS(parametrize(base, parse_time_triggered_plan("0: (work) [10]\n"), {parse_directive("duration work as done")}),
                  ConfigError);
  CHECK_THROWS_AS(parse_directive("speed work"), ParseError);
  CHECK_THROWS_AS(parametrize(base, parse_time_triggered_plan("0: (rest) [1]\n"), {}), UndeclaredSymbol);
}

TEST_CASE("time-triggered plan format") {
  auto tt = parse_time_triggered_plan("; comment\n0.000: (a) [10.000]\n5.25: (b) [1/3]\n");
  REQUIRE(tt.size() == 2);
  CHECK(tt[1].start == parse_rational("21/4"));
  CHECK(tt[1].duration == Rational(1) / 3);
  CHECK(parse_time_triggered_plan(print_time_triggered_plan(tt)) == tt);
  CHECK(print_time_triggered_plan({{0, "a", 10}}) == "0.000: (a) [10.000]\n");
  CHECK_THROWS_AS(parse_time_triggered_plan("0: a [1]\n"), ParseError);
}

TEST_CASE("fixtures round-trip through text and JSON") {
  for (const auto& dir : fixtures::all()) {
    CAPTURE(dir);
    auto pair = fixtures::load(dir);
    CHECK(parse_problem(print_problem(pair.problem)) == pair.problem);
    CHECK(parse_plan(print_plan(pair.plan), pair.problem) == pair.plan);
    auto pj = problem_to_json(pair.problem);
    CHECK(problem_from_json(nlohmann::json::parse(pj.dump())) == pair.problem);
    CHECK(plan_from_json(plan_to_json(pair.plan), pair.problem) == pair.plan);
  }
}

TEST_CASE("nominal plans validate and agree with the unparametrized original") {
  for (const auto& dir : fixtures::all()) {
    CAPTURE(dir);
    auto pair = fixtures::load(dir);
    auto v = pair.problem.nominal_valuation();
    auto s = earliest_schedule(pair.problem, pair.plan, v);
    REQUIRE(s);
    CHECK(validate_concrete(pair.problem, pair.plan, v, *s));
    CHECK(validate_concrete(pair.problem, pair.plan, v, pair.schedule));

    auto base = parse_problem(fixtures::text(dir + "/base.txt"));
    auto tt = parse_time_triggered_plan(fixtures::text(dir + "/plan.tt"));
    auto plain = parametrize(base, tt, {});
    CHECK(validate_concrete(plain.problem, plain.plan, {}, plain.schedule));

    // Perturbed concrete plans: both views must give the same verdict.
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      auto shaken = tt;
      std::uniform_int_distribution<int> pick(0, static_cast<int>(tt.size()) - 1), delta(-3, 12);
      shaken[pick(rng)].duration += delta(rng);
      if (shaken.back().duration < 0) continue;
      bool ok = true;
      for (const auto& a : shaken) ok = ok && a.duration >= 0;
      if (!ok) continue;
      ParametrizedPair a, b;
      try {
        a = parametrize(base, shaken, {});
        b = parametrize(base, shaken, parse_directives(fixtures::text(dir + "/directives.txt")));
      } catch (const InconsistentPlan&) {
        continue;
      }
      CHECK(validate_concrete(a.problem, a.plan, {}, a.schedule) ==
            validate_concrete(b.problem, b.plan, b.problem.nominal_valuation(), b.schedule));
    }
  }
}

TEST_CASE("incremental tightening matches full closure") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> node(0, 5), weight(-4, 12);
  for (int trial = 0; trial < 300; ++trial) {
    DistanceGraph full(6), inc(6);
    std::vector<std::tuple<int, int, int>> edges;
    for (int k = 0; k < 8; ++k) edges.emplace_back(node(rng), node(rng), weight(rng));
    for (auto [a, b, w] : edges) full.constrain(a, b, w);
    bool consistent = full.close();
    REQUIRE(inc.close());
    bool ok = true;
    for (auto [a, b, w] : edges) ok = ok && inc.tighten(a, b, w);
    CHECK(ok == consistent);
    if (!consistent) continue;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) CHECK(full.distance(i, j) == inc.distance(i, j));
  }
}
