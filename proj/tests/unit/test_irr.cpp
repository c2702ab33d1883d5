#include "doctest.h"

#include "dre/irr/io.hpp"
#include "dre/irr/irr.hpp"
#include "dre/model/io.hpp"
#include "dre/model/validate.hpp"
#include "fixtures.hpp"
#include "sampling.hpp"

using namespace dre;
using namespace dre::irr;

namespace {

const Rational kEps = Rational(1) / 1000;

std::string replace_all_for_test(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

Dre box(std::initializer_list<std::tuple<const char*, Rational, Rational>> xs) {
  Dre r;
  for (const auto& [n, l, u] : xs) r.add(n, {l, u});
  return r;
}

struct Run {
  model::ParametrizedPair pair;
  enc::PlanEncoding enc;
  IrrResult result;
  std::vector<Snapshot> snapshots;
};

Run run(const std::string& dir, IrrOptions options = {}) {
  Run r{fixtures::load(dir), {}, {}, {}};
  r.enc = enc::encode(r.pair.problem, r.pair.plan);
  options.sink = [&r](const Snapshot& s) { r.snapshots.push_back(s); };
  r.result = run_irr(r.pair.problem, r.enc, options);
  return r;
}

/// Throws ResourceLimit on every query after the first `allowed` ones.
class FlakySolver final : public lra::Solver {
 public:
  explicit FlakySolver(int allowed) : allowed_(allowed) {}
  lra::SatResult check(const lra::Formula& f) const override {
    if (calls_++ >= allowed_) throw ResourceLimit("budget");
    return lra::is_sat(f);
  }

 private:
  int allowed_;
  mutable int calls_ = 0;
};

}  // namespace

TEST_CASE("check_in_envelope on the unit fixture") {
  auto pair = fixtures::load("unit");
  auto e = enc::encode(pair.problem, pair.plan);
  lra::BuiltinSolver s;
  CHECK(check_in_envelope(box({{"g", 10, 10}}), e, s));
  CHECK(check_in_envelope(box({{"g", 0, Rational(20) - kEps}}), e, s));
  CHECK(check_in_envelope(box({{"g", 0, 20}}), e, s));
  CHECK_FALSE(check_in_envelope(box({{"g", 0, 21}}), e, s));
  CHECK_FALSE(check_in_envelope(box({{"g", 20, Rational(20) + kEps}}), e, s));
}

TEST_CASE("check_in_envelope catches proof failures the valid region cannot see") {
  auto pair = fixtures::load("delivery-battery");
  auto e = enc::encode(pair.problem, pair.plan);
  lra::BuiltinSolver s;
  Dre nominal = Dre::point(pair.problem.parameters);
  CHECK(check_in_envelope(nominal, e, s));
  Dre greedy = nominal;
  greedy[0].upper = 40;  // take of order 1 alone would drain the battery
  CHECK(lra::is_valid(lra::Formula::implication(greedy.formula(), e.valid)));
  CHECK_FALSE(check_in_envelope(greedy, e, s));
}

TEST_CASE("unit run matches the hand simulation") {
  auto r = run("unit");
  CHECK(r.result.converged);
  CHECK_FALSE(r.result.budget_exhausted);
  CHECK(r.result.region == box({{"g", 0, 20}}));
  CHECK(r.result.first_widening_step == 1u);
  // step 1: UB to 20; step 2: UB to 30 fails; step 3: LB to 0; then clamps and halvings.
  CHECK(r.result.steps == 10);
  CHECK(r.snapshots.front().event == Event::Accepted);
  CHECK(r.snapshots.front().region.is_point());
  CHECK(r.snapshots.back().event == Event::Done);
  CHECK(r.snapshots.back().converged);
  CHECK(convergence(r.snapshots, r.result.region).back().second == doctest::Approx(100.0));
}

TEST_CASE("budget of zero steps returns the nominal point") {
  IrrOptions o;
  o.max_steps = 0;
  auto r = run("twoact", o);
  CHECK(r.result.region == Dre::point(r.pair.problem.parameters));
  CHECK(r.result.budget_exhausted);
  CHECK_FALSE(r.result.converged);
  CHECK(r.result.steps == 0);
  CHECK_FALSE(r.result.first_widening_step);
}

TEST_CASE("pick strategies") {
  IrrState st;
  st.upper_open = {true, true, true};
  st.lower_open = {true, true, true};
  RoundRobin rr;
  st.last_picked = 0;
  CHECK(rr.pick_parameter({0, 1, 2}, st) == 1);
  st.last_picked = 2;
  CHECK(rr.pick_parameter({0, 1, 2}, st) == 0);
  CHECK(rr.pick_parameter({2}, st) == 2);
  st.last_picked = 1;
  CHECK(rr.pick_parameter({0, 2}, st) == 2);
  st.last_picked.reset();
  CHECK(rr.pick_parameter({1, 2}, st) == 1);
  CHECK(rr.pick_direction(0, st) == Direction::Upper);
  st.upper_open[0] = false;
  CHECK(rr.pick_direction(0, st) == Direction::Lower);
  FirstEligible fe;
  st.last_picked = 0;
  CHECK(fe.pick_parameter({0, 2}, st) == 0);
}

TEST_CASE("runs on all fixtures: soundness, monotone growth, termination, maximality, determinism") {
  std::mt19937 rng(99);
  lra::BuiltinSolver solver;
  for (const auto& dir : fixtures::all()) {
    CAPTURE(dir);
    auto r = run(dir);
    const auto& p = r.pair.problem;
    CHECK(r.result.converged);
    CHECK(r.result.unconverged.empty());
    CHECK(r.result.first_widening_step.has_value());

    Dre previous;
    bool first = true;
    for (const auto& s : r.snapshots) {
      if (s.event != Event::Accepted) continue;
      if (!first) CHECK(s.region.contains(previous));
      previous = s.region;
      first = false;
      for (std::size_t i = 0; i < s.region.size(); ++i) {
        CHECK(s.region[i].lower >= 0);
        CHECK(s.region[i].contains(p.parameters[i].nominal));
      }
      for (int k = 0; k < 20; ++k) {
        model::Valuation v;
        std::map<std::string, LinearExpression> bind;
        for (std::size_t i = 0; i < s.region.size(); ++i) {
          v[s.region.names()[i]] = sampling::between(rng, s.region[i].lower, s.region[i].upper);
          bind[s.region.names()[i]] = LinearExpression(v[s.region.names()[i]]);
        }
        auto witness = lra::is_sat(lra::substitute(r.enc.tn && r.enc.eff, bind));
        REQUIRE(witness.sat);
        CHECK(model::validate_concrete(p, r.pair.plan, v, enc::schedule_from_model(r.pair.plan, *witness.model)));
      }
    }
    CHECK(previous == r.result.region);

    // Every single-bound extension by 2*beta that the zero clamp does not block fails.
    for (std::size_t i = 0; i < r.result.region.size(); ++i) {
      Dre up = r.result.region;
      up[i].upper += 2;
      CHECK_FALSE(check_in_envelope(up, r.enc, solver));
      if (r.result.region[i].lower > 0) {
        Dre down = r.result.region;
        down[i].lower = std::max(Rational(0), Rational(down[i].lower - 2));
        CHECK_FALSE(check_in_envelope(down, r.enc, solver));
      }
    }

    auto again = run(dir);
    REQUIRE(again.snapshots.size() == r.snapshots.size());
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      CHECK(again.snapshots[k].step == r.snapshots[k].step);
      CHECK(again.snapshots[k].event == r.snapshots[k].event);
      CHECK(again.snapshots[k].region == r.snapshots[k].region);
      CHECK(again.snapshots[k].delta == r.snapshots[k].delta);
    }

    auto conv = convergence(r.snapshots, r.result.region);
    for (std::size_t k = 1; k < conv.size(); ++k) CHECK(conv[k].second >= conv[k - 1].second);
    CHECK(conv.back().second == doctest::Approx(100.0));
  }
}

TEST_CASE("convergence arithmetic") {
  std::vector<Snapshot> snaps;
  for (auto [step, w] : {std::pair{0, 0}, {1, 10}, {2, 20}}) {
    Snapshot s;
    s.step = step;
    s.region = box({{"g", 0, w}});
    snaps.push_back(s);
  }
  Snapshot rejected;
  rejected.event = Event::Rejected;
  rejected.region = box({{"g", 0, 50}});
  snaps.insert(snaps.begin() + 1, rejected);
  auto c = convergence(snaps, box({{"g", 0, 20}}));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::pair<std::size_t, double>{0, 0.0});
  CHECK(c[1].second == doctest::Approx(50.0));
  CHECK(c[2].second == doctest::Approx(100.0));
  auto flat = convergence({snaps[0]}, box({{"g", 0, 0}}));
  CHECK(flat[0].second == 100.0);
  CHECK_THROWS_AS(convergence(snaps, box({{"h", 0, 20}})), Error);
}

TEST_CASE("invalid nominal and configuration errors") {
  auto problem = model::parse_problem(
      replace_all_for_test(fixtures::text("unit/problem.txt"), "param g nominal 10", "param g nominal 25"));
  auto plan = model::parse_plan(
      "plan p\ntimepoint t0 plan-start\ntimepoint t1 start work 1\ntimepoint t2 end work 1\n"
      "constraint t2 - t1 <= g\nconstraint t1 - t2 <= -g\n",
      problem);
  auto e = enc::encode(problem, plan);
  CHECK_THROWS_AS(run_irr(problem, e, {}), InvalidNominal);

  auto pair = fixtures::load("unit");
  auto ue = enc::encode(pair.problem, pair.plan);
  IrrOptions bad;
  bad.omega["h"] = 1;
  CHECK_THROWS_AS(run_irr(pair.problem, ue, bad), ConfigError);
  IrrOptions zero;
  zero.beta = 0;
  CHECK_THROWS_AS(run_irr(pair.problem, ue, zero), ConfigError);
}

TEST_CASE("omega scales the first step") {
  IrrOptions o;
  o.omega["g"] = Rational(1) / 2;
  auto r = run("unit", o);
  REQUIRE(r.snapshots.size() > 1);
  CHECK(r.snapshots.front().delta[0] == 5);
  CHECK(r.result.region == box({{"g", 0, 20}}));
  IrrOptions tiny;
  tiny.omega["g"] = Rational(1) / 100;  // nominal * omega below beta: beta wins
  auto t = run("unit", tiny);
  CHECK(t.snapshots.front().delta[0] == 1);
}

TEST_CASE("resource limits reject candidates without breaking soundness") {
  auto pair = fixtures::load("unit");
  auto e = enc::encode(pair.problem, pair.plan);
  FlakySolver flaky(2);  // enough for the nominal check only
  IrrOptions o;
  o.solver = &flaky;
  auto r = run_irr(pair.problem, e, o);
  CHECK(r.converged);
  CHECK(r.resource_rejections > 0);
  CHECK(r.region == Dre::point(pair.problem.parameters));
}

TEST_CASE("an unbounded direction stops on the budget and is flagged") {
  auto problem = model::parse_problem(fixtures::text("unit/problem.txt") + "param spare nominal 3\n");
  auto plan = model::parse_plan(fixtures::text("unit/plan.txt"), problem);
  auto e = enc::encode(problem, plan);
  IrrOptions o;
  o.max_steps = 60;
  auto r = run_irr(problem, e, o);
  CHECK(r.budget_exhausted);
  CHECK_FALSE(r.converged);
  CHECK(r.unconverged == std::vector<std::string>{"spare"});
  CHECK(r.region.at("g") == Interval{0, 20});
  CHECK(r.region.at("spare").upper > 50);
}

TEST_CASE("documents round-trip") {
  auto r = run("twoact");
  IrrOptions o;
  auto doc = dre_to_json(r.pair.problem, r.result, o);
  CHECK(dre_from_json(nlohmann::json::parse(doc.dump())) == r.result.region);
  CHECK(doc["run"]["converged"] == true);
  CHECK(doc["run"]["beta"] == "1");
  CHECK(doc["parameters"][0]["nominal"] == "5");
  for (const auto& s : r.snapshots) {
    auto back = snapshot_from_json(nlohmann::json::parse(snapshot_to_json(s).dump()));
    CHECK(back.step == s.step);
    CHECK(back.event == s.event);
    CHECK(back.region == s.region);
    CHECK(back.delta == s.delta);
    CHECK(back.parameter == s.parameter);
    CHECK(back.direction == s.direction);
  }
  CHECK_THROWS_AS(snapshot_from_json(nlohmann::json::parse(R"({"step":0,"event":"odd","parameters":[]})")), ParseError);
}
