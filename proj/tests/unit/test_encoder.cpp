#include "doctest.h"

#include "dre/core/error.hpp"
#include "dre/encoder/encoder.hpp"
#include "dre/model/analysis.hpp"
#include "dre/model/io.hpp"
#include "dre/model/stn.hpp"
#include "dre/model/validate.hpp"
#include "fixtures.hpp"
#include "sampling.hpp"

#include <filesystem>

using namespace dre;
using namespace dre::enc;
using lra::Atom;
using lra::Formula;

namespace {

LinearExpression t(const char* tp) { return LinearExpression::symbol(time_var(tp)); }
LinearExpression s(std::size_t i, const char* f) { return LinearExpression::symbol(state_var(i, f)); }
LinearExpression sym(const char* n) { return LinearExpression::symbol(n); }

bool equivalent(const Formula& a, const Formula& b) {
  return lra::is_valid(Formula::implication(a, b)) && lra::is_valid(Formula::implication(b, a));
}

Formula le(const LinearExpression& a, const LinearExpression& b) { return Atom::less_eq(a, b); }
Formula eq(const LinearExpression& a, const LinearExpression& b) { return Atom::equal(a, b); }

const Rational kEps = Rational(1) / 1000;

}  // namespace

TEST_CASE("unit encodings") {
  auto pair = fixtures::load("unit");
  auto e = encode(pair.problem, pair.plan);
  Formula tn = Formula::conjunction({eq(t("t0"), 0), le(t("t1") - t("t0"), 0), le(t("t0") - t("t1"), 0),
                                     le(t("t2") - t("t1"), sym("g")), le(t("t1") - t("t2"), -sym("g")),
                                     le(t("t2") - t("t0"), 20), le(t("t0"), t("t1")), le(t("t1"), t("t2"))});
  CHECK(equivalent(e.tn, tn));
  CHECK(equivalent(e.eff, Formula::conjunction({eq(s(0, "done"), 0), eq(s(1, "done"), s(0, "done")),
                                                eq(s(2, "done"), 1)})));
  CHECK(equivalent(e.proofs, le(1, s(2, "done")) && le(t("t2"), 20)));
  CHECK(e.valid.free_symbols() == std::set<std::string>{"g"});
  CHECK(equivalent(e.valid, le(0, sym("g")) && le(sym("g"), 20)));
  CHECK(lra::evaluate(e.proofs, {{time_var("t2"), 10}, {state_var(2, "done"), 1}}));
}

TEST_CASE("twoact encodings") {
  auto pair = fixtures::load("twoact");
  auto e = encode(pair.problem, pair.plan);
  CHECK(lra::is_valid(Formula::implication(e.tn, le(t("t2") + kEps, t("t3")))));
  CHECK(lra::is_valid(Formula::implication(e.tn, le(t("t1") + kEps, t("t2")))));
  CHECK_FALSE(lra::is_valid(Formula::implication(e.tn, le(t("t3") + kEps, t("t4")))));
  Formula expected = Formula::conjunction(
      {le(kEps, sym("g1")), le(0, sym("g2")), le(sym("g1") + sym("g2"), Rational(20) - kEps)});
  CHECK(equivalent(e.valid, expected));
  // Over-all conditions land on every state inside each action.
  CHECK(lra::is_valid(Formula::implication(e.proofs, le(0, s(1, "res")))));
  CHECK(lra::is_valid(Formula::implication(e.proofs, le(0, s(3, "res")))));
  CHECK_FALSE(lra::is_valid(Formula::implication(e.proofs, le(0, s(4, "res")))));
}

TEST_CASE("battery effect uses the rate parameter") {
  auto pair = fixtures::load("delivery-battery");
  auto e = encode(pair.problem, pair.plan);
  auto seq = model::happenings(pair.problem, pair.plan);
  std::size_t k = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (seq[i].action && seq[i].action->name == "take_o1" && !seq[i].is_start) k = i;
  REQUIRE(k > 0);
  CHECK(lra::is_valid(Formula::implication(
      e.eff, eq(s(k, "battery"), s(k - 1, "battery") - sym("r_take_o1_battery") * 5))));
}

TEST_CASE("degenerate plans") {
  auto problem = model::parse_problem("problem p\nfluent x numeric 0\naction idle\nend\ngoal 0 <= 0 deadline 5\n");
  auto only_start = model::parse_plan("plan q\ntimepoint t0 plan-start\n", problem);
  CHECK(equivalent(encode_tn(problem, only_start), eq(t("t0"), 0)));
  CHECK(equivalent(encode_proofs(problem, only_start), le(t("t0"), 5)));

  auto idle = model::parse_plan(
      "plan q\ntimepoint t0 plan-start\ntimepoint a start idle 1\ntimepoint b end idle 1\n"
      "constraint b - a <= 3\nconstraint a - b <= -3\n",
      problem);
  Formula eff = encode_eff(problem, idle);
  CHECK(equivalent(eff, Formula::conjunction({eq(s(0, "x"), 0), eq(s(1, "x"), s(0, "x")), eq(s(2, "x"), s(1, "x"))})));
  // Trivially true goal: only the deadline remains.
  CHECK(equivalent(encode_proofs(problem, idle), le(t("t0"), 5)));
}

TEST_CASE("unschedulable plan has an empty valid region") {
  auto pair = fixtures::load("unit");
  auto plan = pair.plan;
  plan.constraints.push_back({"t1", "t2", -LinearExpression::symbol("g") - 1});
  auto e = encode(pair.problem, plan);
  CHECK_FALSE(lra::is_sat(e.valid).sat);
}

TEST_CASE("dump writes four SMT-LIB files") {
  auto pair = fixtures::load("unit");
  auto e = encode(pair.problem, pair.plan);
  auto dir = std::filesystem::temp_directory_path() / "dre-dump-test";
  std::filesystem::remove_all(dir);
  dump_encoding(e, dir.string());
  for (const char* f : {"tn.smt2", "eff.smt2", "proofs.smt2", "valid.smt2"}) {
    auto text = model::read_file((dir / f).string());
    CHECK(text.find("(set-logic LRA)") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle agreement, membership consistency and frame correctness on fixtures") {
  std::mt19937 rng(2024);
  for (const auto& dir : fixtures::all()) {
    CAPTURE(dir);
    auto pair = fixtures::load(dir);
    const auto& p = pair.problem;
    auto e = encode(p, pair.plan);
    CHECK(e.valid.free_symbols().size() <= p.parameters.size());
    for (const auto& s : e.valid.free_symbols()) CHECK(p.find_parameter(s));

    Formula system = e.tn && e.eff;
    int valid_points = 0, invalid_points = 0;
    for (int trial = 0; trial < 200; ++trial) {
      model::Valuation v;
      std::map<std::string, LinearExpression> bind;
      for (const auto& x : p.parameters) {
        Rational value = sampling::between(rng, 0, x.nominal * 3 + 2, 40);
        if (trial == 0) value = x.nominal;
        v[x.name] = value;
        bind[x.name] = LinearExpression(value);
      }
      bool stn = model::earliest_schedule(p, pair.plan, v).has_value();
      auto sat = lra::is_sat(lra::substitute(system, bind));
      CHECK(sat.sat == stn);
      CHECK(lra::evaluate(e.valid, v) == sat.sat);
      if (!sat.sat) continue;
      auto broken = lra::is_sat(lra::substitute(system && !e.proofs, bind));
      if (broken.sat) {
        ++invalid_points;
        CHECK_FALSE(model::validate_concrete(p, pair.plan, v, schedule_from_model(pair.plan, *broken.model)));
      } else {
        ++valid_points;
        CHECK(model::validate_concrete(p, pair.plan, v, schedule_from_model(pair.plan, *sat.model)));
        for (int k = 0; k < 5; ++k) {
          auto sched = sampling::random_schedule(p, pair.plan, v, rng);
          REQUIRE(sched);
          CHECK(model::validate_concrete(p, pair.plan, v, *sched));
        }
      }
    }
    CHECK(valid_points > 0);
    MESSAGE(dir << ": " << valid_points << " valid, " << invalid_points << " invalid sampled valuations");

    std::size_t last = pair.plan.order.size() - 1;
    std::set<std::string> written;
    for (const auto& a : p.actions)
      for (const auto* list : {&a.start_effects, &a.end_effects})
        for (const auto& x : *list) written.insert(x.fluent);
    for (const auto& f : p.fluents) {
      if (written.count(f.name)) continue;
      CHECK(lra::is_valid(Formula::implication(
          e.eff, eq(LinearExpression::symbol(state_var(last, f.name)), LinearExpression::symbol(state_var(0, f.name))))));
    }
  }
}
