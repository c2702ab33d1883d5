// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "dre/dispatch/campaign.hpp"
#include "dre/encoder/encoder.hpp"
#include "dre/irr/irr.hpp"
#include "dre/lra/solver.hpp"
#include "dre/model/io.hpp"
#include "dre/model/parametrize.hpp"
#include "dre/model/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace dre;

namespace {

// Pinned tolerances and sizes.
constexpr int kSamplesPerRectangle = 100;
constexpr int kQeFormulas = 500;
constexpr int kGridPoints = 21;             // per axis, -5 .. 5 step 1/2
constexpr double kBaselineFloor = 5.0;      // criterion 5, percent
constexpr double kMaxDreReplans = 0.5;      // criterion 5
constexpr double kBatteryCoverage = 95.0;   // criterion 6, percent
constexpr double kConvergedPercent = 100.0; // criterion 4, end of every sequence
constexpr std::size_t kSoftStep = 50;       // criterion 4 soft metric
const Rational kBeta{1};

std::string data(const std::string& rel) { return std::string(DRE_DATA_DIR) + "/" + rel; }

struct Fixture {
  std::string dir;
  model::ParametrizedPair pair;
  enc::PlanEncoding enc;
  irr::IrrResult result;
  std::vector<irr::Snapshot> snapshots;
};

Fixture run_fixture(const std::string& dir) {
  auto base = model::parse_problem(model::read_file(data(dir + "/base.txt")));
  auto tt = model::parse_time_triggered_plan(model::read_file(data(dir + "/plan.tt")));
  auto directives = model::parse_directives(model::read_file(data(dir + "/directives.txt")));
  Fixture f{dir, model::parametrize(base, tt, directives), {}, {}, {}};
  f.enc = enc::encode(f.pair.problem, f.pair.plan);
  irr::IrrOptions options;
  options.beta = kBeta;
  options.sink = [&f](const irr::Snapshot& s) { f.snapshots.push_back(s); };
  f.result = irr::run_irr(f.pair.problem, f.enc, options);
  return f;
}

Rational uniform(std::mt19937& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<int> k(0, 1 << 12);
  return lo + (hi - lo) * Rational(k(rng)) / (1 << 12);
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& body) {
  auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("criterion %d %s: %s (%s; %.1f s)\n", id, v.pass ? "PASS" : "FAIL", title.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

Verdict soundness(const std::vector<Fixture*>& fixtures) {
  std::mt19937 rng(2024);
  std::size_t rectangles = 0, samples = 0, bad = 0;
  for (const Fixture* f : fixtures) {
    const auto sat_part = f->enc.tn && f->enc.eff;
    for (const auto& s : f->snapshots) {
      if (s.event != irr::Event::Accepted) continue;
      ++rectangles;
      for (int k = 0; k < kSamplesPerRectangle; ++k, ++samples) {
        model::Valuation v;
        std::map<std::string, LinearExpression> bind;
        for (std::size_t i = 0; i < s.region.size(); ++i) {
          const auto& name = s.region.names()[i];
          v[name] = uniform(rng, s.region[i].lower, s.region[i].upper);
          bind[name] = LinearExpression(v[name]);
        }
        auto witness = lra::is_sat(lra::substitute(sat_part, bind));
        if (!witness.sat ||
            !model::validate_concrete(f->pair.problem, f->pair.plan, v,
                                      enc::schedule_from_model(f->pair.plan, *witness.model)))
          ++bad;
      }
    }
  }
  std::ostringstream os;
  os << rectangles << " accepted rectangles, " << samples << " valuations, " << bad << " rejected";
  return {bad == 0 && rectangles > 0, os.str()};
}

Verdict maximality(const std::vector<Fixture*>& fixtures) {
  lra::BuiltinSolver solver;
  std::size_t extensions = 0, contained = 0;
  for (const Fixture* f : fixtures) {
    const auto& r = f->result.region;
    for (std::size_t i = 0; i < r.size(); ++i) {
      irr::Dre up = r;
      up[i].upper += 2 * kBeta;
      ++extensions;
      if (irr::check_in_envelope(up, f->enc, solver)) ++contained;
      if (r[i].lower == 0) continue;  // blocked by the zero clamp
      irr::Dre down = r;
      down[i].lower = std::max(Rational(0), Rational(r[i].lower - 2 * kBeta));
      ++extensions;
      if (irr::check_in_envelope(down, f->enc, solver)) ++contained;
    }
  }
  std::ostringstream os;
  os << extensions << " single-bound extensions, " << contained << " still contained";
  return {contained == 0 && extensions > 0, os.str()};
}

// Random conjunction over eliminated x0..x2 and free y0..y1.
struct QeGenerator {
  std::mt19937 rng{17};

  lra::Formula formula(int eliminated, int free) {
    std::uniform_int_distribution<int> atoms(1, 10), coef(-5, 5), constant(-10, 10), rel(0, 9);
    std::vector<lra::Formula> parts;
    int n = atoms(rng);
    for (int a = 0; a < n; ++a) {
      LinearExpression e{Rational(constant(rng))};
      for (int x = 0; x < eliminated; ++x) e.add_term("x" + std::to_string(x), Rational(coef(rng)));
      for (int y = 0; y < free; ++y) e.add_term("y" + std::to_string(y), Rational(coef(rng)));
      int r = rel(rng);
      parts.push_back(lra::Atom(e, r < 6 ? lra::Relation::LessEq : r < 9 ? lra::Relation::Less : lra::Relation::Eq));
    }
    return lra::Formula::conjunction(parts);
  }
};

Verdict quantifier_elimination() {
  QeGenerator gen;
  std::uniform_int_distribution<int> elim(1, 3), fr(1, 2);
  std::size_t points = 0, inside = 0, sat_side = 0, unsat_side = 0, mixed = 0;
  for (int k = 0; k < kQeFormulas; ++k) {
    int e = elim(gen.rng), fcount = fr(gen.rng);
    auto f = gen.formula(e, fcount);
    std::set<std::string> vars;
    for (int x = 0; x < e; ++x) vars.insert("x" + std::to_string(x));
    auto projected = lra::eliminate_exists(vars, f);
    bool seen_in = false, seen_out = false;
    int ny = fcount == 2 ? kGridPoints : 1;
    for (int i = 0; i < kGridPoints; ++i) {
      for (int j = 0; j < ny; ++j) {
        std::map<std::string, LinearExpression> bind{{"y0", LinearExpression(Rational(i - 10, 2))}};
        Assignment point{{"y0", Rational(i - 10, 2)}};
        if (fcount == 2) {
          bind["y1"] = LinearExpression(Rational(j - 10, 2));
          point["y1"] = Rational(j - 10, 2);
        }
        bool in = lra::evaluate(projected, point);
        bool extends = lra::is_sat(lra::substitute(f, bind)).sat;
        ++points;
        if (in) {
          ++inside;
          seen_in = true;
          if (!extends) ++sat_side;
        } else {
          seen_out = true;
          if (extends) ++unsat_side;
        }
      }
    }
    if (seen_in && seen_out) ++mixed;
  }
  std::ostringstream os;
  os << kQeFormulas << " formulas (" << mixed << " with both outcomes on the grid), " << points << " grid points, "
     << inside << " inside; disagreements: " << sat_side << " sat side, " << unsat_side << " unsat side";
  return {sat_side == 0 && unsat_side == 0, os.str()};
}

Verdict convergence_shape(const std::vector<Fixture*>& fixtures, std::string& soft) {
  bool ok = true;
  std::ostringstream os, sm;
  std::size_t above = 0;
  for (const Fixture* f : fixtures) {
    auto conv = irr::convergence(f->snapshots, f->result.region);
    bool monotone = true;
    for (std::size_t k = 1; k < conv.size(); ++k) monotone = monotone && conv[k].second >= conv[k - 1].second;
    bool ends = !conv.empty() && std::abs(conv.back().second - kConvergedPercent) < 1e-9;
    bool widened = f->result.first_widening_step && *f->result.first_widening_step <= f->result.steps;
    ok = ok && monotone && ends && widened && f->result.converged;
    os << f->dir << ": " << f->result.steps << " steps, first widening at "
       << (f->result.first_widening_step ? std::to_string(*f->result.first_widening_step) : "none")
       << (monotone && ends ? "" : ", bad sequence") << "; ";

    double at = 0;
    for (const auto& [step, pct] : conv)
      if (step <= kSoftStep) at = pct;
    if (at > 70.0) ++above;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.1f%%, ", f->dir.c_str(), at);
    sm << buf;
  }
  sm << above << "/" << fixtures.size() << " fixtures above 70%";
  soft = sm.str();
  std::string d = os.str();
  return {ok, d.substr(0, d.size() - 2)};
}

dispatch::CampaignResult campaign(const std::string& file) {
  auto cfg = dispatch::campaign_from_json(nlohmann::json::parse(model::read_file(data("campaigns/" + file))),
                                          data("campaigns"));
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  return dispatch::simulate_campaign(cfg, dispatch::named_replanner(cfg.replanner));
}

std::string coverages(const dispatch::CampaignResult& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.1f%%, ", row.policy.c_str(), row.coverage);
    os << buf;
  }
  return os.str();
}

Verdict duration_campaign() {
  auto r = campaign("delivery-duration.json");
  const auto& dre = r.row("delivery-s", "DREEx");
  const auto& bl60 = r.row("delivery-s", "Bl-60");
  const auto& bl0 = r.row("delivery-s", "Bl-0");
  bool ok = dre.coverage > bl60.coverage && bl60.coverage > bl0.coverage && bl0.coverage <= kBaselineFloor &&
            dre.avg_replans <= kMaxDreReplans && dre.guarantee_violations == 0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "DREEx avg replans %.2f, %zu episodes", dre.avg_replans, dre.episodes);
  return {ok, coverages(r) + buf};
}

Verdict battery_campaign() {
  auto r = campaign("delivery-battery.json");
  const auto& dre = r.row("delivery-s-battery", "DREEx");
  bool monotone = true;
  double previous = -1;
  for (const auto& row : r.rows) {
    if (row.policy == "DREEx") continue;
    monotone = monotone && row.coverage >= previous;
    previous = row.coverage;
  }
  bool ok = dre.coverage >= kBatteryCoverage && monotone && dre.guarantee_violations == 0;
  return {ok, coverages(r) + (monotone ? "baselines monotone" : "baselines not monotone")};
}

}  // namespace

int main() {
  std::vector<Fixture> fixtures;
  for (const char* dir : {"unit", "twoact", "delivery", "delivery-battery"}) fixtures.push_back(run_fixture(dir));
  std::vector<Fixture*> core, all;
  for (auto& f : fixtures) {
    all.push_back(&f);
    if (f.dir != "delivery-battery") core.push_back(&f);
  }

  report(1, "sampled valuations in every accepted rectangle validate", [&] { return soundness(core); });
  report(2, "every unblocked 2*beta extension fails the envelope check", [&] { return maximality(all); });
  report(3, "projection matches satisfiability on the grid", quantifier_elimination);
  std::string soft;
  report(4, "convergence nondecreasing, ends at 100%, first widening recorded",
         [&] { return convergence_shape(all, soft); });
  std::printf("criterion 4 soft metric (not asserted): coverage reached by step %zu: %s\n", kSoftStep, soft.c_str());
  report(5, "duration campaign: DREEx > Bl-60 > Bl-0, Bl-0 <= 5%, DREEx replans <= 0.5", duration_campaign);
  report(6, "battery campaign: DREEx >= 95%, baselines monotone in slack", battery_campaign);
  std::printf(
      "criterion 7 NOTE: large-benchmark timings and exact campaign percentages are not reproducible here; "
      "criteria 1-4 stand in for them\n");
  return failures == 0 ? 0 : 1;
}
