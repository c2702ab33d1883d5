#pragma once

#include "dre/model/analysis.hpp"
#include "dre/model/stn.hpp"

#include <optional>
#include <random>

namespace sampling {

/// Uniform rational in [lo, hi] on a grid of `steps` intervals.
inline dre::Rational between(std::mt19937& rng, const dre::Rational& lo, const dre::Rational& hi, int steps = 64) {
  std::uniform_int_distribution<int> k(0, steps);
  return lo + (hi - lo) * dre::Rational(k(rng)) / steps;
}

/// A random schedule satisfying the plan's STN and order chain under v, built
/// by fixing timepoints one at a time inside their propagated windows.
inline std::optional<dre::model::Schedule> random_schedule(const dre::model::ParametrizedProblem& p,
                                                           const dre::model::ParametrizedSTNPlan& plan,
                                                           const dre::model::Valuation& v, std::mt19937& rng) {
  using namespace dre;
  using namespace dre::model;
  const std::size_t n = plan.timepoints.size();
  DistanceGraph g(n);
  Assignment values = p.constant_values();
  for (const auto& [k, x] : v) values[k] = x;
  for (const auto& c : plan.constraints)
    g.constrain(*plan.index_of(c.later), *plan.index_of(c.earlier), c.bound.evaluate(values));
  auto seq = happenings(p, plan);
  for (const auto& e : order_chain(p, seq)) g.constrain(seq[e.later].timepoint, seq[e.earlier].timepoint, e.bound);
  std::size_t origin = plan.plan_start();
  Schedule s;
  s[plan.timepoints[origin].name] = 0;
  if (!g.close()) return std::nullopt;
  for (std::size_t idx : plan.order) {
    if (idx == origin) continue;
    const auto& back = g.distance(idx, origin);
    const auto& fwd = g.distance(origin, idx);
    Rational lo = back ? Rational(-*back) : Rational(0);
    Rational hi = fwd ? *fwd : lo + 10;
    Rational t = between(rng, lo, hi);
    s[plan.timepoints[idx].name] = t;
    if (!g.tighten(idx, origin, t) || !g.tighten(origin, idx, -t)) return std::nullopt;
  }
  return s;
}

}  // namespace sampling
