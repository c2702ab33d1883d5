#include "dre/model/stn.hpp"

#include "dre/model/analysis.hpp"

namespace dre::model {

DistanceGraph::DistanceGraph(std::size_t n) : n_(n), d_(n * n) {
  for (std::size_t i = 0; i < n; ++i) d_[i * n + i] = Rational(0);
}

void DistanceGraph::constrain(std::size_t later, std::size_t earlier, const Rational& bound) {
  auto& cell = d_[earlier * n_ + later];
  if (!cell || bound < *cell) cell = bound;
}

bool DistanceGraph::close() {
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& ik = d_[i * n_ + k];
      if (!ik) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        const auto& kj = d_[k * n_ + j];
        if (!kj) continue;
        Rational via = *ik + *kj;
        auto& ij = d_[i * n_ + j];
        if (!ij || via < *ij) ij = via;
      }
    }
  for (std::size_t i = 0; i < n_; ++i)
    if (*d_[i * n_ + i] < 0) return false;
  return true;
}

bool DistanceGraph::tighten(std::size_t later, std::size_t earlier, const Rational& bound) {
  const auto& current = d_[earlier * n_ + later];
  if (current && *current <= bound) return true;
  const auto& back = d_[later * n_ + earlier];
  if (back && *back + bound < 0) return false;
  // Snapshot the two columns/rows the update reads.
  std::vector<std::optional<Rational>> to_earlier(n_), from_later(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    to_earlier[i] = d_[i * n_ + earlier];
    from_later[i] = d_[later * n_ + i];
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!to_earlier[i]) continue;
    Rational head = *to_earlier[i] + bound;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!from_later[j]) continue;
      Rational via = head + *from_later[j];
      auto& ij = d_[i * n_ + j];
      if (!ij || via < *ij) ij = via;
    }
  }
  return true;
}

std::optional<Schedule> earliest_schedule(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan,
                                          const Valuation& v) {
  const std::size_t n = plan.timepoints.size();
  DistanceGraph g(n);
  Assignment values = problem.constant_values();
  for (const auto& [k, x] : v) values[k] = x;
  for (const auto& c : plan.constraints)
    g.constrain(*plan.index_of(c.later), *plan.index_of(c.earlier), c.bound.evaluate(values));
  auto seq = happenings(problem, plan);
  for (const auto& e : order_chain(problem, seq))
    g.constrain(seq[e.later].timepoint, seq[e.earlier].timepoint, e.bound);
  std::size_t origin = plan.plan_start();
  g.constrain(origin, origin, 0);
  if (!g.close()) return std::nullopt;
  Schedule s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& back = g.distance(i, origin);  // t_origin - t_i <= back
    s[plan.timepoints[i].name] = back ? Rational(-*back) : Rational(0);
  }
  return s;
}

}  // namespace dre::model
