#pragma once

#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <optional>
#include <vector>

namespace dre::model {

/// Distance graph of a simple temporal network. distance(i, j) is the
/// tightest upper bound on t_j - t_i, or nullopt when unbounded.
class DistanceGraph {
 public:
  explicit DistanceGraph(std::size_t n);

  std::size_t size() const { return n_; }

  /// t_later - t_earlier <= bound; keeps the tighter of repeated constraints.
  void constrain(std::size_t later, std::size_t earlier, const Rational& bound);

  /// All-pairs shortest paths. Returns false on a negative cycle.
  bool close();

  /// Adds a constraint to a closed graph and restores closure in O(n^2).
  /// Returns false when the network becomes inconsistent.
  bool tighten(std::size_t later, std::size_t earlier, const Rational& bound);

  const std::optional<Rational>& distance(std::size_t from, std::size_t to) const {
    return d_[from * n_ + to];
  }

 private:
  std::size_t n_;
  std::vector<std::optional<Rational>> d_;
};

/// Earliest schedule of the plan's STN plus the happening-order chain with the
/// plan start at 0, under valuation v. nullopt when inconsistent.
std::optional<Schedule> earliest_schedule(const ParametrizedProblem& problem, const ParametrizedSTNPlan& plan,
                                          const Valuation& v);

}  // namespace dre::model
