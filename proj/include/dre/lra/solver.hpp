#pragma once

#include "dre/lra/formula.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace dre::lra {

/// Budgets that make worst cases fail loudly with ResourceLimit.
struct Limits {
  std::size_t max_search_nodes = 2'000'000;
  std::size_t max_pivots = 50'000'000;
  std::size_t max_fm_atoms = 50'000;
  std::size_t max_cubes = 100'000;
};

struct SatResult {
  bool sat = false;
  std::optional<Assignment> model;  // total over free symbols of the query when sat
};

/// Negation normal form over atoms with relations {<=, <, =}; no Not nodes.
Formula to_nnf(const Formula& f);

/// Simultaneous substitution followed by atom renormalization and folding.
Formula substitute(const Formula& f, const std::map<std::string, LinearExpression>& bindings);

/// Exact truth value. Throws std::out_of_range on a missing binding.
bool evaluate(const Formula& f, const Assignment& model);

/// Exact decision: NNF, eager substitution of top-level equalities, then a
/// depth-first case split over disjunctions with an incremental bounded
/// simplex on delta-rationals for strict bounds.
SatResult is_sat(const Formula& f, const Limits& limits = {});
bool is_valid(const Formula& f, const Limits& limits = {});

/// Quantifier-free equivalent of exists(vars). f, by DNF expansion and
/// Fourier-Motzkin per cube. Equalities are substituted first; the remaining
/// variables are eliminated fewest-occurrences-first.
Formula eliminate_exists(const std::set<std::string>& vars, const Formula& f, const Limits& limits = {});

/// Drops conjuncts implied by the others (exact, one LP per conjunct).
std::vector<Atom> remove_redundant(std::vector<Atom> conjunction, const Limits& limits = {});

/// Decision-procedure interface so callers can swap the builtin engine for an
/// external SMT solver.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual SatResult check(const Formula& f) const = 0;
  bool valid(const Formula& f) const { return !check(!f).sat; }
};

class BuiltinSolver final : public Solver {
 public:
  explicit BuiltinSolver(Limits limits = {}) : limits_(limits) {}
  SatResult check(const Formula& f) const override { return is_sat(f, limits_); }
  const Limits& limits() const { return limits_; }

 private:
  Limits limits_;
};

}  // namespace dre::lra
