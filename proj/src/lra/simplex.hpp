#pragma once

// Incremental bounded simplex over delta-rationals (value + k*delta), used as
// the feasibility oracle for conjunctions of bounds on variables and on slack
// rows. Bounds can be asserted and retracted in stack order; retracting never
// invalidates the current assignment.

#include "dre/core/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dre::lra::detail {

struct DeltaRational {
  Rational value;
  Rational delta;

  friend bool operator==(const DeltaRational&, const DeltaRational&) = default;
  friend bool operator<(const DeltaRational& a, const DeltaRational& b) {
    return a.value < b.value || (a.value == b.value && a.delta < b.delta);
  }
  friend bool operator<=(const DeltaRational& a, const DeltaRational& b) { return !(b < a); }
  friend bool operator>(const DeltaRational& a, const DeltaRational& b) { return b < a; }
  DeltaRational& operator+=(const DeltaRational& o) {
    value += o.value;
    delta += o.delta;
    return *this;
  }
  friend DeltaRational operator-(const DeltaRational& a, const DeltaRational& b) {
    return {a.value - b.value, a.delta - b.delta};
  }
  friend DeltaRational operator*(const DeltaRational& a, const Rational& k) {
    return {a.value * k, a.delta * k};
  }
};

class Simplex {
 public:
  using Form = std::vector<std::pair<int, Rational>>;

  explicit Simplex(int num_vars);

  /// Adds slack s = form (over original variables) and returns its index.
  /// All rows must be added before the first bound assertion.
  int add_row(const Form& form);
  int num_vars() const { return static_cast<int>(value_.size()); }

  /// False when the new bound contradicts the opposite one.
  bool assert_upper(int var, const DeltaRational& bound);
  bool assert_lower(int var, const DeltaRational& bound);

  std::size_t mark() const { return trail_.size(); }
  void backtrack(std::size_t mark);

  /// Restores feasibility of the basic variables; false when infeasible.
  /// `pivot_budget` is decremented per pivot; ResourceLimit at zero.
  bool check(std::size_t& pivot_budget);

  /// Concrete rational values for all variables (delta instantiated).
  std::vector<Rational> concrete_values() const;

 private:
  struct TrailEntry {
    int var;
    bool upper;
    std::optional<DeltaRational> previous;
  };

  void update(int var, const DeltaRational& v);
  void pivot_and_update(int basic, int nonbasic, const DeltaRational& v);
  void pivot(int row, int nonbasic);

  std::vector<DeltaRational> value_;
  std::vector<std::optional<DeltaRational>> lower_;
  std::vector<std::optional<DeltaRational>> upper_;
  std::vector<int> row_of_;                     // -1 for nonbasic
  std::vector<int> basic_of_row_;
  std::vector<std::map<int, Rational>> rows_;   // basic = sum(coef * nonbasic)
  std::vector<TrailEntry> trail_;
};

}  // namespace dre::lra::detail
