#pragma once

#include "dre/lra/formula.hpp"
#include "dre/model/problem.hpp"

#include <string>
#include <vector>

namespace dre::irr {

struct Interval {
  Rational lower;
  Rational upper;
  Rational width() const { return upper - lower; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  bool operator==(const Interval&) const = default;
};

/// Hyper-rectangle over the parameters, in problem declaration order.
class Dre {
 public:
  Dre() = default;
  /// The single point of the nominal valuation.
  static Dre point(const std::vector<model::Parameter>& parameters);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Interval& operator[](std::size_t i) const { return bounds_[i]; }
  Interval& operator[](std::size_t i) { return bounds_[i]; }
  const Interval& at(const std::string& name) const;
  void add(std::string name, Interval bounds);

  bool is_point() const;
  bool contains(const Dre& other) const;
  bool contains(const model::Valuation& v) const;
  Rational width_sum() const;

  /// Conjunction of l <= gamma <= u.
  lra::Formula formula() const;

  bool operator==(const Dre&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> bounds_;
};

}  // namespace dre::irr
