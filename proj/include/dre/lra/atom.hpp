#pragma once

#include "dre/core/linear_expression.hpp"

#include <optional>
#include <string>

namespace dre::lra {

enum class Relation { LessEq, Less, Eq };

/// `lhs rel 0`. On construction the variable coefficients are scaled by a
/// positive factor into coprime integers; equalities additionally get a
/// positive leading coefficient. Scaling never changes the solution set.
class Atom {
 public:
  Atom(LinearExpression lhs, Relation relation);

  static Atom less_eq(const LinearExpression& a, const LinearExpression& b) { return {a - b, Relation::LessEq}; }
  static Atom less(const LinearExpression& a, const LinearExpression& b) { return {a - b, Relation::Less}; }
  static Atom equal(const LinearExpression& a, const LinearExpression& b) { return {a - b, Relation::Eq}; }
  static Atom greater_eq(const LinearExpression& a, const LinearExpression& b) { return {b - a, Relation::LessEq}; }
  static Atom greater(const LinearExpression& a, const LinearExpression& b) { return {b - a, Relation::Less}; }

  const LinearExpression& lhs() const { return lhs_; }
  Relation relation() const { return relation_; }

  /// Set when the atom has no symbols.
  std::optional<bool> constant_value() const;
  bool evaluate(const Assignment& values) const;

  bool operator==(const Atom& other) const = default;
  bool operator<(const Atom& other) const;

  std::string str() const;

 private:
  LinearExpression lhs_;
  Relation relation_;
};

/// Truth of `value rel 0`.
bool holds(const Rational& value, Relation relation);

}  // namespace dre::lra
