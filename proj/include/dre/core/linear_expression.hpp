#pragma once

#include "dre/core/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace dre {

using Assignment = std::map<std::string, Rational>;

/// constant + sum(coefficient * symbol). Zero coefficients are never stored.
class LinearExpression {
 public:
  using Terms = std::map<std::string, Rational>;

  LinearExpression() = default;
  LinearExpression(Rational constant);  // NOLINT(google-explicit-constructor)
  LinearExpression(int constant) : LinearExpression(Rational(constant)) {}  // NOLINT

  static LinearExpression symbol(const std::string& name, const Rational& coefficient = 1);

  const Rational& constant() const { return constant_; }
  const Terms& terms() const { return terms_; }
  Rational coefficient(const std::string& name) const;
  bool is_constant() const { return terms_.empty(); }
  bool mentions(const std::string& name) const { return terms_.count(name) != 0; }
  std::set<std::string> symbols() const;

  void add_term(const std::string& name, const Rational& coefficient);
  void set_constant(const Rational& c) { constant_ = c; }

  LinearExpression& operator+=(const LinearExpression& other);
  LinearExpression& operator-=(const LinearExpression& other);
  LinearExpression& operator*=(const Rational& factor);

  friend LinearExpression operator+(LinearExpression a, const LinearExpression& b) { return a += b; }
  friend LinearExpression operator-(LinearExpression a, const LinearExpression& b) { return a -= b; }
  friend LinearExpression operator*(LinearExpression a, const Rational& f) { return a *= f; }
  friend LinearExpression operator*(const Rational& f, LinearExpression a) { return a *= f; }
  LinearExpression operator-() const { return *this * Rational(-1); }

  /// Simultaneous substitution; symbols without a binding are kept.
  LinearExpression substitute(const std::map<std::string, LinearExpression>& bindings) const;

  /// Total evaluation; throws std::out_of_range naming the first unbound symbol.
  Rational evaluate(const Assignment& values) const;
  std::optional<Rational> try_evaluate(const Assignment& values) const;

  bool operator==(const LinearExpression& other) const = default;
  bool operator<(const LinearExpression& other) const;

  /// Human-readable form, e.g. "2*x - y + 3/2". Parsable by the document grammar.
  std::string str() const;

 private:
  Rational constant_{0};
  Terms terms_;
};

}  // namespace dre
