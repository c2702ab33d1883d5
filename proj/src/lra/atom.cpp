#include "dre/lra/atom.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace dre::lra {

namespace {

using Integer = boost::multiprecision::mpz_int;

// Positive factor turning the coefficients into coprime integers.
Rational normalizing_factor(const LinearExpression::Terms& terms) {
  Integer lcm_den = 1;
  for (const auto& [_, c] : terms) lcm_den = boost::multiprecision::lcm(lcm_den, Integer(denominator(c)));
  Integer gcd_num = 0;
  for (const auto& [_, c] : terms) {
    Integer scaled = Integer(numerator(c)) * (lcm_den / Integer(denominator(c)));
    gcd_num = boost::multiprecision::gcd(gcd_num, boost::multiprecision::abs(scaled));
  }
  if (gcd_num == 0) return Rational(1);
  return Rational(lcm_den) / Rational(gcd_num);
}

}  // namespace

bool holds(const Rational& value, Relation relation) {
  switch (relation) {
    case Relation::LessEq: return value <= 0;
    case Relation::Less: return value < 0;
    case Relation::Eq: return value == 0;
  }
  return false;
}

Atom::Atom(LinearExpression lhs, Relation relation) : lhs_(std::move(lhs)), relation_(relation) {
  if (lhs_.is_constant()) {
    // Canonical ground atoms: keep only the sign of the constant.
    const Rational& c = lhs_.constant();
    lhs_ = LinearExpression(c > 0 ? Rational(1) : c < 0 ? Rational(-1) : Rational(0));
    return;
  }
  Rational factor = normalizing_factor(lhs_.terms());
  if (relation_ == Relation::Eq && lhs_.terms().begin()->second < 0) factor = -factor;
  if (factor != 1) lhs_ *= factor;
}

std::optional<bool> Atom::constant_value() const {
  if (!lhs_.is_constant()) return std::nullopt;
  return holds(lhs_.constant(), relation_);
}

bool Atom::evaluate(const Assignment& values) const { return holds(lhs_.evaluate(values), relation_); }

bool Atom::operator<(const Atom& other) const {
  if (relation_ != other.relation_) return relation_ < other.relation_;
  return lhs_ < other.lhs_;
}

std::string Atom::str() const {
  // Print as "terms rel -constant" for readability.
  LinearExpression terms = lhs_;
  Rational rhs = -terms.constant();
  terms.set_constant(0);
  const char* rel = relation_ == Relation::LessEq ? " <= " : relation_ == Relation::Less ? " < " : " = ";
  return terms.str() + rel + to_string(rhs);
}

}  // namespace dre::lra
