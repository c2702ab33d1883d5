#include "dre/core/linear_expression.hpp"

#include <sstream>
#include <stdexcept>

namespace dre {

LinearExpression::LinearExpression(Rational constant) : constant_(std::move(constant)) {}

LinearExpression LinearExpression::symbol(const std::string& name, const Rational& coefficient) {
  LinearExpression e;
  e.add_term(name, coefficient);
  return e;
}

Rational LinearExpression::coefficient(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<std::string> LinearExpression::symbols() const {
  std::set<std::string> out;
  for (const auto& [name, _] : terms_) out.insert(name);
  return out;
}

void LinearExpression::add_term(const std::string& name, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.emplace(name, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

LinearExpression& LinearExpression::operator+=(const LinearExpression& other) {
  constant_ += other.constant_;
  for (const auto& [name, c] : other.terms_) add_term(name, c);
  return *this;
}

LinearExpression& LinearExpression::operator-=(const LinearExpression& other) {
  constant_ -= other.constant_;
  for (const auto& [name, c] : other.terms_) add_term(name, -c);
  return *this;
}

LinearExpression& LinearExpression::operator*=(const Rational& factor) {
  if (factor == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= factor;
  for (auto& [_, c] : terms_) c *= factor;
  return *this;
}

LinearExpression LinearExpression::substitute(
    const std::map<std::string, LinearExpression>& bindings) const {
  LinearExpression out(constant_);
  for (const auto& [name, c] : terms_) {
    auto it = bindings.find(name);
    if (it == bindings.end())
      out.add_term(name, c);
    else
      out += it->second * c;
  }
  return out;
}

Rational LinearExpression::evaluate(const Assignment& values) const {
  Rational out = constant_;
  for (const auto& [name, c] : terms_) {
    auto it = values.find(name);
    if (it == values.end()) throw std::out_of_range("no value for symbol '" + name + "'");
    out += c * it->second;
  }
  return out;
}

std::optional<Rational> LinearExpression::try_evaluate(const Assignment& values) const {
  Rational out = constant_;
  for (const auto& [name, c] : terms_) {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    out += c * it->second;
  }
  return out;
}

bool LinearExpression::operator<(const LinearExpression& other) const {
  if (terms_ != other.terms_) return terms_ < other.terms_;
  return constant_ < other.constant_;
}

std::string LinearExpression::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << name;
    first = false;
  }
  if (first) return to_string(constant_);
  if (constant_ != 0) {
    Rational mag = constant_ < 0 ? Rational(-constant_) : constant_;
    os << (constant_ < 0 ? " - " : " + ") << to_string(mag);
  }
  return os.str();
}

}  // namespace dre
