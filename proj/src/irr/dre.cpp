#include "dre/irr/dre.hpp"

#include <stdexcept>

namespace dre::irr {

Dre Dre::point(const std::vector<model::Parameter>& parameters) {
  Dre r;
  for (const auto& p : parameters) r.add(p.name, {p.nominal, p.nominal});
  return r;
}

const Interval& Dre::at(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return bounds_[i];
  throw std::out_of_range("no parameter '" + name + "' in envelope");
}

void Dre::add(std::string name, Interval bounds) {
  names_.push_back(std::move(name));
  bounds_.push_back(std::move(bounds));
}

bool Dre::is_point() const {
  for (const auto& b : bounds_)
    if (b.lower != b.upper) return false;
  return true;
}

bool Dre::contains(const Dre& other) const {
  if (other.names_ != names_) return false;
  for (std::size_t i = 0; i < bounds_.size(); ++i)
    if (other.bounds_[i].lower < bounds_[i].lower || other.bounds_[i].upper > bounds_[i].upper) return false;
  return true;
}

bool Dre::contains(const model::Valuation& v) const {
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    auto it = v.find(names_[i]);
    if (it == v.end() || !bounds_[i].contains(it->second)) return false;
  }
  return true;
}

Rational Dre::width_sum() const {
  Rational s = 0;
  for (const auto& b : bounds_) s += b.width();
  return s;
}

lra::Formula Dre::formula() const {
  std::vector<lra::Formula> parts;
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    auto g = LinearExpression::symbol(names_[i]);
    parts.push_back(lra::Atom::less_eq(bounds_[i].lower, g));
    parts.push_back(lra::Atom::less_eq(g, bounds_[i].upper));
  }
  return lra::Formula::conjunction(std::move(parts));
}

}  // namespace dre::irr
