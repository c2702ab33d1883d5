#pragma once

#include "dre/lra/atom.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dre::lra {

/// Immutable quantifier-free formula over linear atoms. Copies share structure.
/// The smart constructors flatten nested connectives and fold constants, so a
/// formula built from ground atoms collapses to True or False.
class Formula {
 public:
  enum class Kind { True, False, Atom, And, Or, Not };

  Formula();  // True
  Formula(Atom atom);  // NOLINT(google-explicit-constructor)

  static Formula top();
  static Formula bottom();
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);
  static Formula negation(const Formula& f);
  static Formula implication(const Formula& premise, const Formula& conclusion);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& atom() const;
  const std::vector<Formula>& children() const;

  std::set<std::string> free_symbols() const;
  /// Number of nodes.
  std::size_t size() const;
  std::string str() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

inline Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction({a, b}); }
inline Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction({a, b}); }
inline Formula operator!(const Formula& a) { return Formula::negation(a); }

}  // namespace dre::lra
