#include "dre/core/error.hpp"
#include "dre/lra/solver.hpp"

#include <algorithm>

namespace dre::lra {

namespace {

using Cube = std::vector<Atom>;

void expand_dnf(const Formula& f, std::vector<Cube>& out, const Limits& limits) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: out.push_back({}); return;
    case K::False: return;
    case K::Atom: out.push_back({f.atom()}); return;
    case K::Or:
      for (const auto& c : f.children()) {
        expand_dnf(c, out, limits);
        if (out.size() > limits.max_cubes) throw ResourceLimit("DNF cube budget exhausted");
      }
      return;
    case K::And: {
      std::vector<Cube> acc{{}};
      for (const auto& c : f.children()) {
        std::vector<Cube> part;
        expand_dnf(c, part, limits);
        std::vector<Cube> next;
        for (const auto& a : acc)
          for (const auto& b : part) {
            Cube merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
            if (next.size() > limits.max_cubes) throw ResourceLimit("DNF cube budget exhausted");
          }
        acc = std::move(next);
      }
      out.insert(out.end(), acc.begin(), acc.end());
      return;
    }
    case K::Not: throw std::logic_error("expected NNF");
  }
}

// Folds ground atoms, removes duplicates and keeps only the tightest
// inequality per linear form. Returns false when a ground atom is false.
bool tidy(Cube& cube) {
  std::map<LinearExpression::Terms, Atom> tightest;
  std::vector<Atom> equalities;
  for (auto& a : cube) {
    if (auto v = a.constant_value()) {
      if (!*v) return false;
      continue;
    }
    if (a.relation() == Relation::Eq) {
      if (std::find(equalities.begin(), equalities.end(), a) == equalities.end()) equalities.push_back(a);
      continue;
    }
    auto [it, inserted] = tightest.emplace(a.lhs().terms(), a);
    if (inserted) continue;
    const Atom& old = it->second;
    // terms + c <= 0: larger c is tighter; on ties strict wins.
    const Rational& c_new = a.lhs().constant();
    const Rational& c_old = old.lhs().constant();
    if (c_new > c_old || (c_new == c_old && a.relation() == Relation::Less)) it->second = a;
  }
  cube = std::move(equalities);
  for (auto& [_, a] : tightest) cube.push_back(std::move(a));
  return true;
}

std::optional<Cube> fourier_motzkin(std::set<std::string> vars, Cube cube, const Limits& limits) {
  if (!tidy(cube)) return std::nullopt;
  while (!vars.empty()) {
    // Equalities first.
    auto eq = std::find_if(cube.begin(), cube.end(), [&](const Atom& a) {
      if (a.relation() != Relation::Eq) return false;
      for (const auto& [name, _] : a.lhs().terms())
        if (vars.count(name)) return true;
      return false;
    });
    if (eq != cube.end()) {
      std::string pick;
      for (const auto& [name, _] : eq->lhs().terms())
        if (vars.count(name)) {
          pick = name;
          break;
        }
      LinearExpression rhs = eq->lhs();
      Rational coef = rhs.coefficient(pick);
      rhs.add_term(pick, -coef);
      rhs *= Rational(-1) / coef;
      std::map<std::string, LinearExpression> binding{{pick, rhs}};
      cube.erase(eq);
      for (auto& a : cube)
        if (a.lhs().mentions(pick)) a = Atom(a.lhs().substitute(binding), a.relation());
      vars.erase(pick);
      if (!tidy(cube)) return std::nullopt;
      continue;
    }

    std::string pick;
    std::size_t best = SIZE_MAX;
    for (auto it = vars.begin(); it != vars.end();) {
      std::size_t count = 0;
      for (const auto& a : cube) count += a.lhs().mentions(*it) ? 1 : 0;
      if (count == 0) {
        it = vars.erase(it);
        continue;
      }
      if (count < best) {
        best = count;
        pick = *it;
      }
      ++it;
    }
    if (pick.empty()) break;

    Cube upper, lower, rest;
    for (auto& a : cube) {
      Rational c = a.lhs().coefficient(pick);
      if (c > 0)
        upper.push_back(std::move(a));
      else if (c < 0)
        lower.push_back(std::move(a));
      else
        rest.push_back(std::move(a));
    }
    if (rest.size() + upper.size() * lower.size() > limits.max_fm_atoms)
      throw ResourceLimit("Fourier-Motzkin atom budget exhausted");
    for (const auto& u : upper) {
      Rational a = u.lhs().coefficient(pick);
      for (const auto& l : lower) {
        Rational b = -l.lhs().coefficient(pick);
        LinearExpression combined = u.lhs() * b + l.lhs() * a;
        combined.add_term(pick, -combined.coefficient(pick));  // exact cancellation
        bool strict = u.relation() == Relation::Less || l.relation() == Relation::Less;
        rest.emplace_back(std::move(combined), strict ? Relation::Less : Relation::LessEq);
      }
    }
    cube = std::move(rest);
    vars.erase(pick);
    if (!tidy(cube)) return std::nullopt;
  }
  return cube;
}

Formula cube_formula(const Cube& cube) {
  std::vector<Formula> parts(cube.begin(), cube.end());
  return Formula::conjunction(std::move(parts));
}

}  // namespace

std::vector<Atom> remove_redundant(std::vector<Atom> conjunction, const Limits& limits) {
  for (std::size_t i = 0; i < conjunction.size();) {
    std::vector<Formula> others;
    for (std::size_t j = 0; j < conjunction.size(); ++j)
      if (j != i) others.emplace_back(conjunction[j]);
    Formula query = Formula::conjunction(std::move(others)) && !Formula(conjunction[i]);
    if (!is_sat(query, limits).sat)
      conjunction.erase(conjunction.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return conjunction;
}

Formula eliminate_exists(const std::set<std::string>& vars, const Formula& f, const Limits& limits) {
  std::set<std::string> relevant;
  auto symbols = f.free_symbols();
  for (const auto& v : vars)
    if (symbols.count(v)) relevant.insert(v);
  if (relevant.empty()) return f;

  std::vector<Cube> cubes;
  expand_dnf(to_nnf(f), cubes, limits);
  std::vector<Formula> disjuncts;
  std::set<std::vector<Atom>> seen;
  for (auto& cube : cubes) {
    auto projected = fourier_motzkin(relevant, std::move(cube), limits);
    if (!projected) continue;
    if (projected->empty()) return Formula::top();
    // An unsatisfiable cube over the surviving symbols must not reach the
    // redundancy filter, which would empty it.
    if (!is_sat(cube_formula(*projected), limits).sat) continue;
    auto reduced = remove_redundant(std::move(*projected), limits);
    if (reduced.empty()) return Formula::top();
    std::sort(reduced.begin(), reduced.end());
    if (!seen.insert(reduced).second) continue;
    disjuncts.push_back(cube_formula(reduced));
  }
  return Formula::disjunction(std::move(disjuncts));
}

}  // namespace dre::lra
