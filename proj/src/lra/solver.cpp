#include "dre/lra/solver.hpp"

#include "dre/core/error.hpp"
#include "simplex.hpp"

#include <algorithm>
#include <stdexcept>

namespace dre::lra {

// ---------------------------------------------------------------------------
// Normal forms, substitution, evaluation

namespace {

Formula negate_atom(const Atom& a) {
  switch (a.relation()) {
    case Relation::LessEq: return Atom(-a.lhs(), Relation::Less);
    case Relation::Less: return Atom(-a.lhs(), Relation::LessEq);
    case Relation::Eq:
      return Formula::disjunction({Atom(a.lhs(), Relation::Less), Atom(-a.lhs(), Relation::Less)});
  }
  throw std::logic_error("unknown relation");
}

Formula nnf(const Formula& f, bool positive) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return positive ? Formula::top() : Formula::bottom();
    case K::False: return positive ? Formula::bottom() : Formula::top();
    case K::Atom: return positive ? f : negate_atom(f.atom());
    case K::Not: return nnf(f.children().front(), !positive);
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(nnf(c, positive));
      bool conj = (f.kind() == K::And) == positive;
      return conj ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
    }
  }
  throw std::logic_error("unknown formula kind");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, true); }

Formula substitute(const Formula& f, const std::map<std::string, LinearExpression>& bindings) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::Atom: {
      const Atom& a = f.atom();
      bool touched = std::any_of(a.lhs().terms().begin(), a.lhs().terms().end(),
                                 [&](const auto& t) { return bindings.count(t.first) != 0; });
      if (!touched) return f;
      return Atom(a.lhs().substitute(bindings), a.relation());
    }
    case K::Not: return Formula::negation(substitute(f.children().front(), bindings));
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(substitute(c, bindings));
      return f.kind() == K::And ? Formula::conjunction(std::move(parts))
                                : Formula::disjunction(std::move(parts));
    }
  }
  throw std::logic_error("unknown formula kind");
}

bool evaluate(const Formula& f, const Assignment& model) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return f.atom().evaluate(model);
    case K::Not: return !evaluate(f.children().front(), model);
    case K::And:
      for (const auto& c : f.children())
        if (!evaluate(c, model)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (evaluate(c, model)) return true;
      return false;
  }
  throw std::logic_error("unknown formula kind");
}

// ---------------------------------------------------------------------------
// Decision procedure

namespace {

using detail::DeltaRational;
using detail::Simplex;

using Solution = std::map<std::string, LinearExpression>;

// Solves the top-level equalities of an NNF formula and substitutes them
// away. `solved` keeps every entry fully reduced (no solved symbol on a
// right-hand side), so each can be evaluated from the remaining symbols.
Formula eliminate_equalities(Formula g, Solution& solved) {
  while (true) {
    std::vector<Atom> equalities;
    std::vector<Formula> rest;
    if (g.kind() == Formula::Kind::Atom && g.atom().relation() == Relation::Eq) {
      equalities.push_back(g.atom());
    } else if (g.kind() == Formula::Kind::And) {
      for (const auto& c : g.children()) {
        if (c.kind() == Formula::Kind::Atom && c.atom().relation() == Relation::Eq)
          equalities.push_back(c.atom());
        else
          rest.push_back(c);
      }
    }
    if (equalities.empty()) return g;

    Solution fresh;
    for (const auto& eq : equalities) {
      LinearExpression e = eq.lhs().substitute(fresh);
      if (e.is_constant()) {
        if (e.constant() != 0) return Formula::bottom();
        continue;
      }
      // Solve for the symbol with the fewest occurrences on solved right-hand sides.
      std::string pick;
      std::size_t best = SIZE_MAX;
      for (const auto& [name, _] : e.terms()) {
        std::size_t uses = 0;
        for (const auto& [_k, rhs] : fresh) uses += rhs.mentions(name) ? 1 : 0;
        if (uses < best) {
          best = uses;
          pick = name;
        }
      }
      Rational coef = e.coefficient(pick);
      LinearExpression rhs = e;
      rhs.add_term(pick, -coef);
      rhs *= Rational(-1) / coef;
      Solution one{{pick, rhs}};
      for (auto& [_k, other] : fresh)
        if (other.mentions(pick)) other = other.substitute(one);
      fresh.emplace(pick, std::move(rhs));
    }
    for (auto& [_k, rhs] : solved) rhs = rhs.substitute(fresh);
    for (auto& entry : fresh) solved.insert(entry);
    g = substitute(Formula::conjunction(std::move(rest)), fresh);
  }
}

struct AtomBound {
  int var;
  bool upper;  // otherwise lower
  DeltaRational value;
};

class Search {
 public:
  Search(const Formula& nnf, const Limits& limits) : limits_(limits) {
    auto symbols = nnf.free_symbols();
    names_.assign(symbols.begin(), symbols.end());
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], static_cast<int>(i));
    root_ = compile(nnf);
    simplex_.emplace(static_cast<int>(names_.size()));
    for (const auto& form : row_forms_) simplex_->add_row(form);
    pivots_left_ = limits_.max_pivots;
  }

  std::optional<Assignment> run() {
    std::vector<int> pending{root_};
    if (!dfs(std::move(pending))) return std::nullopt;
    auto values = simplex_->concrete_values();
    Assignment model;
    for (std::size_t i = 0; i < names_.size(); ++i) model.emplace(names_[i], values[i]);
    return model;
  }

 private:
  struct Node {
    Formula::Kind kind;
    std::vector<AtomBound> bounds;  // Atom nodes
    std::vector<int> children;      // And / Or nodes
  };

  int compile(const Formula& f) {
    Node node{f.kind(), {}, {}};
    if (f.kind() == Formula::Kind::Atom) {
      node.bounds = compile_atom(f.atom());
    } else {
      for (const auto& c : f.children()) node.children.push_back(compile(c));
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
  }

  std::vector<AtomBound> compile_atom(const Atom& a) {
    const auto& terms = a.lhs().terms();
    const Rational lead = terms.begin()->second;
    int var;
    if (terms.size() == 1) {
      var = index_.at(terms.begin()->first);
    } else {
      std::map<std::string, Rational> key;
      Simplex::Form form;
      for (const auto& [name, c] : terms) {
        key.emplace(name, c / lead);
        form.emplace_back(index_.at(name), c / lead);
      }
      auto it = slack_.find(key);
      if (it == slack_.end()) {
        var = static_cast<int>(names_.size() + row_forms_.size());
        row_forms_.push_back(std::move(form));
        slack_.emplace(std::move(key), var);
      } else {
        var = it->second;
      }
    }
    // lead * var + c rel 0  <=>  var rel' -c/lead
    Rational bound = -a.lhs().constant() / lead;
    bool positive = lead > 0;
    switch (a.relation()) {
      case Relation::Eq: return {{var, true, {bound, 0}}, {var, false, {bound, 0}}};
      case Relation::LessEq: return {{var, positive, {bound, 0}}};
      case Relation::Less: return {{var, positive, {bound, positive ? Rational(-1) : Rational(1)}}};
    }
    return {};
  }

  bool assert_bounds(const Node& n) {
    for (const auto& b : n.bounds) {
      bool ok = b.upper ? simplex_->assert_upper(b.var, b.value) : simplex_->assert_lower(b.var, b.value);
      if (!ok) return false;
    }
    return true;
  }

  bool dfs(std::vector<int> pending) {
    if (++nodes_visited_ > limits_.max_search_nodes)
      throw ResourceLimit("search node budget exhausted");
    std::vector<int> disjunctions;
    while (!pending.empty()) {
      int id = pending.back();
      pending.pop_back();
      const Node& n = nodes_[id];
      switch (n.kind) {
        case Formula::Kind::True: break;
        case Formula::Kind::False: return false;
        case Formula::Kind::Atom:
          if (!assert_bounds(n)) return false;
          break;
        case Formula::Kind::And:
          pending.insert(pending.end(), n.children.begin(), n.children.end());
          break;
        case Formula::Kind::Or: disjunctions.push_back(id); break;
        case Formula::Kind::Not: throw std::logic_error("search expects NNF");
      }
    }
    if (!simplex_->check(pivots_left_)) return false;
    if (disjunctions.empty()) return true;

    auto chosen = std::min_element(disjunctions.begin(), disjunctions.end(), [&](int a, int b) {
      return nodes_[a].children.size() < nodes_[b].children.size();
    });
    int split = *chosen;
    disjunctions.erase(chosen);
    for (int child : nodes_[split].children) {
      std::size_t mark = simplex_->mark();
      std::vector<int> next = disjunctions;
      next.push_back(child);
      if (dfs(std::move(next))) return true;
      simplex_->backtrack(mark);
    }
    return false;
  }

  Limits limits_;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::map<std::map<std::string, Rational>, int> slack_;
  std::vector<Simplex::Form> row_forms_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::optional<Simplex> simplex_;
  std::size_t pivots_left_ = 0;
  std::size_t nodes_visited_ = 0;
};

}  // namespace

SatResult is_sat(const Formula& f, const Limits& limits) {
  const auto symbols = f.free_symbols();
  Solution solved;
  Formula g = eliminate_equalities(to_nnf(f), solved);
  if (g.is_false()) return {};

  Assignment model;
  if (!g.is_true()) {
    auto core = Search(g, limits).run();
    if (!core) return {};
    model = std::move(*core);
  }
  for (const auto& name : symbols)
    if (!solved.count(name)) model.emplace(name, Rational(0));
  for (const auto& [name, rhs] : solved) model[name] = rhs.evaluate(model);
  for (auto it = model.begin(); it != model.end();) {
    if (!symbols.count(it->first))
      it = model.erase(it);
    else
      ++it;
  }
  if (!evaluate(f, model)) throw std::logic_error("lra: witness does not satisfy the query");
  return {true, std::move(model)};
}

bool is_valid(const Formula& f, const Limits& limits) { return !is_sat(!f, limits).sat; }

}  // namespace dre::lra
