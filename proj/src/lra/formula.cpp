#include "dre/lra/formula.hpp"

#include <stdexcept>

namespace dre::lra {

struct Formula::Node {
  Kind kind;
  std::optional<Atom> atom;
  std::vector<Formula> children;
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula::Formula() : Formula(top()) {}

Formula::Formula(Atom atom) {
  if (auto value = atom.constant_value()) {
    *this = *value ? top() : bottom();
    return;
  }
  node_ = std::make_shared<const Node>(Node{Kind::Atom, std::move(atom), {}});
}

Formula Formula::top() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True, std::nullopt, {}});
  return Formula(node);
}

Formula Formula::bottom() {
  static const auto node = std::make_shared<const Node>(Node{Kind::False, std::nullopt, {}});
  return Formula(node);
}

Formula Formula::conjunction(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::True: break;
      case Kind::False: return bottom();
      case Kind::And:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat.front();
  return Formula(std::make_shared<const Node>(Node{Kind::And, std::nullopt, std::move(flat)}));
}

Formula Formula::disjunction(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::False: break;
      case Kind::True: return top();
      case Kind::Or:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return bottom();
  if (flat.size() == 1) return flat.front();
  return Formula(std::make_shared<const Node>(Node{Kind::Or, std::nullopt, std::move(flat)}));
}

Formula Formula::negation(const Formula& f) {
  switch (f.kind()) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::Not: return f.children().front();
    default: return Formula(std::make_shared<const Node>(Node{Kind::Not, std::nullopt, {f}}));
  }
}

Formula Formula::implication(const Formula& premise, const Formula& conclusion) {
  return disjunction({negation(premise), conclusion});
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Atom& Formula::atom() const {
  if (node_->kind != Kind::Atom) throw std::logic_error("formula is not an atom");
  return *node_->atom;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

namespace {

void collect_symbols(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Atom) {
    for (const auto& [name, _] : f.atom().lhs().terms()) out.insert(name);
    return;
  }
  for (const auto& c : f.children()) collect_symbols(c, out);
}

void render(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Atom: out += f.atom().str(); return;
    case K::Not:
      out += "!(";
      render(f.children().front(), out);
      out += ")";
      return;
    case K::And:
    case K::Or: {
      const char* sep = f.kind() == K::And ? " & " : " | ";
      out += "(";
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += sep;
        render(c, out);
        first = false;
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

std::set<std::string> Formula::free_symbols() const {
  std::set<std::string> out;
  collect_symbols(*this, out);
  return out;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

std::string Formula::str() const {
  std::string out;
  render(*this, out);
  return out;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (kind() == Kind::Atom) return atom() == other.atom();
  return children() == other.children();
}

}  // namespace dre::lra
