#include "dre/lra/smtlib.hpp"

#include "dre/core/error.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <unistd.h>

namespace dre::lra {

namespace {

bool is_simple_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos) return false;
  return true;
}

std::string symbol(const std::string& s) { return is_simple_symbol(s) ? s : "|" + s + "|"; }

std::string number(const Rational& r) {
  Rational mag = r < 0 ? Rational(-r) : r;
  std::string body;
  if (denominator_of(mag) == 1)
    body = to_string(mag);
  else
    body = "(/ " + to_string(numerator_of(mag)) + " " + to_string(denominator_of(mag)) + ")";
  return r < 0 ? "(- " + body + ")" : body;
}

std::string linear(const LinearExpression& e) {
  std::vector<std::string> parts;
  for (const auto& [name, c] : e.terms())
    parts.push_back(c == 1 ? symbol(name) : "(* " + number(c) + " " + symbol(name) + ")");
  if (e.constant() != 0 || parts.empty()) parts.push_back(number(e.constant()));
  if (parts.size() == 1) return parts.front();
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

// --- s-expression reader ---------------------------------------------------

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> list;
  bool is_list = false;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of solver output");
    if (text_[pos_] == '(') {
      ++pos_;
      SExpr e;
      e.is_list = true;
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unbalanced parenthesis in solver output");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (text_[pos_] == ')') throw ParseError("unexpected ')' in solver output");
    if (text_[pos_] == '|') {
      auto end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated quoted symbol");
      SExpr e;
      e.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    if (text_[pos_] == '"') {
      auto end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated string");
      SExpr e;
      e.atom = std::string(text_.substr(pos_, end - pos_ + 1));
      pos_ = end + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    SExpr e;
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Rational value_of(const SExpr& e) {
  if (!e.is_list) {
    try {
      return parse_rational(e.atom);
    } catch (const std::invalid_argument&) {
      throw ParseError("unsupported model value '" + e.atom + "'");
    }
  }
  if (e.list.empty() || e.list.front().is_list) throw ParseError("malformed model value");
  const std::string& op = e.list.front().atom;
  if (op == "-" && e.list.size() == 2) return -value_of(e.list[1]);
  if (op == "-" && e.list.size() == 3) return value_of(e.list[1]) - value_of(e.list[2]);
  if (op == "/" && e.list.size() == 3) {
    Rational d = value_of(e.list[2]);
    if (d == 0) throw ParseError("division by zero in model value");
    return value_of(e.list[1]) / d;
  }
  throw ParseError("unsupported model value operator '" + op + "'");
}

void read_model(const SExpr& e, Assignment& out) {
  if (!e.is_list) return;
  for (const auto& item : e.list) {
    if (!item.is_list) continue;  // the optional leading "model" symbol
    if (item.list.size() == 5 && !item.list[0].is_list && item.list[0].atom == "define-fun") {
      out[item.list[1].atom] = value_of(item.list[4]);
    } else if (!item.list.empty() && item.list[0].is_list) {
      read_model(item, out);
    }
  }
}

}  // namespace

std::string smtlib_term(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: {
      const Atom& a = f.atom();
      const char* op = a.relation() == Relation::LessEq ? "<=" : a.relation() == Relation::Less ? "<" : "=";
      return std::string("(") + op + " " + linear(a.lhs()) + " 0)";
    }
    case K::Not: return "(not " + smtlib_term(f.children().front()) + ")";
    case K::And:
    case K::Or: {
      std::string out = f.kind() == K::And ? "(and" : "(or";
      for (const auto& c : f.children()) out += " " + smtlib_term(c);
      return out + ")";
    }
  }
  return "true";
}

std::string smtlib_script(const Formula& f) {
  std::ostringstream os;
  os << "(set-option :produce-models true)\n(set-logic LRA)\n";
  for (const auto& name : f.free_symbols()) os << "(declare-const " << symbol(name) << " Real)\n";
  os << "(assert " << smtlib_term(f) << ")\n(check-sat)\n(get-model)\n(exit)\n";
  return os.str();
}

SmtResponse parse_smt_response(std::string_view text) {
  Reader reader(text);
  SmtResponse out;
  if (reader.at_end()) throw ParseError("empty solver output");
  SExpr head = reader.read();
  if (head.is_list) throw ParseError("expected sat/unsat/unknown");
  if (head.atom == "sat")
    out.status = SmtResponse::Status::Sat;
  else if (head.atom == "unsat")
    out.status = SmtResponse::Status::Unsat;
  else if (head.atom == "unknown")
    out.status = SmtResponse::Status::Unknown;
  else
    throw ParseError("expected sat/unsat/unknown, got '" + head.atom + "'");
  while (!reader.at_end()) {
    SExpr e = reader.read();
    // get-model after unsat legitimately yields an error.
    if (e.is_list && !e.list.empty() && !e.list[0].is_list && e.list[0].atom == "error" &&
        out.status == SmtResponse::Status::Sat)
      throw ParseError("solver error: " + (e.list.size() > 1 ? e.list[1].atom : std::string()));
    if (out.status == SmtResponse::Status::Sat) read_model(e, out.model);
  }
  return out;
}

SatResult ExternalSolver::check(const Formula& f) const {
  static std::atomic<unsigned> counter{0};
  auto path = std::filesystem::temp_directory_path() /
              ("dre-query-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".smt2");
  {
    std::ofstream out(path);
    out << smtlib_script(f);
  }
  std::string command = "'" + executable_ + "' '" + path.string() + "' 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(command.c_str(), "r"), ::pclose);
  if (!pipe) throw Error("cannot start external solver '" + executable_ + "'");
  std::string output;
  std::array<char, 4096> buffer{};
  while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe.get())) output.append(buffer.data(), n);
  pipe.reset();
  std::filesystem::remove(path);

  SmtResponse response = parse_smt_response(output);
  switch (response.status) {
    case SmtResponse::Status::Unsat: return {};
    case SmtResponse::Status::Unknown: throw ResourceLimit("external solver answered unknown");
    case SmtResponse::Status::Sat: break;
  }
  Assignment model;
  for (const auto& name : f.free_symbols()) {
    auto it = response.model.find(name);
    model.emplace(name, it == response.model.end() ? Rational(0) : it->second);
  }
  if (!evaluate(f, model)) throw Error("external solver returned a model that does not satisfy the query");
  return {true, std::move(model)};
}

}  // namespace dre::lra
