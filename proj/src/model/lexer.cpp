#include "lexer.hpp"

#include <array>
#include <cctype>

namespace dre::model::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::array<std::string_view, 4> kHyphenated = {"at-start", "at-end", "over-all", "plan-start"};

}  // namespace

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    ++line_no;
    Line line{{}, line_no};
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      std::size_t col = i + 1;
      if (c == ';') break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < raw.size() && ident_char(raw[j])) ++j;
        std::string word(raw.substr(i, j - i));
        for (auto kw : kHyphenated) {
          if (raw.substr(i, kw.size()) == kw && (i + kw.size() == raw.size() || !ident_char(raw[i + kw.size()]))) {
            word = std::string(kw);
            j = i + kw.size();
          }
        }
        line.tokens.push_back({Token::Kind::Word, word, line_no, col});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
        if (j + 1 < raw.size() && (raw[j] == '.' || raw[j] == '/') &&
            std::isdigit(static_cast<unsigned char>(raw[j + 1]))) {
          ++j;
          while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
        }
        line.tokens.push_back({Token::Kind::Number, std::string(raw.substr(i, j - i)), line_no, col});
        i = j;
        continue;
      }
      std::string punct(1, c);
      if (i + 1 < raw.size()) {
        std::string two(raw.substr(i, 2));
        if (two == "<=" || two == ">=" || two == ":=") punct = two;
      }
      if (std::string_view("+-*<>=:#()[]").find(c) == std::string_view::npos)
        throw ParseError("unexpected character '" + punct + "'", line_no, col);
      line.tokens.push_back({Token::Kind::Punct, punct, line_no, col});
      i += punct.size();
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

void Cursor::fail(const std::string& message) const {
  if (at_end()) {
    std::size_t col = 1;
    if (!line_.tokens.empty()) {
      const auto& last = line_.tokens.back();
      col = last.column + last.text.size();
    }
    throw ParseError(message, line_.number, col);
  }
  fail_at(*peek(), message);
}

void Cursor::fail_at(const Token& t, const std::string& message) const {
  throw ParseError(message, t.line, t.column);
}

const Token& Cursor::next(const char* what) {
  if (at_end()) fail(std::string("expected ") + what);
  return line_.tokens[pos_++];
}

std::string Cursor::word(const char* what) {
  if (at_end() || peek()->kind != Token::Kind::Word) fail(std::string("expected ") + what);
  return next(what).text;
}

std::string Cursor::name(const char* what) {
  std::string out = word(what);
  auto adjacent = [](const Token& a, const Token& b) { return a.column + a.text.size() == b.column; };
  while (pos_ + 1 < line_.tokens.size()) {
    const Token& prev = line_.tokens[pos_ - 1];
    const Token& dash = line_.tokens[pos_];
    const Token& part = line_.tokens[pos_ + 1];
    if (dash.text != "-" || part.kind == Token::Kind::Punct || !adjacent(prev, dash) || !adjacent(dash, part)) break;
    out += "-" + part.text;
    pos_ += 2;
  }
  return out;
}

Rational Cursor::number(const char* what) {
  bool negative = false;
  if (peek_is("-")) {
    negative = true;
    ++pos_;
  }
  if (at_end() || peek()->kind != Token::Kind::Number) fail(std::string("expected ") + what);
  Rational r = parse_rational(next(what).text);
  return negative ? Rational(-r) : r;
}

void Cursor::expect(const std::string& text) {
  if (!peek_is(text)) fail("expected '" + text + "'");
  ++pos_;
}

bool Cursor::accept(const std::string& text) {
  if (!peek_is(text)) return false;
  ++pos_;
  return true;
}

void Cursor::finish() {
  if (!at_end()) fail("unexpected '" + peek()->text + "'");
}

LinearExpression Cursor::expression(const SymbolCheck& check) {
  LinearExpression out;
  bool first = true;
  while (true) {
    Rational sign = 1;
    if (peek_is("-")) {
      sign = -1;
      ++pos_;
    } else if (peek_is("+")) {
      ++pos_;
    } else if (!first) {
      break;
    }
    if (at_end()) fail("expected a term");
    const Token& t = next("a term");
    if (t.kind == Token::Kind::Number) {
      Rational k = parse_rational(t.text) * sign;
      if (accept("*")) {
        if (at_end() || peek()->kind != Token::Kind::Word) fail("expected a symbol after '*'");
        const Token& s = next("a symbol");
        check(s);
        out.add_term(s.text, k);
      } else {
        out += LinearExpression(k);
      }
    } else if (t.kind == Token::Kind::Word) {
      check(t);
      Rational k = sign;
      if (accept("*")) {
        if (at_end() || peek()->kind != Token::Kind::Number) fail("expected a number after '*'");
        k *= parse_rational(next("a number").text);
      }
      out.add_term(t.text, k);
    } else {
      fail_at(t, "expected a term");
    }
    first = false;
  }
  return out;
}

}  // namespace dre::model::detail
