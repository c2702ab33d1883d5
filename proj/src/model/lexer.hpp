#pragma once

#include "dre/core/error.hpp"
#include "dre/core/linear_expression.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dre::model::detail {

struct Token {
  enum class Kind { Word, Number, Punct } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

/// Tokens of one non-blank line. ';' starts a comment.
struct Line {
  std::vector<Token> tokens;
  std::size_t number;
};

std::vector<Line> tokenize(std::string_view text);

/// Symbol check used while reading expressions; throws on rejection.
using SymbolCheck = std::function<void(const Token&)>;

class Cursor {
 public:
  explicit Cursor(const Line& line) : line_(line) {}

  bool at_end() const { return pos_ >= line_.tokens.size(); }
  const Token* peek() const { return at_end() ? nullptr : &line_.tokens[pos_]; }
  bool peek_is(const std::string& text) const { return peek() && peek()->text == text; }

  const Token& next(const char* what);
  std::string word(const char* what);
  /// A word, or several joined by '-' with no surrounding blanks ("unit-plan").
  std::string name(const char* what);
  Rational number(const char* what);
  void expect(const std::string& text);
  bool accept(const std::string& text);
  void finish();

  LinearExpression expression(const SymbolCheck& check);

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const;

 private:
  const Line& line_;
  std::size_t pos_ = 0;
};

}  // namespace dre::model::detail
