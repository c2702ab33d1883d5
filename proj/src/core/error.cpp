#include "dre/core/error.hpp"

namespace dre {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  if (line == 0) return message;
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)), line_(line), column_(column) {}

UndeclaredSymbol::UndeclaredSymbol(const std::string& symbol, std::size_t line, std::size_t column)
    : ParseError("undeclared symbol '" + symbol + "'", line, column), symbol_(symbol) {}

}  // namespace dre
