#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dre {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UndeclaredSymbol : public ParseError {
 public:
  UndeclaredSymbol(const std::string& symbol, std::size_t line = 0, std::size_t column = 0);
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

/// The nominal schedule of a plan violates its own temporal constraints.
class InconsistentPlan : public Error {
 public:
  using Error::Error;
};

/// A solver or eliminator exceeded its configured budget. Never a verdict.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dre
