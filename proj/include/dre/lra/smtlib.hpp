#pragma once

#include "dre/lra/solver.hpp"

#include <string>
#include <string_view>

namespace dre::lra {

/// S-expression rendering of a formula over Real constants.
std::string smtlib_term(const Formula& f);

/// Complete LRA script: set-logic, one declare-const per free symbol, a
/// single assert, check-sat and get-model.
std::string smtlib_script(const Formula& f);

struct SmtResponse {
  enum class Status { Sat, Unsat, Unknown };
  Status status = Status::Unknown;
  Assignment model;
};

/// Parses a solver's reply: "sat"/"unsat"/"unknown" optionally followed by a
/// model of (define-fun name () Real value) entries. Throws ParseError.
SmtResponse parse_smt_response(std::string_view text);

/// Runs `executable <script-file>` per query. Sat answers are accepted only
/// when the returned model satisfies the formula under exact evaluation.
class ExternalSolver final : public Solver {
 public:
  explicit ExternalSolver(std::string executable) : executable_(std::move(executable)) {}
  SatResult check(const Formula& f) const override;

 private:
  std::string executable_;
};

}  // namespace dre::lra
