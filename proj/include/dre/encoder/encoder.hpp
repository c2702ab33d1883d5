#pragma once

#include "dre/lra/solver.hpp"
#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <set>
#include <string>
#include <vector>

namespace dre::enc {

/// Time variables are named "time.<timepoint>", state variables
/// "state.<i>.<fluent>" (the state after the i-th happening of the order);
/// parameters keep their own names, which never contain '.'.
std::string time_var(const std::string& timepoint);
std::string state_var(std::size_t index, const std::string& fluent);

struct EncodingVariables {
  std::vector<std::string> time;                 // per timepoint, plan declaration order
  std::vector<std::vector<std::string>> state;   // [happening index][fluent index]
  std::vector<std::string> parameters;           // problem declaration order

  std::set<std::string> existential() const;     // time and state variables
};

struct PlanEncoding {
  lra::Formula tn;
  lra::Formula eff;
  lra::Formula proofs;
  lra::Formula valid;  // over parameters only
  EncodingVariables vars;
};

lra::Formula encode_tn(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan);
lra::Formula encode_eff(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan);
lra::Formula encode_proofs(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan);

/// exists X. (tn and eff), quantifier-free over the parameters.
lra::Formula build_enc_valid(const lra::Formula& tn, const lra::Formula& eff, const EncodingVariables& vars,
                             const lra::Limits& limits = {});

EncodingVariables encoding_variables(const model::ParametrizedProblem& problem,
                                     const model::ParametrizedSTNPlan& plan);

/// All four formulas. Constants are replaced by their values throughout.
PlanEncoding encode(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan,
                    const lra::Limits& limits = {});

/// Writes tn.smt2, eff.smt2, proofs.smt2 and valid.smt2 into `dir`.
void dump_encoding(const PlanEncoding& enc, const std::string& dir);

/// Reads the schedule of a plan out of a model over the encoding variables.
model::Schedule schedule_from_model(const model::ParametrizedSTNPlan& plan, const Assignment& m);

}  // namespace dre::enc
