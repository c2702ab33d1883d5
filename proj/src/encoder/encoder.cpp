#include "dre/encoder/encoder.hpp"

#include "dre/core/error.hpp"
#include "dre/lra/smtlib.hpp"
#include "dre/model/analysis.hpp"

#include <filesystem>
#include <fstream>
#include <map>

namespace dre::enc {

using lra::Atom;
using lra::Formula;
using model::Happening;

namespace {

LinearExpression var(const std::string& name) { return LinearExpression::symbol(name); }

/// Binds fluents to the state variables of `index` and constants to values.
std::map<std::string, LinearExpression> state_bindings(const model::ParametrizedProblem& p, std::size_t index) {
  std::map<std::string, LinearExpression> b;
  for (const auto& f : p.fluents) b[f.name] = var(state_var(index, f.name));
  for (const auto& c : p.constants) b[c.name] = LinearExpression(c.value);
  return b;
}

Formula condition_at(const model::Condition& c, const std::map<std::string, LinearExpression>& bindings) {
  LinearExpression lhs = c.lhs.substitute(bindings);
  switch (c.relation) {
    case model::Relation::LessEq: return Atom(lhs, lra::Relation::LessEq);
    case model::Relation::Less: return Atom(lhs, lra::Relation::Less);
    case model::Relation::Eq: return Atom(lhs, lra::Relation::Eq);
  }
  return Formula::top();
}

LinearExpression time_of(const model::ParametrizedSTNPlan& plan, const Happening& h) {
  return var(time_var(plan.timepoints[h.timepoint].name));
}

}  // namespace

std::string time_var(const std::string& timepoint) { return "time." + timepoint; }

std::string state_var(std::size_t index, const std::string& fluent) {
  return "state." + std::to_string(index) + "." + fluent;
}

std::set<std::string> EncodingVariables::existential() const {
  std::set<std::string> out(time.begin(), time.end());
  for (const auto& row : state) out.insert(row.begin(), row.end());
  return out;
}

EncodingVariables encoding_variables(const model::ParametrizedProblem& p, const model::ParametrizedSTNPlan& plan) {
  EncodingVariables v;
  for (const auto& tp : plan.timepoints) v.time.push_back(time_var(tp.name));
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    std::vector<std::string> row;
    for (const auto& f : p.fluents) row.push_back(state_var(i, f.name));
    v.state.push_back(std::move(row));
  }
  for (const auto& x : p.parameters) v.parameters.push_back(x.name);
  return v;
}

Formula encode_tn(const model::ParametrizedProblem& p, const model::ParametrizedSTNPlan& plan) {
  std::map<std::string, LinearExpression> consts;
  for (const auto& c : p.constants) consts[c.name] = LinearExpression(c.value);
  std::vector<Formula> parts;
  for (const auto& k : plan.constraints)
    parts.push_back(Atom::less_eq(var(time_var(k.later)) - var(time_var(k.earlier)), k.bound.substitute(consts)));
  auto seq = model::happenings(p, plan);
  for (const auto& e : model::order_chain(p, seq))
    parts.push_back(Atom::less_eq(time_of(plan, seq[e.later]) - time_of(plan, seq[e.earlier]), e.bound));
  parts.push_back(Atom::equal(time_of(plan, seq.front()), 0));
  return Formula::conjunction(std::move(parts));
}

Formula encode_eff(const model::ParametrizedProblem& p, const model::ParametrizedSTNPlan& plan) {
  std::vector<Formula> parts;
  std::map<std::string, LinearExpression> consts;
  for (const auto& c : p.constants) consts[c.name] = LinearExpression(c.value);
  for (const auto& f : p.fluents) parts.push_back(Atom::equal(var(state_var(0, f.name)), f.initial.substitute(consts)));
  auto seq = model::happenings(p, plan);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    auto pre = state_bindings(p, i - 1);
    std::map<std::string, const model::Effect*> written;
    for (const auto& e : seq[i].effects()) {
      if (!written.emplace(e.fluent, &e).second)
        throw Error("fluent '" + e.fluent + "' assigned twice in one happening");
    }
    for (const auto& f : p.fluents) {
      auto it = written.find(f.name);
      LinearExpression next = it == written.end() ? var(state_var(i - 1, f.name)) : it->second->value.substitute(pre);
      parts.push_back(Atom::equal(var(state_var(i, f.name)), next));
    }
  }
  return Formula::conjunction(std::move(parts));
}

Formula encode_proofs(const model::ParametrizedProblem& p, const model::ParametrizedSTNPlan& plan) {
  std::vector<Formula> parts;
  auto seq = model::happenings(p, plan);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    auto pre = state_bindings(p, i - 1);
    for (const auto& c : seq[i].conditions()) parts.push_back(condition_at(c, pre));
    if (!seq[i].is_start) continue;
    std::size_t end = i;
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (!seq[j].is_start && seq[j].action == seq[i].action && seq[j].instance == seq[i].instance) end = j;
    for (std::size_t k = i; k < end; ++k)
      for (const auto& c : seq[i].action->over_all) parts.push_back(condition_at(c, state_bindings(p, k)));
  }
  auto final_state = state_bindings(p, seq.size() - 1);
  for (const auto& g : p.goals) {
    parts.push_back(condition_at(g.condition, final_state));
    if (g.deadline)
      parts.push_back(Atom::less_eq(time_of(plan, seq[model::goal_achiever(p, seq, g)]), *g.deadline));
  }
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 2; j < seq.size(); ++j)
      if (model::interfere(p, seq[i], seq[j]))
        parts.push_back(Atom::less_eq(time_of(plan, seq[i]) + p.epsilon, time_of(plan, seq[j])));
  return Formula::conjunction(std::move(parts));
}

Formula build_enc_valid(const Formula& tn, const Formula& eff, const EncodingVariables& vars,
                        const lra::Limits& limits) {
  return lra::eliminate_exists(vars.existential(), tn && eff, limits);
}

PlanEncoding encode(const model::ParametrizedProblem& problem, const model::ParametrizedSTNPlan& plan,
                    const lra::Limits& limits) {
  PlanEncoding e;
  e.vars = encoding_variables(problem, plan);
  e.tn = encode_tn(problem, plan);
  e.eff = encode_eff(problem, plan);
  e.proofs = encode_proofs(problem, plan);
  e.valid = build_enc_valid(e.tn, e.eff, e.vars, limits);
  return e;
}

void dump_encoding(const PlanEncoding& enc, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, const Formula*> files[] = {
      {"tn.smt2", &enc.tn}, {"eff.smt2", &enc.eff}, {"proofs.smt2", &enc.proofs}, {"valid.smt2", &enc.valid}};
  for (const auto& [name, f] : files) {
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw Error("cannot write '" + (std::filesystem::path(dir) / name).string() + "'");
    out << lra::smtlib_script(*f);
  }
}

model::Schedule schedule_from_model(const model::ParametrizedSTNPlan& plan, const Assignment& m) {
  model::Schedule s;
  for (const auto& tp : plan.timepoints) {
    auto it = m.find(time_var(tp.name));
    s[tp.name] = it == m.end() ? Rational(0) : it->second;
  }
  return s;
}

}  // namespace dre::enc
