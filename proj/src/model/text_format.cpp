#include "dre/model/io.hpp"

#include "dre/core/error.hpp"
#include "dre/model/stn.hpp"
#include "lexer.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dre::model {

using detail::Cursor;
using detail::Line;
using detail::Token;

namespace {

enum class Scope { Initial, Action, Goal, Bound };

class ProblemReader {
 public:
  explicit ProblemReader(std::string_view text) : lines_(detail::tokenize(text)) {}

  ParametrizedProblem read() {
    bool named = false;
    for (i_ = 0; i_ < lines_.size(); ++i_) {
      Cursor c(lines_[i_]);
      const Token& head = c.next("a declaration");
      const std::string& kw = head.text;
      if (kw == "problem") {
        if (named) c.fail_at(head, "duplicate problem header");
        p_.name = c.name("problem name");
        named = true;
      } else if (kw == "epsilon") {
        Rational eps = c.number("epsilon value");
        if (eps <= 0) c.fail_at(head, "epsilon must be positive");
        p_.epsilon = eps;
      } else if (kw == "param") {
        Parameter param;
        param.name = declare(c, head);
        c.expect("nominal");
        param.nominal = c.number("nominal value");
        if (param.nominal < 0) c.fail_at(head, "nominal value must be nonnegative");
        if (c.accept("weight")) {
          param.weight = c.number("weight");
          if (param.weight <= 0) c.fail_at(head, "weight must be positive");
        }
        p_.parameters.push_back(param);
      } else if (kw == "const") {
        Constant k;
        k.name = declare(c, head);
        k.value = c.number("constant value");
        p_.constants.push_back(k);
      } else if (kw == "fluent") {
        Fluent f;
        f.name = declare(c, head);
        std::string kind = c.word("'numeric' or 'bool'");
        if (kind == "numeric") {
          f.initial = c.expression(check(Scope::Initial));
        } else if (kind == "bool") {
          f.kind = FluentKind::Boolean;
          f.initial = truth(c);
        } else {
          c.fail_at(head, "fluent kind must be 'numeric' or 'bool'");
        }
        p_.fluents.push_back(f);
      } else if (kw == "action") {
        read_action(c);
      } else if (kw == "goal") {
        Goal g;
        g.condition = condition(c, Scope::Goal);
        if (c.accept("deadline")) g.deadline = c.number("deadline");
        p_.goals.push_back(g);
      } else {
        c.fail_at(head, "unknown declaration '" + kw + "'");
      }
      c.finish();
    }
    if (!named) throw ParseError("missing 'problem <name>' header", 1, 1);
    return p_;
  }

 private:
  std::string declare(Cursor& c, const Token& head) {
    const Token* t = c.peek();
    std::string name = c.word("a name");
    if (!symbols_.insert(name).second) c.fail_at(*t, "duplicate symbol '" + name + "'");
    (void)head;
    return name;
  }

  detail::SymbolCheck check(Scope scope) const {
    return [this, scope](const Token& t) {
      bool ok = p_.find_parameter(t.text) || p_.find_constant(t.text);
      if (scope != Scope::Initial) ok = ok || p_.find_fluent(t.text);
      if (!ok) throw UndeclaredSymbol(t.text, t.line, t.column);
    };
  }

  LinearExpression truth(Cursor& c) {
    std::string v = c.word("'true' or 'false'");
    if (v == "true") return 1;
    if (v == "false") return 0;
    c.fail("expected 'true' or 'false'");
  }

  const Fluent& fluent_ref(Cursor& c) {
    const Token& t = c.next("a fluent");
    const Fluent* f = p_.find_fluent(t.text);
    if (t.kind != Token::Kind::Word || !f) throw UndeclaredSymbol(t.text, t.line, t.column);
    return *f;
  }

  Condition condition(Cursor& c, Scope scope) {
    // Boolean sugar: `f` and `not f`.
    if (c.peek_is("not")) {
      c.next("not");
      const Fluent& f = fluent_ref(c);
      return {LinearExpression::symbol(f.name), Relation::LessEq};
    }
    LinearExpression left = c.expression(check(scope));
    const Token* t = c.peek();
    std::string rel = t ? t->text : "";
    if (rel != "<=" && rel != "<" && rel != "=" && rel != ">=" && rel != ">") {
      if (left.terms().size() == 1 && left.constant() == 0 && left.terms().begin()->second == 1) {
        const Fluent* f = p_.find_fluent(left.terms().begin()->first);
        if (f && f->kind == FluentKind::Boolean) return {LinearExpression(1) - left, Relation::LessEq};
      }
      c.fail("expected a comparison");
    }
    c.next("comparison");
    LinearExpression right = c.expression(check(scope));
    if (rel == "<=") return {left - right, Relation::LessEq};
    if (rel == "<") return {left - right, Relation::Less};
    if (rel == "=") return {left - right, Relation::Eq};
    if (rel == ">=") return {right - left, Relation::LessEq};
    return {right - left, Relation::Less};
  }

  void read_action(Cursor& header) {
    DurativeAction a;
    const Token* name_tok = header.peek();
    a.name = header.word("action name");
    if (p_.find_action(a.name)) header.fail_at(*name_tok, "duplicate action '" + a.name + "'");
    if (header.accept("duration")) {
      a.duration = header.number("duration");
      if (*a.duration < 0) header.fail_at(*name_tok, "duration must be nonnegative");
    }
    header.finish();
    for (++i_; i_ < lines_.size(); ++i_) {
      Cursor c(lines_[i_]);
      const Token& head = c.next("an action item");
      if (head.text == "end") {
        c.finish();
        p_.actions.push_back(std::move(a));
        return;
      }
      if (head.text != "at-start" && head.text != "at-end" && head.text != "over-all")
        c.fail_at(head, "expected 'at-start', 'over-all', 'at-end' or 'end'");
      std::string what = c.word("'condition' or 'effect'");
      if (what == "condition") {
        Condition cond = condition(c, Scope::Action);
        (head.text == "at-start" ? a.at_start : head.text == "at-end" ? a.at_end : a.over_all).push_back(cond);
      } else if (what == "effect") {
        if (head.text == "over-all") c.fail_at(head, "effects happen at-start or at-end");
        const Token& ft = *c.peek();
        const Fluent& f = fluent_ref(c);
        c.expect(":=");
        Effect e{f.name, {}};
        if (c.peek_is("true") || c.peek_is("false"))
          e.value = truth(c);
        else
          e.value = c.expression(check(Scope::Action));
        auto& list = head.text == "at-start" ? a.start_effects : a.end_effects;
        for (const auto& other : list)
          if (other.fluent == f.name) c.fail_at(ft, "fluent '" + f.name + "' assigned twice in one happening");
        list.push_back(e);
      } else {
        c.fail_at(head, "expected 'condition' or 'effect'");
      }
      c.finish();
    }
    throw ParseError("action '" + a.name + "' is missing 'end'", name_tok->line, name_tok->column);
  }

  std::vector<Line> lines_;
  std::size_t i_ = 0;
  ParametrizedProblem p_;
  std::set<std::string> symbols_;
};

std::string kind_keyword(TimepointKind k) {
  switch (k) {
    case TimepointKind::PlanStart: return "plan-start";
    case TimepointKind::ActionStart: return "start";
    case TimepointKind::ActionEnd: return "end";
  }
  return "";
}

std::string decimal(const Rational& r) {
  // Exact when the denominator divides a power of ten, fraction form otherwise.
  Rational scaled = r;
  int digits = 0;
  while (denominator_of(scaled) != 1 && digits < 12) {
    scaled *= 10;
    ++digits;
  }
  if (denominator_of(scaled) != 1) return to_string(r);
  if (digits < 3) {
    for (; digits < 3; ++digits) scaled *= 10;
  }
  std::string s = to_string(scaled < 0 ? Rational(-scaled) : scaled);
  while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
  s.insert(s.end() - digits, '.');
  return (r < 0 ? "-" : "") + s;
}

}  // namespace

ParametrizedProblem parse_problem(std::string_view text) {
  ParametrizedProblem p = ProblemReader(text).read();
  check_problem(p);
  return p;
}

std::string print_problem(const ParametrizedProblem& p) {
  std::ostringstream os;
  os << "problem " << p.name << "\n";
  os << "epsilon " << to_string(p.epsilon) << "\n";
  for (const auto& x : p.parameters) {
    os << "param " << x.name << " nominal " << to_string(x.nominal);
    if (x.weight != 1) os << " weight " << to_string(x.weight);
    os << "\n";
  }
  for (const auto& k : p.constants) os << "const " << k.name << " " << to_string(k.value) << "\n";
  for (const auto& f : p.fluents) {
    os << "fluent " << f.name;
    if (f.kind == FluentKind::Boolean && f.initial.is_constant() &&
        (f.initial.constant() == 0 || f.initial.constant() == 1))
      os << " bool " << (f.initial.constant() == 1 ? "true" : "false") << "\n";
    else
      os << " numeric " << f.initial.str() << "\n";
  }
  for (const auto& a : p.actions) {
    os << "action " << a.name;
    if (a.duration) os << " duration " << to_string(*a.duration);
    os << "\n";
    for (const auto& c : a.at_start) os << "  at-start condition " << c.str() << "\n";
    for (const auto& c : a.over_all) os << "  over-all condition " << c.str() << "\n";
    for (const auto& c : a.at_end) os << "  at-end condition " << c.str() << "\n";
    for (const auto& e : a.start_effects) os << "  at-start effect " << e.fluent << " := " << e.value.str() << "\n";
    for (const auto& e : a.end_effects) os << "  at-end effect " << e.fluent << " := " << e.value.str() << "\n";
    os << "end\n";
  }
  for (const auto& g : p.goals) {
    os << "goal " << g.condition.str();
    if (g.deadline) os << " deadline " << to_string(*g.deadline);
    os << "\n";
  }
  return os.str();
}

ParametrizedSTNPlan parse_plan(std::string_view text, const ParametrizedProblem& problem) {
  ParametrizedSTNPlan plan;
  bool named = false;
  bool ordered = false;
  for (const Line& line : detail::tokenize(text)) {
    Cursor c(line);
    const Token& head = c.next("a declaration");
    if (head.text == "plan") {
      if (named) c.fail_at(head, "duplicate plan header");
      plan.name = c.name("plan name");
      named = true;
    } else if (head.text == "timepoint") {
      Timepoint tp;
      const Token& nt = *c.peek();
      tp.name = c.word("timepoint name");
      if (plan.index_of(tp.name)) c.fail_at(nt, "duplicate timepoint '" + tp.name + "'");
      std::string kind = c.word("'plan-start', 'start' or 'end'");
      if (kind == "plan-start") {
        tp.kind = TimepointKind::PlanStart;
      } else if (kind == "start" || kind == "end") {
        tp.kind = kind == "start" ? TimepointKind::ActionStart : TimepointKind::ActionEnd;
        const Token& at = *c.peek();
        tp.action = c.word("action name");
        if (!problem.find_action(tp.action)) throw UndeclaredSymbol(tp.action, at.line, at.column);
        Rational k = c.number("instance number");
        if (denominator_of(k) != 1 || k < 1) c.fail_at(at, "instance number must be a positive integer");
        tp.instance = static_cast<int>(k.convert_to<long>());
      } else {
        c.fail_at(nt, "timepoint kind must be 'plan-start', 'start' or 'end'");
      }
      plan.timepoints.push_back(tp);
    } else if (head.text == "order") {
      if (ordered) c.fail_at(head, "duplicate order declaration");
      ordered = true;
      while (!c.at_end()) {
        const Token& t = c.next("timepoint");
        auto idx = plan.index_of(t.text);
        if (!idx) throw UndeclaredSymbol(t.text, t.line, t.column);
        plan.order.push_back(*idx);
      }
    } else if (head.text == "constraint") {
      StnConstraint k;
      const Token& lt = *c.peek();
      k.later = c.word("timepoint");
      if (!plan.index_of(k.later)) throw UndeclaredSymbol(k.later, lt.line, lt.column);
      c.expect("-");
      const Token& et = *c.peek();
      k.earlier = c.word("timepoint");
      if (!plan.index_of(k.earlier)) throw UndeclaredSymbol(k.earlier, et.line, et.column);
      c.expect("<=");
      k.bound = c.expression([&](const Token& t) {
        if (!problem.find_parameter(t.text)) throw UndeclaredSymbol(t.text, t.line, t.column);
      });
      plan.constraints.push_back(k);
    } else {
      c.fail_at(head, "unknown declaration '" + head.text + "'");
    }
    c.finish();
  }
  if (!named) throw ParseError("missing 'plan <name>' header", 1, 1);
  if (!ordered)
    for (std::size_t i = 0; i < plan.timepoints.size(); ++i) plan.order.push_back(i);
  check_plan(plan, problem);
  return plan;
}

std::string print_plan(const ParametrizedSTNPlan& plan) {
  std::ostringstream os;
  os << "plan " << plan.name << "\n";
  for (const auto& tp : plan.timepoints) {
    os << "timepoint " << tp.name << " " << kind_keyword(tp.kind);
    if (tp.kind != TimepointKind::PlanStart) os << " " << tp.action << " " << tp.instance;
    os << "\n";
  }
  os << "order";
  for (std::size_t i : plan.order) os << " " << plan.timepoints[i].name;
  os << "\n";
  for (const auto& k : plan.constraints)
    os << "constraint " << k.later << " - " << k.earlier << " <= " << k.bound.str() << "\n";
  return os.str();
}

TimeTriggeredPlan parse_time_triggered_plan(std::string_view text) {
  TimeTriggeredPlan out;
  for (const Line& line : detail::tokenize(text)) {
    Cursor c(line);
    TimedAction a;
    a.start = c.number("start time");
    if (a.start < 0) c.fail("start time must be nonnegative");
    c.expect(":");
    c.expect("(");
    a.action = c.word("action name");
    c.expect(")");
    c.expect("[");
    a.duration = c.number("duration");
    if (a.duration < 0) c.fail("duration must be nonnegative");
    c.expect("]");
    c.finish();
    out.push_back(a);
  }
  return out;
}

std::string print_time_triggered_plan(const TimeTriggeredPlan& plan) {
  std::ostringstream os;
  for (const auto& a : plan) os << decimal(a.start) << ": (" << a.action << ") [" << decimal(a.duration) << "]\n";
  return os.str();
}

void check_problem(const ParametrizedProblem& p) {
  if (p.epsilon <= 0) throw ParseError("epsilon must be positive");
  std::set<std::string> names;
  auto declare = [&](const std::string& n) {
    if (!names.insert(n).second) throw ParseError("duplicate symbol '" + n + "'");
  };
  for (const auto& x : p.parameters) {
    declare(x.name);
    if (x.nominal < 0) throw ParseError("parameter '" + x.name + "' has a negative nominal value");
    if (x.weight <= 0) throw ParseError("parameter '" + x.name + "' has a nonpositive weight");
  }
  for (const auto& k : p.constants) declare(k.name);
  for (const auto& f : p.fluents) declare(f.name);
  auto known = [&](const LinearExpression& e, bool fluents_ok) {
    for (const auto& [s, c] : e.terms()) {
      bool ok = p.find_parameter(s) || p.find_constant(s) || (fluents_ok && p.find_fluent(s));
      if (!ok) throw UndeclaredSymbol(s);
    }
  };
  for (const auto& f : p.fluents) known(f.initial, false);
  std::set<std::string> actions;
  for (const auto& a : p.actions) {
    if (!actions.insert(a.name).second) throw ParseError("duplicate action '" + a.name + "'");
    for (const auto* list : {&a.at_start, &a.over_all, &a.at_end})
      for (const auto& c : *list) known(c.lhs, true);
    for (const auto* list : {&a.start_effects, &a.end_effects}) {
      std::set<std::string> written;
      for (const auto& e : *list) {
        if (!p.find_fluent(e.fluent)) throw UndeclaredSymbol(e.fluent);
        if (!written.insert(e.fluent).second)
          throw ParseError("action '" + a.name + "' assigns '" + e.fluent + "' twice in one happening");
        known(e.value, true);
      }
    }
  }
  for (const auto& g : p.goals) known(g.condition.lhs, true);
}

void check_plan(const ParametrizedSTNPlan& plan, const ParametrizedProblem& problem) {
  std::size_t starts = 0;
  std::set<std::string> names;
  std::map<std::pair<std::string, int>, std::pair<int, int>> seen;  // (action, k) -> (#start, #end)
  for (const auto& tp : plan.timepoints) {
    if (!names.insert(tp.name).second) throw ParseError("duplicate timepoint '" + tp.name + "'");
    if (tp.kind == TimepointKind::PlanStart) {
      ++starts;
      continue;
    }
    if (!problem.find_action(tp.action)) throw UndeclaredSymbol(tp.action);
    auto& counts = seen[{tp.action, tp.instance}];
    (tp.kind == TimepointKind::ActionStart ? counts.first : counts.second)++;
  }
  if (starts != 1) throw ParseError("a plan needs exactly one plan-start timepoint");
  for (const auto& [key, counts] : seen) {
    std::string inst = key.first + " " + std::to_string(key.second);
    if (counts.first == 0) throw ParseError("action instance '" + inst + "' has no start timepoint");
    if (counts.second == 0) throw ParseError("action instance '" + inst + "' has no end timepoint");
    if (counts.first > 1 || counts.second > 1) throw ParseError("action instance '" + inst + "' is repeated");
  }
  std::vector<bool> hit(plan.timepoints.size(), false);
  for (std::size_t i : plan.order) {
    if (i >= hit.size() || hit[i]) throw ParseError("order must list every timepoint exactly once");
    hit[i] = true;
  }
  if (plan.order.size() != plan.timepoints.size()) throw ParseError("order must list every timepoint exactly once");
  if (plan.timepoints[plan.order.front()].kind != TimepointKind::PlanStart)
    throw ParseError("the plan start must come first in the order");
  auto pos = plan.positions();
  for (const auto& inst : plan.instances())
    if (pos[inst.start] > pos[inst.end])
      throw ParseError("end of '" + inst.action + " " + std::to_string(inst.instance) + "' ordered before its start");
  for (const auto& k : plan.constraints) {
    if (!plan.index_of(k.later)) throw UndeclaredSymbol(k.later);
    if (!plan.index_of(k.earlier)) throw UndeclaredSymbol(k.earlier);
    for (const auto& [s, c] : k.bound.terms())
      if (!problem.find_parameter(s)) throw UndeclaredSymbol(s);
  }
  if (!earliest_schedule(problem, plan, problem.nominal_valuation()))
    throw InconsistentPlan("plan '" + plan.name + "' has no schedule at the nominal valuation");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace dre::model
