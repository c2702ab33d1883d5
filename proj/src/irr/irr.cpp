#include "dre/irr/irr.hpp"

#include <algorithm>
#include <chrono>

namespace dre::irr {

using lra::Formula;

bool check_in_envelope(const Dre& r, const enc::PlanEncoding& enc, const lra::Solver& solver) {
  Formula box = r.formula();
  if (solver.check(box && !enc.valid).sat) return false;
  return solver.valid(Formula::implication(Formula::conjunction({enc.tn, enc.eff, box}), enc.proofs));
}

Direction PickStrategy::pick_direction(std::size_t parameter, const IrrState& state) const {
  return state.upper_open[parameter] ? Direction::Upper : Direction::Lower;
}

std::size_t RoundRobin::pick_parameter(const std::vector<std::size_t>& eligible, const IrrState& state) const {
  if (!state.last_picked) return eligible.front();
  auto next = std::upper_bound(eligible.begin(), eligible.end(), *state.last_picked);
  return next == eligible.end() ? eligible.front() : *next;
}

std::size_t FirstEligible::pick_parameter(const std::vector<std::size_t>& eligible, const IrrState&) const {
  return eligible.front();
}

const char* event_name(Event e) {
  switch (e) {
    case Event::Accepted: return "accepted";
    case Event::Rejected: return "rejected";
    case Event::Halved: return "halved";
    case Event::FirstWidening: return "first-widening";
    case Event::Done: return "done";
  }
  return "";
}

IrrResult run_irr(const model::ParametrizedProblem& problem, const enc::PlanEncoding& enc, const IrrOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - started).count(); };

  if (options.beta <= 0) throw ConfigError("beta must be positive");
  for (const auto& [name, w] : options.omega) {
    if (!problem.find_parameter(name)) throw ConfigError("omega given for unknown parameter '" + name + "'");
    if (w <= 0) throw ConfigError("omega for '" + name + "' must be positive");
  }
  lra::BuiltinSolver builtin;
  const lra::Solver& solver = options.solver ? *options.solver : builtin;
  RoundRobin round_robin;
  const PickStrategy& strategy = options.strategy ? *options.strategy : round_robin;

  IrrState st;
  st.region = Dre::point(problem.parameters);
  st.beta = options.beta;
  const std::size_t n = problem.parameters.size();
  for (const auto& p : problem.parameters) {
    auto it = options.omega.find(p.name);
    Rational omega = it == options.omega.end() ? p.weight : it->second;
    st.delta.push_back(std::max(Rational(p.nominal * omega), options.beta));
  }
  st.upper_open.assign(n, true);
  st.lower_open.assign(n, true);

  auto emit = [&](Event event, std::optional<std::size_t> param = std::nullopt,
                  std::optional<Direction> dir = std::nullopt, bool converged = false) {
    if (!options.sink) return;
    options.sink({st.steps, event, st.region, st.delta, elapsed_ms(), param, dir, converged});
  };

  if (!check_in_envelope(st.region, enc, solver))
    throw InvalidNominal("the nominal valuation does not make the plan valid");
  emit(Event::Accepted);

  IrrResult result;
  while (true) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i)
      if (st.delta[i] >= st.beta && (st.upper_open[i] || st.lower_open[i])) eligible.push_back(i);
    if (eligible.empty()) {
      result.converged = true;
      break;
    }
    if ((options.max_steps && st.steps >= *options.max_steps) ||
        (options.max_seconds && elapsed_ms() >= *options.max_seconds * 1000)) {
      result.budget_exhausted = true;
      break;
    }
    ++st.steps;
    const std::size_t g = strategy.pick_parameter(eligible, st);
    const Direction dir = strategy.pick_direction(g, st);
    st.last_picked = g;

    Dre candidate = st.region;
    bool unchanged = false;
    if (dir == Direction::Upper) {
      candidate[g].upper += st.delta[g];
    } else {
      Rational lower = std::max(Rational(candidate[g].lower - st.delta[g]), Rational(0));
      unchanged = lower == candidate[g].lower;
      candidate[g].lower = lower;
    }

    bool accepted = false;
    if (!unchanged) {
      try {
        accepted = check_in_envelope(candidate, enc, solver);
      } catch (const ResourceLimit&) {
        ++result.resource_rejections;
      }
    }
    if (accepted) {
      st.region = std::move(candidate);
      emit(Event::Accepted, g, dir);
      if (!st.widened && !st.region.is_point()) {
        st.widened = true;
        result.first_widening_step = st.steps;
        emit(Event::FirstWidening, g, dir);
      }
      continue;
    }
    emit(Event::Rejected, g, dir);
    (dir == Direction::Upper ? st.upper_open : st.lower_open)[g] = false;
    if (!st.upper_open[g] && !st.lower_open[g]) {
      st.delta[g] /= 2;
      st.upper_open[g] = st.lower_open[g] = true;
      emit(Event::Halved, g);
    }
  }

  result.region = st.region;
  result.steps = st.steps;
  for (std::size_t i = 0; i < n; ++i)
    if (st.delta[i] >= st.beta) result.unconverged.push_back(problem.parameters[i].name);
  result.wallclock_ms = elapsed_ms();
  emit(Event::Done, std::nullopt, std::nullopt, result.converged);
  return result;
}

std::vector<std::pair<std::size_t, double>> convergence(const std::vector<Snapshot>& snapshots, const Dre& end) {
  std::vector<std::pair<std::size_t, double>> out;
  const Rational total = end.width_sum();
  for (const auto& s : snapshots) {
    if (s.event != Event::Accepted) continue;
    if (s.region.names() != end.names()) throw Error("snapshot parameters differ from the final envelope");
    double pct = total == 0 ? 100.0 : to_double(s.region.width_sum() * 100 / total);
    out.emplace_back(s.step, pct);
  }
  return out;
}

}  // namespace dre::irr
