#pragma once

#include "dre/core/error.hpp"
#include "dre/encoder/encoder.hpp"
#include "dre/irr/dre.hpp"
#include "dre/lra/solver.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace dre::irr {

/// The nominal point itself is not a valid envelope: the original plan fails.
class InvalidNominal : public Error {
 public:
  using Error::Error;
};

/// Both containment checks: no point of R leaves enc_valid, and every
/// schedule under R satisfies the proof obligations. ResourceLimit propagates.
bool check_in_envelope(const Dre& r, const enc::PlanEncoding& enc, const lra::Solver& solver);

enum class Direction { Upper, Lower };

struct IrrState {
  Dre region;
  std::vector<Rational> delta;
  std::vector<bool> upper_open;  // UB in Theta
  std::vector<bool> lower_open;  // LB in Theta
  Rational beta;
  std::size_t steps = 0;
  bool widened = false;
  std::optional<std::size_t> last_picked;
};

class PickStrategy {
 public:
  virtual ~PickStrategy() = default;
  /// `eligible` is nonempty and sorted.
  virtual std::size_t pick_parameter(const std::vector<std::size_t>& eligible, const IrrState& state) const = 0;
  virtual Direction pick_direction(std::size_t parameter, const IrrState& state) const;
};

/// Next eligible parameter after the last one picked, in declaration order;
/// upper bound before lower bound.
class RoundRobin final : public PickStrategy {
 public:
  std::size_t pick_parameter(const std::vector<std::size_t>& eligible, const IrrState& state) const override;
};

/// Always the first eligible parameter: exhausts one dimension at a time.
class FirstEligible final : public PickStrategy {
 public:
  std::size_t pick_parameter(const std::vector<std::size_t>& eligible, const IrrState& state) const override;
};

enum class Event { Accepted, Rejected, Halved, FirstWidening, Done };
const char* event_name(Event e);

struct Snapshot {
  std::size_t step = 0;
  Event event = Event::Accepted;
  Dre region;
  std::vector<Rational> delta;
  double wallclock_ms = 0;
  std::optional<std::size_t> parameter;
  std::optional<Direction> direction;
  bool converged = false;  // meaningful on Done
};

using SnapshotSink = std::function<void(const Snapshot&)>;

struct IrrOptions {
  Rational beta{1};
  std::map<std::string, Rational> omega;  // default weight: the parameter's own
  std::optional<std::size_t> max_steps;
  std::optional<double> max_seconds;
  const lra::Solver* solver = nullptr;       // builtin when null
  const PickStrategy* strategy = nullptr;    // round-robin when null
  SnapshotSink sink;
};

struct IrrResult {
  Dre region;
  bool converged = false;
  bool budget_exhausted = false;
  std::size_t steps = 0;
  std::optional<std::size_t> first_widening_step;
  double wallclock_ms = 0;
  std::vector<std::string> unconverged;  // Delta still >= beta at exit
  std::size_t resource_rejections = 0;
};

/// Incremental rectangular robustification from the nominal point.
/// Throws InvalidNominal when the nominal point fails the containment check.
IrrResult run_irr(const model::ParametrizedProblem& problem, const enc::PlanEncoding& enc, const IrrOptions& options);

/// (step, percentage) for each accepted snapshot; 100 everywhere when the
/// final rectangle is a single point.
std::vector<std::pair<std::size_t, double>> convergence(const std::vector<Snapshot>& snapshots, const Dre& end);

}  // namespace dre::irr
