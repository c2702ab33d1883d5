#pragma once
// DELIVERY-S: one robot takes an order, runs its preparation steps in
// sequence, and delivers it. Disposing of a held order resets its progress.

#include "dre/model/parametrize.hpp"
#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dre::dispatch {

struct DeliveryOrder {
  std::string id;
  std::vector<Rational> prep;  // duration of each preparation step
  Rational deadline;
};

struct DeliveryBattery {
  Rational capacity{200};
  Rational take_rate{4};
  Rational deliver_rate{6};
  Rational factor{5};  // consumption per happening is factor * rate
};

struct DeliverySpec {
  std::string name = "delivery-s";
  Rational epsilon = Rational(1) / 1000;
  Rational take{20};
  Rational deliver{30};
  Rational dispose{10};
  std::vector<DeliveryOrder> orders;
  std::optional<DeliveryBattery> battery;
  /// Parametrize prep durations (duration campaign) or battery rates.
  bool rate_parameters = false;
};

struct DeliveryInstance {
  model::ParametrizedProblem problem;
  model::TimeTriggeredPlan plan;
  std::vector<model::Directive> directives;
};

/// The bundled two-order instance, with or without the battery.
DeliverySpec bundled_delivery(bool battery);

std::string delivery_problem_text(const DeliverySpec& spec);
/// Problem, the replanner's plan from the initial state, and directives.
DeliveryInstance make_delivery(const DeliverySpec& spec);

/// Naive replanner: dispose of whatever is held, then take, prepare and
/// deliver every undelivered order, earliest deadline first, with epsilon
/// gaps. nullopt when that plan misses a deadline or a condition under
/// nominal values. Works on any problem following the DELIVERY-S naming.
std::optional<model::TimeTriggeredPlan> naive_delivery_replan(const model::ParametrizedProblem& current);

}  // namespace dre::dispatch
