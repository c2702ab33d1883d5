#pragma once

#include "dre/core/rational.hpp"

#include "json.hpp"
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dre::dispatch {

/// Source of the quantities the plan only predicts. Each call is one new
/// occurrence of the named action (or action/fluent pair).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Rational duration(const std::string& action, const Rational& nominal) = 0;
  virtual Rational rate(const std::string& action, const std::string& fluent, const Rational& nominal) = 0;
};

/// Normal distribution around a mean, clamped from below and rounded to a
/// 1/1000 grid. Either absolute or relative to the nominal value.
struct Distribution {
  std::optional<Rational> mean;  // nominal when absent
  Rational stddev{0};
  bool relative = false;  // stddev and minimum are fractions of the mean
  Rational minimum{0};
  bool operator==(const Distribution&) const = default;
};

/// Matches actions by exact name or by a `prefix*` pattern.
struct Rule {
  std::string action;
  std::string fluent;  // rates only
  Distribution distribution;
  bool matches(const std::string& name) const;
  bool operator==(const Rule&) const = default;
};

class EnvironmentModel {
 public:
  EnvironmentModel() = default;
  EnvironmentModel(std::vector<Rule> durations, std::vector<Rule> rates, std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  const std::vector<Rule>& durations() const { return durations_; }
  const std::vector<Rule>& rates() const { return rates_; }

  /// Unmatched quantities keep their nominal value.
  Rational sample_duration(std::size_t episode, const std::string& action, int occurrence,
                           const Rational& nominal) const;
  Rational sample_rate(std::size_t episode, const std::string& action, const std::string& fluent, int occurrence,
                       const Rational& nominal) const;

 private:
  std::vector<Rule> durations_;
  std::vector<Rule> rates_;
  std::uint64_t seed_ = 0;
};

/// One episode's draws. Samples depend only on (seed, episode, key,
/// occurrence), so every policy sees the same world.
class EpisodeEnvironment final : public Environment {
 public:
  EpisodeEnvironment(const EnvironmentModel& model, std::size_t episode) : model_(&model), episode_(episode) {}
  Rational duration(const std::string& action, const Rational& nominal) override;
  Rational rate(const std::string& action, const std::string& fluent, const Rational& nominal) override;

 private:
  const EnvironmentModel* model_;
  std::size_t episode_;
  std::map<std::string, int> occurrences_;
};

/// {"durations": [...], "rates": [...]}; each rule
/// {"action", ["fluent"], ["mean"], "stddev" | "stddev_ratio", ["min" | "min_ratio"]}.
EnvironmentModel environment_from_json(const nlohmann::json& doc, std::uint64_t seed);
nlohmann::json environment_to_json(const EnvironmentModel& env);

}  // namespace dre::dispatch
