#include "dre/dispatch/environment.hpp"

#include "dre/core/error.hpp"
#include "config.hpp"

#include <cmath>
#include <random>

namespace dre::dispatch {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t stream_key(std::uint64_t seed, std::size_t episode, const std::string& key, int occurrence) {
  std::uint64_t h = 14695981039346656037ull;
  std::uint64_t ep = episode;
  std::int64_t occ = occurrence;
  h = fnv1a(h, &seed, sizeof seed);
  h = fnv1a(h, &ep, sizeof ep);
  h = fnv1a(h, key.data(), key.size());
  return fnv1a(h, &occ, sizeof occ);
}

Rational draw(const Distribution& d, const Rational& nominal, std::uint64_t key) {
  Rational mean = d.mean.value_or(nominal);
  Rational sd = d.relative ? d.stddev * mean : d.stddev;
  Rational lo = d.relative ? d.minimum * mean : d.minimum;
  if (sd == 0) return std::max(mean, lo);
  std::mt19937_64 rng(key);
  std::normal_distribution<double> normal(to_double(mean), to_double(sd));
  Rational x(static_cast<long long>(std::llround(normal(rng) * 1000)), 1000);
  return std::max(x, lo);
}

const Rule* find(const std::vector<Rule>& rules, const std::string& action, const std::string& fluent) {
  for (const auto& r : rules)
    if (r.matches(action) && r.fluent == fluent) return &r;
  return nullptr;
}

Rule rule_from_json(const nlohmann::json& j, bool rate) {
  using detail::rational_field;
  detail::allow_only(j, {"action", "fluent", "mean", "stddev", "stddev_ratio", "min", "min_ratio"}, "environment rule");
  Rule r;
  r.action = detail::string_field(j, "action");
  if (rate) r.fluent = detail::string_field(j, "fluent");
  else if (j.contains("fluent")) throw ConfigError("duration rules take no 'fluent'");
  if (j.contains("mean")) r.distribution.mean = rational_field(j, "mean");
  bool abs = j.contains("stddev") || j.contains("min");
  bool rel = j.contains("stddev_ratio") || j.contains("min_ratio");
  if (abs && rel) throw ConfigError("rule for '" + r.action + "' mixes absolute and relative spreads");
  r.distribution.relative = rel;
  r.distribution.stddev = rational_field(j, rel ? "stddev_ratio" : "stddev");
  if (j.contains(rel ? "min_ratio" : "min")) r.distribution.minimum = rational_field(j, rel ? "min_ratio" : "min");
  if (r.distribution.stddev < 0) throw ConfigError("negative standard deviation for '" + r.action + "'");
  if (r.distribution.minimum < 0) throw ConfigError("negative minimum for '" + r.action + "'");
  return r;
}

nlohmann::json rule_to_json(const Rule& r, bool rate) {
  nlohmann::json j;
  j["action"] = r.action;
  if (rate) j["fluent"] = r.fluent;
  if (r.distribution.mean) j["mean"] = to_string(*r.distribution.mean);
  j[r.distribution.relative ? "stddev_ratio" : "stddev"] = to_string(r.distribution.stddev);
  j[r.distribution.relative ? "min_ratio" : "min"] = to_string(r.distribution.minimum);
  return j;
}

}  // namespace

bool Rule::matches(const std::string& name) const {
  if (!action.empty() && action.back() == '*') return name.compare(0, action.size() - 1, action, 0, action.size() - 1) == 0;
  return name == action;
}

EnvironmentModel::EnvironmentModel(std::vector<Rule> durations, std::vector<Rule> rates, std::uint64_t seed)
    : durations_(std::move(durations)), rates_(std::move(rates)), seed_(seed) {}

Rational EnvironmentModel::sample_duration(std::size_t episode, const std::string& action, int occurrence,
                                           const Rational& nominal) const {
  const Rule* r = find(durations_, action, "");
  if (!r) return nominal;
  return draw(r->distribution, nominal, stream_key(seed_, episode, action, occurrence));
}

Rational EnvironmentModel::sample_rate(std::size_t episode, const std::string& action, const std::string& fluent,
                                       int occurrence, const Rational& nominal) const {
  const Rule* r = find(rates_, action, fluent);
  if (!r) return nominal;
  return draw(r->distribution, nominal, stream_key(seed_, episode, action + "/" + fluent, occurrence));
}

Rational EpisodeEnvironment::duration(const std::string& action, const Rational& nominal) {
  return model_->sample_duration(episode_, action, ++occurrences_[action], nominal);
}

Rational EpisodeEnvironment::rate(const std::string& action, const std::string& fluent, const Rational& nominal) {
  return model_->sample_rate(episode_, action, fluent, ++occurrences_[action + "/" + fluent], nominal);
}

EnvironmentModel environment_from_json(const nlohmann::json& doc, std::uint64_t seed) {
  if (!doc.is_object()) throw ConfigError("environment must be an object");
  detail::allow_only(doc, {"durations", "rates"}, "environment");
  std::vector<Rule> durations, rates;
  for (const char* key : {"durations", "rates"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_array()) throw ConfigError(std::string("environment '") + key + "' must be an array");
    for (const auto& r : doc[key])
      (key[0] == 'd' ? durations : rates).push_back(rule_from_json(r, key[0] == 'r'));
  }
  return EnvironmentModel(std::move(durations), std::move(rates), seed);
}

nlohmann::json environment_to_json(const EnvironmentModel& env) {
  nlohmann::json j = {{"durations", nlohmann::json::array()}, {"rates", nlohmann::json::array()}};
  for (const auto& r : env.durations()) j["durations"].push_back(rule_to_json(r, false));
  for (const auto& r : env.rates()) j["rates"].push_back(rule_to_json(r, true));
  return j;
}

}  // namespace dre::dispatch
