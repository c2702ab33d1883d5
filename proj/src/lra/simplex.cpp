#include "simplex.hpp"

#include "dre/core/error.hpp"

#include <algorithm>

namespace dre::lra::detail {

Simplex::Simplex(int num_vars)
    : value_(num_vars), lower_(num_vars), upper_(num_vars), row_of_(num_vars, -1) {}

int Simplex::add_row(const Form& form) {
  int slack = num_vars();
  value_.push_back({});
  lower_.emplace_back();
  upper_.emplace_back();
  std::map<int, Rational> row;
  DeltaRational v;
  for (const auto& [var, coef] : form) {
    if (coef == 0) continue;
    row[var] += coef;
    v += value_[var] * coef;
  }
  value_.back() = v;
  row_of_.push_back(static_cast<int>(rows_.size()));
  basic_of_row_.push_back(slack);
  rows_.push_back(std::move(row));
  return slack;
}

bool Simplex::assert_upper(int var, const DeltaRational& bound) {
  if (upper_[var] && *upper_[var] <= bound) return true;
  if (lower_[var] && bound < *lower_[var]) return false;
  trail_.push_back({var, true, upper_[var]});
  upper_[var] = bound;
  if (row_of_[var] < 0 && value_[var] > bound) update(var, bound);
  return true;
}

bool Simplex::assert_lower(int var, const DeltaRational& bound) {
  if (lower_[var] && bound <= *lower_[var]) return true;
  if (upper_[var] && *upper_[var] < bound) return false;
  trail_.push_back({var, false, lower_[var]});
  lower_[var] = bound;
  if (row_of_[var] < 0 && value_[var] < bound) update(var, bound);
  return true;
}

void Simplex::backtrack(std::size_t mark) {
  while (trail_.size() > mark) {
    auto& e = trail_.back();
    (e.upper ? upper_ : lower_)[e.var] = std::move(e.previous);
    trail_.pop_back();
  }
}

void Simplex::update(int var, const DeltaRational& v) {
  DeltaRational diff = v - value_[var];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto it = rows_[r].find(var);
    if (it != rows_[r].end()) value_[basic_of_row_[r]] += diff * it->second;
  }
  value_[var] = v;
}

void Simplex::pivot_and_update(int basic, int nonbasic, const DeltaRational& v) {
  int r = row_of_[basic];
  const Rational& a = rows_[r].at(nonbasic);
  DeltaRational theta = (v - value_[basic]) * (Rational(1) / a);
  value_[basic] = v;
  value_[nonbasic] += theta;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (static_cast<int>(k) == r) continue;
    auto it = rows_[k].find(nonbasic);
    if (it != rows_[k].end()) value_[basic_of_row_[k]] += theta * it->second;
  }
  pivot(r, nonbasic);
}

void Simplex::pivot(int r, int nonbasic) {
  int basic = basic_of_row_[r];
  auto& row = rows_[r];
  Rational a = row.at(nonbasic);
  // basic = a*nonbasic + rest  =>  nonbasic = basic/a - rest/a
  std::map<int, Rational> fresh;
  Rational inv = Rational(1) / a;
  for (const auto& [var, coef] : row) {
    if (var == nonbasic) continue;
    fresh.emplace(var, -coef * inv);
  }
  fresh.emplace(basic, inv);
  row = std::move(fresh);
  row_of_[basic] = -1;
  row_of_[nonbasic] = r;
  basic_of_row_[r] = nonbasic;

  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (static_cast<int>(k) == r) continue;
    auto& other = rows_[k];
    auto it = other.find(nonbasic);
    if (it == other.end()) continue;
    Rational c = it->second;
    other.erase(it);
    for (const auto& [var, coef] : rows_[r]) {
      auto [slot, inserted] = other.emplace(var, c * coef);
      if (!inserted) {
        slot->second += c * coef;
        if (slot->second == 0) other.erase(slot);
      }
    }
  }
}

bool Simplex::check(std::size_t& pivot_budget) {
  while (true) {
    // Bland's rule: smallest violating basic variable.
    int violating = -1;
    bool below = false;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int b = basic_of_row_[r];
      if (violating >= 0 && b > violating) continue;
      if (lower_[b] && value_[b] < *lower_[b]) {
        violating = b;
        below = true;
      } else if (upper_[b] && value_[b] > *upper_[b]) {
        violating = b;
        below = false;
      }
    }
    if (violating < 0) return true;
    if (pivot_budget == 0) throw ResourceLimit("simplex pivot budget exhausted");
    --pivot_budget;

    const auto& row = rows_[row_of_[violating]];
    int entering = -1;
    for (const auto& [var, coef] : row) {  // map order = increasing index
      bool can_increase = !upper_[var] || value_[var] < *upper_[var];
      bool can_decrease = !lower_[var] || value_[var] > *lower_[var];
      bool ok = below ? ((coef > 0 && can_increase) || (coef < 0 && can_decrease))
                      : ((coef < 0 && can_increase) || (coef > 0 && can_decrease));
      if (ok) {
        entering = var;
        break;
      }
    }
    if (entering < 0) return false;
    pivot_and_update(violating, entering, below ? *lower_[violating] : *upper_[violating]);
  }
}

std::vector<Rational> Simplex::concrete_values() const {
  Rational delta = 1;
  auto tighten = [&](const DeltaRational& lo, const DeltaRational& hi) {
    // Need lo.value + lo.delta*d <= hi.value + hi.delta*d.
    if (lo.value < hi.value && lo.delta > hi.delta) {
      Rational limit = (hi.value - lo.value) / (lo.delta - hi.delta);
      if (limit < delta) delta = limit;
    }
  };
  for (std::size_t v = 0; v < value_.size(); ++v) {
    if (lower_[v]) tighten(*lower_[v], value_[v]);
    if (upper_[v]) tighten(value_[v], *upper_[v]);
  }
  std::vector<Rational> out;
  out.reserve(value_.size());
  for (const auto& v : value_) out.push_back(v.value + v.delta * delta);
  return out;
}

}  // namespace dre::lra::detail
