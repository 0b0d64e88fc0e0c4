//------------------------------------------------------------------------------
//
//   Copyright 2026 The usvcg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "usvcg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "usvcg/errors.hpp"

namespace usvcg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Sum(std::span<double const> v)
{
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

void AgentType::Validate() const
{
  if (alloc_weights.empty())
  {
    throw InvalidArgument("type has no allocation weights");
  }
  for (double w : alloc_weights)
  {
    if (!(w >= 0.0) || !std::isfinite(w))
    {
      throw InvalidArgument("allocation weights must be nonnegative and finite");
    }
  }
  if (std::fabs(Sum(alloc_weights) - 1.0) > 1e-9)
  {
    throw InvalidArgument("allocation weights must sum to 1");
  }
  if (!(money_weight > 0.0) || !std::isfinite(money_weight))
  {
    throw InvalidArgument("money weight must be positive");
  }
}

char const *ToString(Semantics s) noexcept
{
  return s == Semantics::Nominal ? "nominal" : "per_capita";
}

char const *ToString(MrsConvention c) noexcept
{
  return c == MrsConvention::NScaled ? "n_scaled" : "unscaled";
}

double BudgetInstance::Budget(double tax) const noexcept
{
  auto const n = static_cast<double>(agents);
  if (semantics == Semantics::Nominal)
  {
    return external_budget + n * tax;
  }
  return external_budget / n + tax;
}

double BudgetInstance::BudgetRate() const noexcept
{
  return semantics == Semantics::Nominal ? static_cast<double>(agents) : 1.0;
}

double BudgetInstance::GainWeight() const noexcept
{
  if (semantics == Semantics::Nominal && mrs_convention == MrsConvention::Unscaled)
  {
    return 1.0 / static_cast<double>(agents);
  }
  return 1.0;
}

double BudgetInstance::MrsFactor() const noexcept
{
  return BudgetRate() * GainWeight();
}

double BudgetInstance::TaxWeight(std::size_t agent) const noexcept
{
  return tax_weights.empty() ? 1.0 : tax_weights[agent];
}

bool BudgetInstance::HomogeneousWeights() const noexcept
{
  return std::all_of(tax_weights.begin(), tax_weights.end(), [](double w) { return w == 1.0; });
}

double BudgetInstance::TaxFloor() const noexcept
{
  return -external_budget / static_cast<double>(agents);
}

double BudgetInstance::DefaultEpsilon() const noexcept
{
  return 1e-9 * std::max(1.0, external_budget / static_cast<double>(agents));
}

double BudgetInstance::FeasibleTaxMin(std::span<double const> omegas, double epsilon) const
{
  double const eps = epsilon > 0.0 ? epsilon : DefaultEpsilon();
  double       lo  = TaxFloor() + eps;
  double const dm  = money_curve.domain_min();
  if (std::isfinite(dm))
  {
    for (double w : omegas)
    {
      lo = std::max(lo, dm / w);
    }
    if (omegas.empty())
    {
      lo = std::max(lo, dm);
    }
  }
  return lo;
}

void BudgetInstance::Validate() const
{
  if (goods == 0)
  {
    throw InvalidArgument("instance needs at least one good");
  }
  if (agents == 0)
  {
    throw InvalidArgument("instance needs at least one agent");
  }
  if (!(external_budget >= 0.0) || !std::isfinite(external_budget))
  {
    throw InvalidArgument("external budget must be nonnegative");
  }
  if (gain_curves.size() != goods)
  {
    throw InvalidArgument("expected " + std::to_string(goods) + " gain curves, got " +
                          std::to_string(gain_curves.size()));
  }
  if (!tax_weights.empty())
  {
    if (tax_weights.size() != agents)
    {
      throw InvalidArgument("tax_weights must have one entry per agent");
    }
    for (double w : tax_weights)
    {
      if (!(w > 0.0) || !std::isfinite(w))
      {
        throw InvalidArgument("tax weights must be positive");
      }
    }
    if (std::fabs(Sum(tax_weights) - static_cast<double>(agents)) > 1e-9)
    {
      throw InvalidArgument("tax weights must sum to the number of agents");
    }
  }
  if (!types.empty())
  {
    if (types.size() != agents)
    {
      throw InvalidArgument("profile must contain one type per agent");
    }
    for (auto const &t : types)
    {
      t.Validate();
      if (t.goods() != goods)
      {
        throw InvalidArgument("type dimension does not match the number of goods");
      }
    }
  }
}

void CharacteristicTriplet::Validate() const
{
  if (!(b0 >= 0.0))
  {
    throw InvalidArgument("b0 must be nonnegative");
  }
  if (!(mu > 1.0))
  {
    throw InvalidArgument("mu must exceed 1");
  }
  mean_type.Validate();
  if (!(mean_type.money_weight > 1.0 / mu && mean_type.money_weight < mu))
  {
    throw InvalidArgument("mean money weight must lie strictly inside (1/mu, mu)");
  }
}

double GainValue(std::span<double const> weights, std::span<double const> allocation,
                 double budget, BudgetInstance const &instance)
{
  double total = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j)
  {
    if (weights[j] == 0.0)
    {
      continue;
    }
    total += weights[j] * instance.gain_curves[j].Value(allocation[j] * budget);
  }
  return instance.GainWeight() * total;
}

double Valuation(AgentType const &type, BudgetDecision const &decision,
                 BudgetInstance const &instance, double tax_weight)
{
  double const budget = instance.Budget(decision.tax);
  return GainValue(type.alloc_weights, decision.allocation, budget, instance) -
         type.money_weight * instance.money_curve.Value(tax_weight * decision.tax);
}

std::vector<double> FeatureVector(BudgetDecision const &decision, BudgetInstance const &instance)
{
  double const        budget = instance.Budget(decision.tax);
  double const        g      = instance.GainWeight();
  std::vector<double> v(instance.goods + 1);
  for (std::size_t j = 0; j < instance.goods; ++j)
  {
    double const spend = decision.allocation[j] * budget;
    auto const  &curve = instance.gain_curves[j];
    bool const   ok    = curve.AdmitsZero() ? spend >= 0.0 : spend > 0.0;
    v[j]               = ok ? g * curve.Value(spend) : -kInf;
  }
  v[instance.goods] = -instance.money_curve.Value(decision.tax);
  return v;
}

double Dot(AgentType const &type, std::span<double const> features)
{
  double total = 0.0;
  for (std::size_t j = 0; j < type.alloc_weights.size(); ++j)
  {
    if (type.alloc_weights[j] != 0.0)
    {
      total += type.alloc_weights[j] * features[j];
    }
  }
  return total + type.money_weight * features[type.alloc_weights.size()];
}

AgentType MeanType(std::span<AgentType const> types)
{
  if (types.empty())
  {
    throw EmptyProfile("mean of an empty profile");
  }
  std::size_t const m = types.front().goods();
  AgentType         mean{std::vector<double>(m, 0.0), 0.0};
  for (auto const &t : types)
  {
    for (std::size_t j = 0; j < m; ++j)
    {
      mean.alloc_weights[j] += t.alloc_weights[j];
    }
    mean.money_weight += t.money_weight;
  }
  auto const n = static_cast<double>(types.size());
  for (auto &w : mean.alloc_weights)
  {
    w /= n;
  }
  mean.money_weight /= n;
  return mean;
}

AgentType MeanExcluding(std::span<AgentType const> types, std::size_t excluded)
{
  if (types.size() < 2)
  {
    throw EmptyProfile("excluded mean needs at least two agents");
  }
  if (excluded >= types.size())
  {
    throw InvalidArgument("excluded agent index out of range");
  }
  std::size_t const m = types.front().goods();
  AgentType         mean{std::vector<double>(m, 0.0), 0.0};
  for (std::size_t i = 0; i < types.size(); ++i)
  {
    if (i == excluded)
    {
      continue;
    }
    for (std::size_t j = 0; j < m; ++j)
    {
      mean.alloc_weights[j] += types[i].alloc_weights[j];
    }
    mean.money_weight += types[i].money_weight;
  }
  auto const n = static_cast<double>(types.size() - 1);
  for (auto &w : mean.alloc_weights)
  {
    w /= n;
  }
  mean.money_weight /= n;
  return mean;
}

double SocialWelfare(std::span<AgentType const> profile, BudgetDecision const &decision,
                     BudgetInstance const &instance)
{
  auto const mean = MeanType(profile);
  auto const n    = static_cast<double>(profile.size());
  if (instance.HomogeneousWeights())
  {
    return n * Valuation(mean, decision, instance);
  }
  std::vector<double> weights(mean.alloc_weights);
  for (auto &w : weights)
  {
    w *= n;
  }
  double total = GainValue(weights, decision.allocation, instance.Budget(decision.tax), instance);
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    total -= profile[i].money_weight *
             instance.money_curve.Value(instance.TaxWeight(i) * decision.tax);
  }
  return total;
}

void ValidateDecision(BudgetDecision const &decision, BudgetInstance const &instance)
{
  if (decision.allocation.size() != instance.goods)
  {
    throw InvalidArgument("allocation dimension does not match the number of goods");
  }
  for (double x : decision.allocation)
  {
    if (!(x >= 0.0))
    {
      throw InvalidArgument("allocation entries must be nonnegative");
    }
  }
  if (std::fabs(Sum(decision.allocation) - 1.0) > 1e-9)
  {
    throw InvalidArgument("allocation must sum to 1");
  }
  if (!(decision.tax > instance.TaxFloor()) || !std::isfinite(decision.tax))
  {
    throw InvalidArgument("tax must exceed the budget floor -B0/n");
  }
}

}  // namespace usvcg
