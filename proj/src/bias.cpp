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

#include "usvcg/bias.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "usvcg/errors.hpp"
#include "usvcg/solver.hpp"

namespace usvcg {
namespace {

void CheckSimplex(std::span<double const> x, std::size_t m, char const *what)
{
  if (x.size() != m)
  {
    throw InvalidArgument(std::string(what) + ": dimension does not match the number of goods");
  }
  double sum = 0.0;
  for (double v : x)
  {
    if (!(v >= 0.0))
    {
      throw InvalidArgument(std::string(what) + ": entries must be nonnegative");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
  {
    throw InvalidArgument(std::string(what) + ": entries must sum to 1");
  }
}

std::vector<double> Normalized(std::vector<double> x)
{
  double const sum = std::accumulate(x.begin(), x.end(), 0.0);
  for (auto &v : x)
  {
    v /= sum;
  }
  return x;
}

}  // namespace

void BiasSpec::Validate(BudgetInstance const &instance) const
{
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
  {
    throw InvalidArgument("bias lambda must be nonnegative");
  }
  switch (target_kind)
  {
  case TargetKind::Constant:
    CheckSimplex(target, instance.goods, "bias target");
    break;
  case TargetKind::Table:
    if (table_taxes.empty() || table_taxes.size() != table_targets.size())
    {
      throw InvalidArgument("bias table needs one target per tax entry");
    }
    for (std::size_t k = 0; k < table_taxes.size(); ++k)
    {
      if (k > 0 && !(table_taxes[k] > table_taxes[k - 1]))
      {
        throw InvalidArgument("bias table taxes must be strictly increasing");
      }
      CheckSimplex(table_targets[k], instance.goods, "bias table target");
    }
    break;
  case TargetKind::Equitable:
    break;
  }
  if (psi_kind == PsiKind::Exponential)
  {
    if (!(psi_rate > 0.0) || !std::isfinite(psi_scale))
    {
      throw InvalidArgument("exponential psi needs a positive rate");
    }
    if (std::fabs(Psi(1e6 / psi_rate)) > 1e-12)
    {
      throw InvalidArgument("psi does not vanish at the sampled horizon");
    }
  }
}

std::vector<double> BiasSpec::Target(double tax, BudgetInstance const &instance) const
{
  switch (target_kind)
  {
  case TargetKind::Constant:
    return target;
  case TargetKind::Equitable:
    return EquitableAllocation(tax, instance);
  case TargetKind::Table:
    break;
  }
  if (tax <= table_taxes.front())
  {
    return table_targets.front();
  }
  if (tax >= table_taxes.back())
  {
    return table_targets.back();
  }
  auto const        it = std::upper_bound(table_taxes.begin(), table_taxes.end(), tax);
  std::size_t const hi = static_cast<std::size_t>(it - table_taxes.begin());
  std::size_t const lo = hi - 1;
  double const      w  = (tax - table_taxes[lo]) / (table_taxes[hi] - table_taxes[lo]);
  std::vector<double> x(instance.goods);
  for (std::size_t j = 0; j < x.size(); ++j)
  {
    x[j] = (1.0 - w) * table_targets[lo][j] + w * table_targets[hi][j];
  }
  return Normalized(std::move(x));
}

double BiasSpec::Psi(double tax) const noexcept
{
  if (psi_kind == PsiKind::None)
  {
    return 0.0;
  }
  return psi_scale * std::exp(-psi_rate * tax);
}

double BiasSpec::PsiDerivative(double tax) const noexcept
{
  if (psi_kind == PsiKind::None)
  {
    return 0.0;
  }
  return -psi_rate * psi_scale * std::exp(-psi_rate * tax);
}

std::vector<double> CorrespondingType(std::span<double const> target, double budget,
                                      BudgetInstance const &instance)
{
  for (double x : target)
  {
    if (!(x > 0.0))
    {
      throw BoundaryTarget("corresponding type needs a target in the simplex interior");
    }
  }
  return CorrespondingTypeOnSupport(target, budget, instance);
}

std::vector<double> CorrespondingTypeOnSupport(std::span<double const> target, double budget,
                                               BudgetInstance const &instance)
{
  if (!(budget > 0.0))
  {
    throw DomainError("corresponding type needs a positive budget");
  }
  std::vector<double> a(target.size(), 0.0);
  for (std::size_t j = 0; j < target.size(); ++j)
  {
    if (target[j] > 0.0)
    {
      a[j] = 1.0 / instance.gain_curves[j].Derivative(target[j] * budget);
    }
  }
  double const sum = std::accumulate(a.begin(), a.end(), 0.0);
  if (!(sum > 0.0))
  {
    throw BoundaryTarget("target has empty support");
  }
  for (auto &v : a)
  {
    v /= sum;
  }
  return a;
}

double BiasValue(BiasSpec const &bias, BudgetDecision const &decision,
                 BudgetInstance const &instance)
{
  double value = bias.Psi(decision.tax);
  if (bias.lambda == 0.0)
  {
    return value;
  }
  double const budget = instance.Budget(decision.tax);
  auto const   target = bias.Target(decision.tax, instance);
  auto const   hat    = CorrespondingTypeOnSupport(target, budget, instance);
  value += bias.lambda * (GainValue(hat, decision.allocation, budget, instance) -
                          GainValue(hat, target, budget, instance));
  return value;
}

}  // namespace usvcg
