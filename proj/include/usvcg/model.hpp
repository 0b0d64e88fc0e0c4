#pragma once
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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "usvcg/curves.hpp"

namespace usvcg {

/// Reported or hypothetical preferences: weights over the goods (a point of
/// the simplex) plus a positive weight on money.
struct AgentType
{
  std::vector<double> alloc_weights;
  double              money_weight = 1.0;

  std::size_t goods() const noexcept { return alloc_weights.size(); }
  /// Throws InvalidArgument unless weights are >= 0, sum to 1 within 1e-9
  /// and money_weight > 0.
  void Validate() const;

  friend bool operator==(AgentType const &, AgentType const &) = default;
};

using Profile = std::vector<AgentType>;

/// Allocation of the budget over goods (simplex point) and per-agent tax.
struct BudgetDecision
{
  std::vector<double> allocation;
  double              tax = 0.0;

  friend bool operator==(BudgetDecision const &, BudgetDecision const &) = default;
};

/// How spending enters the gain curves.
///   nominal:    theta_j(x_j * (B0 + n t))
///   per_capita: theta_j(x_j * (B0 / n + t))
enum class Semantics
{
  Nominal,
  PerCapita,
};

/// Which stationarity ratio links a reported optimum to a type under nominal
/// semantics. `NScaled`: n theta'_j / f' = a_f / a_j, the exact first-order
/// condition of the valuation below. `Unscaled`: theta'_j / f' = a_f / a_j,
/// which is exact when the gain side of every valuation carries weight 1/n.
/// Under per-capita semantics both conventions coincide.
enum class MrsConvention
{
  NScaled,
  Unscaled,
};

char const *ToString(Semantics s) noexcept;
char const *ToString(MrsConvention c) noexcept;

struct BudgetInstance
{
  std::size_t            goods  = 0;
  std::size_t            agents = 0;
  double                 external_budget = 0.0;
  std::vector<GainCurve> gain_curves;
  MoneyCurve             money_curve = MoneyCurve::Power(0.5);
  Semantics              semantics   = Semantics::Nominal;
  MrsConvention          mrs_convention = MrsConvention::NScaled;
  /// Empty means all ones. Otherwise one positive weight per agent, summing
  /// to n.
  std::vector<double>    tax_weights;
  Profile                types;
  std::string            currency = "currency";

  /// Total (nominal) or per-capita budget available for goods at tax t.
  double Budget(double tax) const noexcept;
  /// d Budget / d t.
  double BudgetRate() const noexcept;
  /// Multiplier on the gain part of every valuation (1/n only for
  /// nominal + unscaled).
  double GainWeight() const noexcept;
  /// Factor K in K * theta'_j(spend) / (omega f'(omega t)) = a_f / a_j.
  double MrsFactor() const noexcept;
  double TaxWeight(std::size_t agent) const noexcept;
  bool   HomogeneousWeights() const noexcept;
  /// Budget(t) > 0 exactly when t exceeds this value.
  double TaxFloor() const noexcept;
  /// Smallest tax the solvers consider: strictly inside the open budget
  /// bound (by epsilon) and inside the money curve domain for every weight
  /// in `omegas`.
  double FeasibleTaxMin(std::span<double const> omegas, double epsilon = -1.0) const;
  /// Default clamp 1e-9 * max(1, B0 / n).
  double DefaultEpsilon() const noexcept;

  /// Structural checks (sizes, weights, curve count). Throws InvalidArgument.
  void Validate() const;
};

/// Characteristic triplet of a population: per-capita external budget,
/// money-weight band bound and mean type.
struct CharacteristicTriplet
{
  double    b0 = 0.0;
  double    mu = 2.0;
  AgentType mean_type;

  void Validate() const;
};

/// Sum_j a_j G theta_j(x_j Budget(t)) - a_f f(omega t). Terms with a_j = 0
/// contribute 0 even where theta_j is undefined.
double Valuation(AgentType const &type, BudgetDecision const &decision,
                 BudgetInstance const &instance, double tax_weight = 1.0);

/// Gain part only: G Sum_j w_j theta_j(x_j * budget), zero weights skipped.
double GainValue(std::span<double const> weights, std::span<double const> allocation,
                 double budget, BudgetInstance const &instance);

/// (G theta_1(.), ..., G theta_m(.), -f(t)); coordinates where the spend is
/// outside the curve domain are -inf. Valuation(a, d) == Dot(a, V(d)).
std::vector<double> FeatureVector(BudgetDecision const &decision, BudgetInstance const &instance);

/// Dot product of a type with a feature vector, using 0 * (-inf) = 0.
double Dot(AgentType const &type, std::span<double const> features);

AgentType MeanType(std::span<AgentType const> types);
AgentType MeanExcluding(std::span<AgentType const> types, std::size_t excluded);

/// Sum of valuations. With homogeneous tax weights this equals
/// n * Valuation(MeanType(profile), d); otherwise the weighted money terms
/// are summed per agent.
double SocialWelfare(std::span<AgentType const> profile, BudgetDecision const &decision,
                     BudgetInstance const &instance);

/// Throws InvalidArgument unless the allocation is on the simplex (1e-9)
/// and the tax is strictly above the budget floor.
void ValidateDecision(BudgetDecision const &decision, BudgetInstance const &instance);

}  // namespace usvcg
