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
#include <vector>

#include "usvcg/bias.hpp"
#include "usvcg/model.hpp"

namespace usvcg {

struct SolverConfig
{
  /// Stop the water-filling bisection once |Sum_j x_j - 1| is below this.
  double x_tolerance = 1e-10;
  /// Relative width at which the outer golden-section search stops.
  double t_tolerance = 1e-9;
  /// Geometric growth of the outer tax ladder.
  double bracket_growth = 2.0;
  /// Taxes beyond this bound raise TaxDivergence.
  double max_bracket = 1e12;
  /// Points per axis for the grid oracle.
  std::size_t grid_resolution = 500;
  /// Clamp above the open tax bound; <= 0 selects the instance default.
  double epsilon = -1.0;

  void Validate() const;
};

/// -c * f(omega * t) contribution of one agent to an objective.
struct MoneyTerm
{
  double coefficient = 1.0;
  double omega       = 1.0;
};

/// Objective of the form
///   G Sum_j w_j theta_j(x_j B_t) - Sum_k c_k f(omega_k t) [+ C(x, t)].
/// A single type uses its own weights; a group welfare uses summed weights
/// and one money term per member.
struct Objective
{
  std::vector<double>    gain_weights;
  std::vector<MoneyTerm> money;
  BiasSpec const        *bias = nullptr;
};

Objective TypeObjective(AgentType const &type, double tax_weight = 1.0);
/// Sum of valuations over the profile, skipping `excluded` when it is a
/// valid index; each member pays with its own tax weight.
Objective WelfareObjective(std::span<AgentType const> profile, BudgetInstance const &instance,
                           std::size_t excluded = static_cast<std::size_t>(-1));

/// Value of an objective at a fixed decision (zero-weight convention).
double ObjectiveValue(Objective const &objective, BudgetDecision const &decision,
                      BudgetInstance const &instance);

struct Solution
{
  BudgetDecision decision;
  double         value = 0.0;
  /// Another local maximum with a different tax attains the same value
  /// within 1e-9 relative.
  bool non_unique = false;
};

/// argmax_x Sum_j w_j theta_j(x_j * budget) over the simplex.
std::vector<double> InnerAllocation(std::span<double const> weights, double budget,
                                    BudgetInstance const &instance,
                                    SolverConfig const   &config = {});

/// Two-stage maximization of an objective over the simplex times the open
/// tax interval.
Solution Solve(Objective const &objective, BudgetInstance const &instance,
               SolverConfig const &config = {});

/// g(type).
BudgetDecision Optimize(AgentType const &type, BudgetInstance const &instance,
                        SolverConfig const &config = {});
/// Biased optimum: argmax v_type + C. Delegates to Optimize when the bias is
/// inactive.
BudgetDecision OptimizeBiased(AgentType const &type, BiasSpec const &bias,
                              BudgetInstance const &instance, SolverConfig const &config = {});
/// Welfare optimum under the instance tax weights.
BudgetDecision OptimizeHetero(std::span<AgentType const> profile, BudgetInstance const &instance,
                              SolverConfig const &config = {});

/// Allocation equalizing per-good utility levels at budget B_t; also the
/// maximin allocation. DomainError when B_t <= 0.
std::vector<double> EquitableAllocation(double tax, BudgetInstance const &instance);
std::vector<double> EquitableAllocationAtBudget(double budget, BudgetInstance const &instance);

/// Relative MRS residual per good:
///   |K theta'_j / (omega f'(omega t)) - a_f / a_j| / (a_f / a_j),
/// NaN for goods with zero spend or zero weight.
std::vector<double> MrsResiduals(AgentType const &type, BudgetDecision const &decision,
                                 BudgetInstance const &instance, double tax_weight = 1.0);

struct OracleResult
{
  BudgetDecision decision;
  double         value = 0.0;
};

/// Exhaustive search over a simplex lattice times a tax grid on
/// [t_lo, t_hi], followed by `zoom_passes` local refinements around the best
/// point. Only for m <= 3; ResolutionTooCoarse below 10 points per axis.
OracleResult GridOracle(Objective const &objective, BudgetInstance const &instance,
                        std::size_t resolution, double t_lo, double t_hi, int zoom_passes = 4);

}  // namespace usvcg
