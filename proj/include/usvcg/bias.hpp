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

#include <span>
#include <vector>

#include "usvcg/model.hpp"

namespace usvcg {

/// Phantom bias steering the decision toward target allocations:
///
///   C(x, t) = lambda * G * (T(x B_t) - T(xhat^t B_t)) + psi(t)
///
/// where T(X) = Sum_j ahat^t_j theta_j(X_j) uses the corresponding type of
/// the target xhat^t and G is the instance gain weight.
struct BiasSpec
{
  enum class TargetKind
  {
    Constant,
    Equitable,
    Table,
  };

  enum class PsiKind
  {
    None,
    /// psi(t) = scale * exp(-rate * t)
    Exponential,
  };

  double     lambda      = 0.0;
  TargetKind target_kind = TargetKind::Equitable;
  /// Constant target (TargetKind::Constant).
  std::vector<double> target;
  /// Strictly increasing taxes with one target row each (TargetKind::Table).
  /// Targets are interpolated linearly in t, held constant outside the
  /// table, then renormalized.
  std::vector<double>              table_taxes;
  std::vector<std::vector<double>> table_targets;
  PsiKind                          psi_kind  = PsiKind::None;
  double                           psi_scale = 0.0;
  double                           psi_rate  = 1.0;

  /// True when C vanishes identically.
  bool Inactive() const noexcept
  {
    return lambda == 0.0 && psi_kind == PsiKind::None;
  }

  /// Throws InvalidArgument on malformed specs (negative lambda, targets off
  /// the simplex, psi not vanishing at the sampled horizon).
  void Validate(BudgetInstance const &instance) const;

  /// xhat^t on the simplex.
  std::vector<double> Target(double tax, BudgetInstance const &instance) const;

  double Psi(double tax) const noexcept;
  double PsiDerivative(double tax) const noexcept;
};

/// Type whose inner optimum at `budget` is exactly `target`: ahat_j is
/// proportional to 1 / theta'_j(target_j * budget), normalized to sum 1.
/// Throws BoundaryTarget unless every target entry is strictly positive.
std::vector<double> CorrespondingType(std::span<double const> target, double budget,
                                      BudgetInstance const &instance);

/// As CorrespondingType, but zero target entries receive weight 0.
std::vector<double> CorrespondingTypeOnSupport(std::span<double const> target, double budget,
                                               BudgetInstance const &instance);

/// C(x, t) for one decision.
double BiasValue(BiasSpec const &bias, BudgetDecision const &decision,
                 BudgetInstance const &instance);

}  // namespace usvcg
