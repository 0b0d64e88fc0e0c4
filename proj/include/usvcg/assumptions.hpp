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

#include <string>
#include <vector>

#include "usvcg/model.hpp"

namespace usvcg {

struct AssumptionCheck
{
  /// One of gain_shape, money_shape, tax_floor_suboptimal, no_infinite_tax,
  /// interior_optima.
  std::string name;
  bool        passed = false;
  /// Curve or agent that decided the outcome, e.g. "gain_curves[1]".
  std::string witness;
  std::string detail;
};

struct ValidationReport
{
  std::vector<AssumptionCheck> checks;
  /// "case1", "case2" or "none": which sufficient condition for interior
  /// optima holds.
  std::string interior_case = "none";
  /// Nominal semantics with the n-scaled convention and a gain curve whose
  /// elasticity keeps z theta'(z) unbounded: the optimal tax grows without
  /// bound as n grows.
  bool tax_divergent = false;

  bool AllPassed() const noexcept;
};

struct ValidationConfig
{
  /// Upper end of the geometric grid used for limit conditions.
  double horizon = 1e12;
  /// Points per sampled grid.
  int samples = 64;
};

/// Sampled checks of the curve shape conditions, the tax-limit conditions
/// and the interior-optimum conditions. Failures are reported, not thrown.
ValidationReport ValidateAssumptions(BudgetInstance const &instance,
                                     ValidationConfig const &config = {});

}  // namespace usvcg
