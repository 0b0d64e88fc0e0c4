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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "usvcg/mechanism.hpp"
#include "usvcg/model.hpp"
#include "usvcg/solver.hpp"

namespace usvcg {

enum class MisreportFamily
{
  /// Dirichlet(1, ..., 1) allocation weights with a log-uniform money weight.
  Global,
  /// Perturbation of the truth at scale 0.1 or 0.01.
  Local,
  /// Dirichlet allocation weights, true money weight.
  AllocationOnly,
};

char const *ToString(MisreportFamily family) noexcept;

struct FuzzConfig
{
  /// Money weights are drawn log-uniformly from [1/mu, mu].
  double mu        = 2.0;
  double tolerance = 1e-9;
};

struct FuzzTrial
{
  std::uint64_t   trial  = 0;
  std::size_t     agent  = 0;
  MisreportFamily family = MisreportFamily::Global;
  AgentType       truth;
  AgentType       misreport;
  double          gain   = 0.0;
};

struct FuzzReport
{
  std::size_t trials    = 0;
  double      tolerance = 1e-9;
  /// Largest gain over all trials (-inf when there were none).
  double      max_gain  = 0.0;
  FuzzTrial   worst;
  /// Largest gain per family (Global, Local, AllocationOnly).
  double      family_max[3] = {0.0, 0.0, 0.0};
  std::size_t family_trials[3] = {0, 0, 0};
  /// Interior optima are not guaranteed, so only weak incentive
  /// compatibility is expected.
  bool        dsic_only = false;
  bool        passed    = false;
  std::vector<FuzzTrial> rows;
};

/// Random (profile, agent, misreport) draws; half of the trials use the
/// instance profile when it has one. Deterministic in `seed`.
FuzzReport SdsicFuzz(BudgetInstance const &instance, std::size_t trials, std::uint64_t seed,
                     FuzzConfig const &fuzz = {}, SolverConfig const &config = {});

/// Utility agent `agent` obtains from reporting `report` while the others
/// report `profile` (entry `agent` of the profile is its true type).
double ReportUtility(std::span<AgentType const> profile, std::size_t agent,
                     AgentType const &report, BudgetInstance const &instance,
                     SolverConfig const &config = {});

struct CoalitionReport
{
  std::size_t trials        = 0;
  std::size_t coalition_size = 0;
  /// Coordinated misreports where every member strictly gains.
  std::size_t manipulations = 0;
  /// Manipulations in which some member has a better unilateral report.
  std::size_t unstable      = 0;
  double      max_min_gain  = 0.0;
  bool        passed        = false;
};

/// Utilities of every coalition member when the members report `reports`
/// and everyone else reports truthfully.
std::vector<double> CoalitionUtilities(std::span<AgentType const> truth,
                                       std::span<std::size_t const> members,
                                       std::span<AgentType const> reports,
                                       BudgetInstance const &instance,
                                       SolverConfig const &config = {});

CoalitionReport CoalitionProbe(BudgetInstance const &instance, std::size_t coalition_size,
                               std::size_t trials, std::uint64_t seed,
                               FuzzConfig const &fuzz = {}, SolverConfig const &config = {});

/// Population family sharing one characteristic triplet.
struct ConvergenceSetup
{
  CharacteristicTriplet  sigma;
  std::vector<GainCurve> gain_curves;
  MoneyCurve             money_curve = MoneyCurve::Power(0.5, -std::numeric_limits<double>::infinity());
};

/// Per-capita instance with n agents and external budget b0 * n.
BudgetInstance ConvergenceInstance(ConvergenceSetup const &setup, std::size_t n);

/// n types whose mean is the triplet's mean type: mirrored pairs around the
/// mean inside the money-weight band, plus the mean itself when n is odd.
Profile GeneratePopulation(CharacteristicTriplet const &sigma, std::size_t n, std::uint64_t seed);

struct ConvergenceRow
{
  std::size_t n                = 0;
  double      max_abs_payment  = 0.0;
  double      n_times_max      = 0.0;
  double      sum_abs_payments = 0.0;
  double      tax              = 0.0;
  /// Non-positive scheme (only when requested).
  double      np_max_payment   = 0.0;
  double      np_sum_abs       = 0.0;
  bool        np_all_non_positive = false;
  std::size_t regularity_warnings = 0;
};

struct ConvergenceTable
{
  std::vector<ConvergenceRow> rows;
  bool non_positive      = false;
  bool monotone          = false;
  double plateau_ratio   = 0.0;
  bool np_all            = false;
  double np_sum_ratio    = 0.0;
  /// Smallest n from which every row has only non-positive payments.
  std::size_t np_regime_n = 0;
  bool passed            = false;
};

/// Runs the mechanism on generated populations of every size in `n_list`
/// (strictly increasing). NonUniqueOptimum aborts the study.
ConvergenceTable ConvergenceStudy(ConvergenceSetup const &setup, std::span<std::size_t const> n_list,
                                  std::uint64_t seed, bool non_positive,
                                  NonPositiveConfig const &np = {},
                                  SolverConfig const &config = {});

struct DivergenceRow
{
  std::size_t n             = 0;
  double      nominal_tax   = 0.0;
  double      closed_form   = 0.0;
  double      per_capita_tax = 0.0;
};

struct DivergenceReport
{
  double p = 0.0;
  double q = 0.0;
  double money_weight = 1.0;
  std::vector<DivergenceRow> rows;
  /// Least-squares log-log slope of the nominal optimal tax against n.
  double measured_slope = 0.0;
  /// Exponent 1 - q stated for this family.
  double stated_slope = 0.0;
  /// Exponent p / (q - p) of the exact stationarity condition.
  double derived_slope = 0.0;
  double per_capita_spread = 0.0;
  bool   slope_ok = false;
  bool   per_capita_ok = false;
  bool   passed = false;
};

/// One good with theta(X) = X^p, f(t) = t^q, B0 = 0; nominal semantics under
/// the n-scaled convention against per-capita semantics.
DivergenceReport TaxDivergenceDemo(double p, double q, std::span<std::size_t const> n_list,
                                   double money_weight = 1.0, SolverConfig const &config = {});

struct ContinuityRow
{
  double delta        = 0.0;
  double displacement = 0.0;
  double ratio        = 0.0;
};

struct ContinuityReport
{
  std::vector<ContinuityRow> rows;
  double spread = 0.0;
  bool   passed = false;
};

/// |g(type + delta u) - g(type)| for a fixed unit direction u in the
/// simplex tangent plus money axis. NonUniqueOptimum when the base optimum
/// is not unique.
ContinuityReport ContinuityProbe(AgentType const &type, BudgetInstance const &instance,
                                 std::span<double const> deltas, SolverConfig const &config = {});

}  // namespace usvcg
