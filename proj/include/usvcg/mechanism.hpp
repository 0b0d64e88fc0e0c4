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

#include "usvcg/bias.hpp"
#include "usvcg/model.hpp"
#include "usvcg/solver.hpp"

namespace usvcg {

struct Outcome
{
  BudgetDecision      decision;
  /// Clarke payments p_i (welfare units).
  std::vector<double> raw_vcg;
  /// Monetary payments P_i on top of the tax.
  std::vector<double> payments;
  /// Sum of valuations at the decision (plus n C for biased runs).
  double              welfare = 0.0;
  /// Pivot terms h_i: best welfare of the others without agent i.
  std::vector<double> pivots;
  /// Realized utility of each agent under its reported type.
  std::vector<double> utilities;
  /// |u_i - (welfare - h_i)| per agent.
  std::vector<double> identity_residuals;
  std::vector<std::string> warnings;
};

struct NonPositiveConfig
{
  /// Bound on |mean_{-i} - a_i|; <= 0 selects 2 (1 + mu).
  double gamma = -1.0;
  /// Money-weight band used for the default gamma.
  double mu = 2.0;
  /// Extra rebate constant.
  double r = 0.0;
  /// Central-difference step for the Jacobian of V o g.
  double fd_step = 1e-5;

  double Gamma() const noexcept
  {
    return gamma > 0.0 ? gamma : 2.0 * (1.0 + mu);
  }
};

/// (n - 1) v_{mean_{-i}}(g(mean_{-i})).
double ClarkePivot(std::span<AgentType const> profile, std::size_t agent,
                   BudgetInstance const &instance, SolverConfig const &config = {});

/// (n - 1) (v_{mean_{-i}}(g(mean_{-i})) - v_{mean_{-i}}(g(mean))); exactly 0
/// when removing the agent leaves the mean unchanged.
double RawVcgPayment(std::span<AgentType const> profile, std::size_t agent,
                     BudgetInstance const &instance, SolverConfig const &config = {});

/// -w t* + f^{-1}(f(w t*) + p / a_f).
double SensitivePayment(double p_vcg, double tax, double money_weight, MoneyCurve const &curve,
                        double tax_weight = 1.0);

/// a . gains - a_f f(w t* + P).
double RealizedUtility(AgentType const &type, BudgetDecision const &decision, double payment,
                       BudgetInstance const &instance, double tax_weight = 1.0);

/// Mechanism with homogeneous tax weights.
Outcome RunUsVcg(std::span<AgentType const> profile, BudgetInstance const &instance,
                 SolverConfig const &config = {});

/// Biased variant; biased optima are used for the decision and every pivot.
Outcome RunBusVcg(std::span<AgentType const> profile, BiasSpec const &bias,
                  BudgetInstance const &instance, SolverConfig const &config = {});

/// Heterogeneous tax weights: each agent pays w_i t.
Outcome RunUsVcgHetero(std::span<AgentType const> profile, BudgetInstance const &instance,
                       SolverConfig const &config = {});

/// Spectral norm of the Jacobian of b -> V(g(b)) at `type`, along an
/// orthonormal basis of the simplex tangent plus the money axis.
/// `disagreement` receives the relative gap between steps h and h/2.
double FeatureJacobianNorm(AgentType const &type, BudgetInstance const &instance, double step,
                           SolverConfig const &config = {}, double *disagreement = nullptr);

/// The Jacobian itself ((m + 1) rows by m columns); exposed for tests.
std::vector<std::vector<double>> FeatureJacobian(AgentType const &type,
                                                 BudgetInstance const &instance, double step,
                                                 SolverConfig const &config = {});

double SpectralNorm(std::vector<std::vector<double>> const &matrix, int iterations = 50,
                    double tolerance = 1e-10);

struct NonPositiveOutcome
{
  Outcome             base;
  std::vector<double> adjusted_vcg;
  std::vector<double> jacobian_norms;
  /// Non-positive payments.
  std::vector<double> payments;
  bool                all_non_positive = false;
};

/// Shifts each Clarke payment down by (gamma^2 / n)(|D(mean_{-i})| + 1) + r / n
/// before the money inversion. Requires per-capita semantics and n >= 2.
NonPositiveOutcome NonPositivePayments(std::span<AgentType const> profile,
                                       BudgetInstance const &instance,
                                       NonPositiveConfig const &np,
                                       SolverConfig const &config = {});

}  // namespace usvcg
