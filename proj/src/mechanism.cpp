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

#include "usvcg/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "usvcg/errors.hpp"
#include "usvcg/numeric.hpp"

namespace usvcg {
namespace {

/// Removing the agent leaves the mean unchanged (up to rounding in the
/// mean itself).
bool SameMean(AgentType const &a, AgentType const &b)
{
  auto close = [](double x, double y) {
    return std::fabs(x - y) <= 1e-14 * std::max(1.0, std::fabs(x));
  };
  if (!close(a.money_weight, b.money_weight))
  {
    return false;
  }
  for (std::size_t j = 0; j < a.alloc_weights.size(); ++j)
  {
    if (!close(a.alloc_weights[j], b.alloc_weights[j]))
    {
      return false;
    }
  }
  return true;
}

struct PivotResult
{
  /// Excluded-mean valuation at its own optimum and at the chosen decision.
  double at_own    = 0.0;
  double at_chosen = 0.0;
  BudgetDecision own;
};

/// g(mean_{-i}) evaluated under v_{mean_{-i}}; falls back to the chosen
/// decision when that scores higher (the pivot is a maximum).
PivotResult Pivot(AgentType const &excluded_mean, BudgetDecision const &chosen,
                  BudgetInstance const &instance, SolverConfig const &config,
                  BiasSpec const *bias)
{
  PivotResult r;
  r.own       = bias != nullptr ? OptimizeBiased(excluded_mean, *bias, instance, config)
                                : Optimize(excluded_mean, instance, config);
  r.at_own    = Valuation(excluded_mean, r.own, instance);
  r.at_chosen = Valuation(excluded_mean, chosen, instance);
  double score_own    = r.at_own;
  double score_chosen = r.at_chosen;
  if (bias != nullptr)
  {
    score_own += BiasValue(*bias, r.own, instance);
    score_chosen += BiasValue(*bias, chosen, instance);
  }
  if (score_chosen > score_own)
  {
    r.own    = chosen;
    r.at_own = r.at_chosen;
  }
  return r;
}

void Finish(Outcome &out, std::span<AgentType const> profile, BudgetInstance const &instance)
{
  std::size_t const n = profile.size();
  out.utilities.resize(n);
  out.identity_residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    double const w = instance.TaxWeight(i);
    out.utilities[i] = RealizedUtility(profile[i], out.decision, out.payments[i], instance, w);
    out.identity_residuals[i] = std::fabs(out.utilities[i] - (out.welfare - out.pivots[i]));
  }
}

void RequireProfile(std::span<AgentType const> profile, BudgetInstance const &instance)
{
  if (profile.empty())
  {
    throw EmptyProfile("mechanism needs at least one agent");
  }
  if (profile.size() != instance.agents)
  {
    throw InvalidArgument("profile size does not match the instance agent count");
  }
}

}  // namespace

double ClarkePivot(std::span<AgentType const> profile, std::size_t agent,
                   BudgetInstance const &instance, SolverConfig const &config)
{
  if (profile.size() < 2)
  {
    throw EmptyProfile("Clarke pivot needs at least two agents");
  }
  auto const mean = MeanExcluding(profile, agent);
  auto const d    = Optimize(mean, instance, config);
  return static_cast<double>(profile.size() - 1) * Valuation(mean, d, instance);
}

double RawVcgPayment(std::span<AgentType const> profile, std::size_t agent,
                     BudgetInstance const &instance, SolverConfig const &config)
{
  if (profile.size() < 2)
  {
    throw EmptyProfile("VCG payment needs at least two agents");
  }
  auto const mean     = MeanType(profile);
  auto const excluded = MeanExcluding(profile, agent);
  if (SameMean(mean, excluded))
  {
    return 0.0;
  }
  auto const chosen = Optimize(mean, instance, config);
  auto const r      = Pivot(excluded, chosen, instance, config, nullptr);
  return static_cast<double>(profile.size() - 1) * (r.at_own - r.at_chosen);
}

double SensitivePayment(double p_vcg, double tax, double money_weight, MoneyCurve const &curve,
                        double tax_weight)
{
  if (!(money_weight > 0.0))
  {
    throw InvalidArgument("money weight must be positive");
  }
  if (p_vcg == 0.0)
  {
    return 0.0;
  }
  double const base = tax_weight * tax;
  return curve.Inverse(curve.Value(base) + p_vcg / money_weight) - base;
}

double RealizedUtility(AgentType const &type, BudgetDecision const &decision, double payment,
                       BudgetInstance const &instance, double tax_weight)
{
  double const budget = instance.Budget(decision.tax);
  return GainValue(type.alloc_weights, decision.allocation, budget, instance) -
         type.money_weight * instance.money_curve.Value(tax_weight * decision.tax + payment);
}

Outcome RunUsVcg(std::span<AgentType const> profile, BudgetInstance const &instance,
                 SolverConfig const &config)
{
  RequireProfile(profile, instance);
  std::size_t const n    = profile.size();
  auto const        mean = MeanType(profile);
  auto const        sol  = Solve(TypeObjective(mean), instance, config);
  Outcome           out;
  out.decision = sol.decision;
  out.welfare  = static_cast<double>(n) * Valuation(mean, out.decision, instance);
  if (sol.non_unique)
  {
    out.warnings.emplace_back("NonUniqueOptimum: the mean type has several optimal taxes");
  }
  out.raw_vcg.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  out.pivots.assign(n, 0.0);
  if (n >= 2)
  {
    auto const others = static_cast<double>(n - 1);
    numeric::ParallelFor(n, [&](std::size_t i) {
      auto const excluded = MeanExcluding(profile, i);
      if (SameMean(mean, excluded))
      {
        out.pivots[i] = others * Valuation(excluded, out.decision, instance);
        return;
      }
      auto const r     = Pivot(excluded, out.decision, instance, config, nullptr);
      out.pivots[i]    = others * r.at_own;
      out.raw_vcg[i]   = others * (r.at_own - r.at_chosen);
      out.payments[i]  = SensitivePayment(out.raw_vcg[i], out.decision.tax,
                                          profile[i].money_weight, instance.money_curve);
    });
  }
  Finish(out, profile, instance);
  return out;
}

Outcome RunBusVcg(std::span<AgentType const> profile, BiasSpec const &bias,
                  BudgetInstance const &instance, SolverConfig const &config)
{
  if (bias.Inactive())
  {
    return RunUsVcg(profile, instance, config);
  }
  RequireProfile(profile, instance);
  bias.Validate(instance);
  std::size_t const n    = profile.size();
  auto const        nn   = static_cast<double>(n);
  auto const        mean = MeanType(profile);
  Outcome           out;
  out.decision        = OptimizeBiased(mean, bias, instance, config);
  double const c_full = BiasValue(bias, out.decision, instance);
  out.welfare         = nn * Valuation(mean, out.decision, instance) + nn * c_full;
  out.raw_vcg.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  out.pivots.assign(n, nn * c_full);
  if (n >= 2)
  {
    auto const others = static_cast<double>(n - 1);
    numeric::ParallelFor(n, [&](std::size_t i) {
      auto const excluded = MeanExcluding(profile, i);
      if (SameMean(mean, excluded))
      {
        out.pivots[i] = others * Valuation(excluded, out.decision, instance) + nn * c_full;
        return;
      }
      auto const   r      = Pivot(excluded, out.decision, instance, config, &bias);
      double const c_own  = BiasValue(bias, r.own, instance);
      out.raw_vcg[i]      = others * (r.at_own - r.at_chosen);
      out.pivots[i]       = others * r.at_own + nn * c_own;
      double const shifted = out.raw_vcg[i] + nn * c_own - nn * c_full;
      out.payments[i]     = SensitivePayment(shifted, out.decision.tax, profile[i].money_weight,
                                             instance.money_curve);
    });
  }
  Finish(out, profile, instance);
  return out;
}

Outcome RunUsVcgHetero(std::span<AgentType const> profile, BudgetInstance const &instance,
                       SolverConfig const &config)
{
  RequireProfile(profile, instance);
  std::size_t const n = profile.size();
  Outcome           out;
  auto const        all = WelfareObjective(profile, instance);
  auto const        sol = Solve(all, instance, config);
  out.decision          = sol.decision;
  out.welfare           = ObjectiveValue(all, out.decision, instance);
  if (sol.non_unique)
  {
    out.warnings.emplace_back("NonUniqueOptimum: the welfare has several optimal taxes");
  }
  out.raw_vcg.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  out.pivots.assign(n, 0.0);
  if (n >= 2)
  {
    numeric::ParallelFor(n, [&](std::size_t i) {
      auto const   others    = WelfareObjective(profile, instance, i);
      auto const   own       = Solve(others, instance, config);
      double const at_chosen = ObjectiveValue(others, out.decision, instance);
      double const at_own    = std::max(ObjectiveValue(others, own.decision, instance), at_chosen);
      out.pivots[i]          = at_own;
      out.raw_vcg[i]         = at_own - at_chosen;
      out.payments[i]        = SensitivePayment(out.raw_vcg[i], out.decision.tax,
                                                profile[i].money_weight, instance.money_curve,
                                                instance.TaxWeight(i));
    });
  }
  Finish(out, profile, instance);
  return out;
}

std::vector<std::vector<double>> FeatureJacobian(AgentType const &type,
                                                 BudgetInstance const &instance, double step,
                                                 SolverConfig const &config)
{
  std::size_t const m = instance.goods;
  // Orthonormal basis of {d : Sum_j d_j = 0} by Gram-Schmidt on e_j - e_m.
  std::vector<std::vector<double>> dirs;
  for (std::size_t k = 0; k + 1 < m; ++k)
  {
    std::vector<double> d(m + 1, 0.0);
    d[k]     = 1.0;
    d[m - 1] = -1.0;
    for (auto const &e : dirs)
    {
      double dot = 0.0;
      for (std::size_t j = 0; j < m; ++j)
      {
        dot += d[j] * e[j];
      }
      for (std::size_t j = 0; j < m; ++j)
      {
        d[j] -= dot * e[j];
      }
    }
    double norm = 0.0;
    for (double v : d)
    {
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto &v : d)
    {
      v /= norm;
    }
    dirs.push_back(std::move(d));
  }
  std::vector<double> money_axis(m + 1, 0.0);
  money_axis[m] = 1.0;
  dirs.push_back(std::move(money_axis));

  auto const shifted = [&](std::vector<double> const &d, double h) {
    AgentType b = type;
    for (std::size_t j = 0; j < m; ++j)
    {
      b.alloc_weights[j] += h * d[j];
    }
    b.money_weight += h * d[m];
    for (double w : b.alloc_weights)
    {
      if (w < 0.0)
      {
        throw DomainError("Jacobian step leaves the simplex; reduce fd_step");
      }
    }
    return FeatureVector(Optimize(b, instance, config), instance);
  };

  std::vector<std::vector<double>> jac(m + 1, std::vector<double>(dirs.size(), 0.0));
  for (std::size_t c = 0; c < dirs.size(); ++c)
  {
    auto const plus  = shifted(dirs[c], step);
    auto const minus = shifted(dirs[c], -step);
    for (std::size_t r = 0; r <= m; ++r)
    {
      jac[r][c] = (plus[r] - minus[r]) / (2.0 * step);
    }
  }
  return jac;
}

double SpectralNorm(std::vector<std::vector<double>> const &matrix, int iterations,
                    double tolerance)
{
  if (matrix.empty() || matrix.front().empty())
  {
    return 0.0;
  }
  std::size_t const rows = matrix.size();
  std::size_t const cols = matrix.front().size();
  // Power iteration on A^T A.
  std::vector<double> v(cols, 1.0 / std::sqrt(static_cast<double>(cols)));
  std::vector<double> av(rows);
  double              sigma = 0.0;
  for (int it = 0; it < iterations; ++it)
  {
    for (std::size_t r = 0; r < rows; ++r)
    {
      av[r] = 0.0;
      for (std::size_t c = 0; c < cols; ++c)
      {
        av[r] += matrix[r][c] * v[c];
      }
    }
    std::vector<double> w(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c)
    {
      for (std::size_t r = 0; r < rows; ++r)
      {
        w[c] += matrix[r][c] * av[r];
      }
    }
    double norm = 0.0;
    for (double x : w)
    {
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0)
    {
      return 0.0;
    }
    for (std::size_t c = 0; c < cols; ++c)
    {
      v[c] = w[c] / norm;
    }
    double const next = std::sqrt(norm);
    bool const   done = std::fabs(next - sigma) <= tolerance * std::max(1.0, next);
    sigma             = next;
    if (done)
    {
      break;
    }
  }
  return sigma;
}

double FeatureJacobianNorm(AgentType const &type, BudgetInstance const &instance, double step,
                           SolverConfig const &config, double *disagreement)
{
  double const norm = SpectralNorm(FeatureJacobian(type, instance, step, config));
  if (disagreement != nullptr)
  {
    double const half = SpectralNorm(FeatureJacobian(type, instance, 0.5 * step, config));
    *disagreement     = std::fabs(norm - half) / std::max(norm, 1e-300);
  }
  return norm;
}

NonPositiveOutcome NonPositivePayments(std::span<AgentType const> profile,
                                       BudgetInstance const &instance,
                                       NonPositiveConfig const &np, SolverConfig const &config)
{
  if (instance.semantics != Semantics::PerCapita)
  {
    throw InvalidArgument("non-positive payments require per-capita semantics");
  }
  if (profile.size() < 2)
  {
    throw EmptyProfile("non-positive payments need at least two agents");
  }
  if (!(np.fd_step > 0.0) || !(np.r >= 0.0))
  {
    throw InvalidArgument("fd_step must be positive and r nonnegative");
  }
  NonPositiveOutcome out;
  out.base                = RunUsVcg(profile, instance, config);
  std::size_t const n     = profile.size();
  auto const        nn    = static_cast<double>(n);
  double const      gamma = np.Gamma();
  out.adjusted_vcg.assign(n, 0.0);
  out.jacobian_norms.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  std::vector<double> disagreement(n, 0.0);
  numeric::ParallelFor(n, [&](std::size_t i) {
    auto const excluded = MeanExcluding(profile, i);
    out.jacobian_norms[i] =
        FeatureJacobianNorm(excluded, instance, np.fd_step, config, &disagreement[i]);
    out.adjusted_vcg[i] = out.base.raw_vcg[i] -
                          (gamma * gamma / nn) * (out.jacobian_norms[i] + 1.0) - np.r / nn;
    out.payments[i] = SensitivePayment(out.adjusted_vcg[i], out.base.decision.tax,
                                       profile[i].money_weight, instance.money_curve);
  });
  for (std::size_t i = 0; i < n; ++i)
  {
    if (disagreement[i] > 0.1)
    {
      std::ostringstream os;
      os << "RegularityWarning: agent " << i << " Jacobian norm changes by "
         << disagreement[i] * 100.0 << "% when the step is halved";
      out.base.warnings.push_back(os.str());
    }
  }
  out.all_non_positive =
      std::all_of(out.payments.begin(), out.payments.end(), [](double p) { return p <= 0.0; });
  return out;
}

}  // namespace usvcg
