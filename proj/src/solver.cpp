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

#include "usvcg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "usvcg/errors.hpp"
#include "usvcg/numeric.hpp"

namespace usvcg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Everything the outer search needs at one tax level.
struct Stage
{
  double              tax    = 0.0;
  double              budget = 0.0;
  double              value  = -kInf;
  std::vector<double> allocation;
  /// Corresponding type and target of the bias (empty when unbiased).
  std::vector<double> hat;
  std::vector<double> target;
};

class Evaluator
{
public:
  Evaluator(Objective const &objective, BudgetInstance const &instance,
            SolverConfig const &config)
    : objective_(objective)
    , instance_(instance)
    , config_(config)
    , biased_(objective.bias != nullptr && objective.bias->lambda > 0.0)
  {}

  Stage At(double tax) const
  {
    Stage s;
    s.tax    = tax;
    s.budget = instance_.Budget(tax);
    std::vector<double> weights(objective_.gain_weights);
    if (biased_)
    {
      s.target = objective_.bias->Target(tax, instance_);
      s.hat    = CorrespondingTypeOnSupport(s.target, s.budget, instance_);
      for (std::size_t j = 0; j < weights.size(); ++j)
      {
        weights[j] += objective_.bias->lambda * s.hat[j];
      }
    }
    s.allocation = InnerAllocation(weights, s.budget, instance_, config_);
    s.value      = GainValue(weights, s.allocation, s.budget, instance_) - MoneyPart(tax);
    if (biased_)
    {
      s.value -= objective_.bias->lambda * GainValue(s.hat, s.target, s.budget, instance_);
    }
    if (objective_.bias != nullptr)
    {
      s.value += objective_.bias->Psi(tax);
    }
    return s;
  }

  double Value(double tax) const
  {
    return At(tax).value;
  }

  /// Envelope derivative of the conditional value.
  double Slope(double tax) const
  {
    Stage const  s     = At(tax);
    double const g     = instance_.GainWeight();
    double const rate  = instance_.BudgetRate();
    double       slope = 0.0;
    for (std::size_t j = 0; j < instance_.goods; ++j)
    {
      double w = objective_.gain_weights[j];
      if (biased_)
      {
        w += objective_.bias->lambda * s.hat[j];
      }
      if (w == 0.0 || s.allocation[j] == 0.0)
      {
        continue;
      }
      double const x = s.allocation[j];
      slope += w * instance_.gain_curves[j].Derivative(x * s.budget) * x;
    }
    slope *= g * rate;
    for (auto const &term : objective_.money)
    {
      slope -= term.coefficient * term.omega * instance_.money_curve.Derivative(term.omega * tax);
    }
    if (objective_.bias != nullptr)
    {
      slope += objective_.bias->PsiDerivative(tax);
    }
    if (biased_)
    {
      slope += objective_.bias->lambda * g * BiasSlope(s);
    }
    return slope;
  }

  double Money(double tax) const
  {
    return MoneyPart(tax);
  }

private:
  double MoneyPart(double tax) const
  {
    double total = 0.0;
    for (auto const &term : objective_.money)
    {
      total += term.coefficient * instance_.money_curve.Value(term.omega * tax);
    }
    return total;
  }

  /// d/dt of T(x B_t) - T(xhat B_t) at fixed x, with T weighted by the
  /// t-dependent corresponding type. The target drift term vanishes because
  /// ahat_j theta'_j(xhat_j B) is constant on the support.
  double BiasSlope(Stage const &s) const
  {
    double const h     = 1e-6 * std::max(1.0, std::fabs(s.tax));
    double const floor = instance_.TaxFloor();
    double       lo    = s.tax - h;
    double       hi    = s.tax + h;
    if (instance_.Budget(lo) <= 0.0 || lo <= floor)
    {
      lo = s.tax;
    }
    auto const hat_at = [&](double t) {
      return CorrespondingTypeOnSupport(objective_.bias->Target(t, instance_),
                                        instance_.Budget(t), instance_);
    };
    auto const   hat_lo = lo == s.tax ? s.hat : hat_at(lo);
    auto const   hat_hi = hat_at(hi);
    double const rate   = instance_.BudgetRate();
    double       total  = 0.0;
    double       kappa  = 0.0;
    for (std::size_t j = 0; j < instance_.goods; ++j)
    {
      double const d_hat = (hat_hi[j] - hat_lo[j]) / (hi - lo);
      auto const  &curve = instance_.gain_curves[j];
      if (d_hat != 0.0)
      {
        double const own =
            s.allocation[j] > 0.0 || curve.AdmitsZero() ? curve.Value(s.allocation[j] * s.budget)
                                                        : -kInf;
        double const tgt = s.target[j] > 0.0 || curve.AdmitsZero()
                               ? curve.Value(s.target[j] * s.budget)
                               : -kInf;
        total += d_hat * (own - tgt);
      }
      if (s.hat[j] > 0.0 && s.target[j] > 0.0)
      {
        kappa += s.hat[j] * curve.Derivative(s.target[j] * s.budget) * s.target[j];
      }
    }
    return total - kappa * rate;
  }

  Objective const      &objective_;
  BudgetInstance const &instance_;
  SolverConfig const   &config_;
  bool                  biased_;
};

struct Candidate
{
  double              tax;
  double              value;
  std::vector<double> allocation;
};

/// Refines a local maximum of the conditional value inside [lo, hi].
Candidate Refine(Evaluator const &eval, double lo, double hi, double seed_tax, double seed_value,
                 SolverConfig const &config)
{
  double best_t = seed_tax;
  double best_v = seed_value;
  if (hi > lo)
  {
    double const tol = config.t_tolerance * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
    auto const   gr  = numeric::GoldenMaximize([&](double t) { return eval.Value(t); }, lo, hi, tol);
    if (gr.value > best_v)
    {
      best_t = gr.argmax;
      best_v = gr.value;
    }
    // Polish on the analytic slope: golden section alone resolves the tax
    // only to about sqrt(machine epsilon) relative.
    double a = std::max(lo, gr.lo);
    double b = std::min(hi, gr.hi);
    double sa = eval.Slope(a);
    double sb = eval.Slope(b);
    if (!(sa > 0.0 && sb < 0.0))
    {
      a  = lo;
      b  = hi;
      sa = eval.Slope(a);
      sb = eval.Slope(b);
    }
    if (sa > 0.0 && sb < 0.0)
    {
      for (int i = 0; i < 200; ++i)
      {
        double const mid = 0.5 * (a + b);
        if (mid <= a || mid >= b)
        {
          break;
        }
        if (eval.Slope(mid) > 0.0)
        {
          a = mid;
        }
        else
        {
          b = mid;
        }
      }
      double const t = 0.5 * (a + b);
      double const v = eval.Value(t);
      if (v >= best_v - 1e-12 * std::max(1.0, std::fabs(best_v)))
      {
        best_t = t;
        best_v = v;
      }
    }
  }
  auto stage = eval.At(best_t);
  return {best_t, stage.value, std::move(stage.allocation)};
}

bool AllLog(std::span<double const> weights, BudgetInstance const &instance)
{
  for (std::size_t j = 0; j < weights.size(); ++j)
  {
    if (weights[j] > 0.0 && instance.gain_curves[j].kind() != GainCurve::Kind::Log)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

void SolverConfig::Validate() const
{
  if (!(x_tolerance > 0.0) || !(t_tolerance > 0.0))
  {
    throw InvalidArgument("solver tolerances must be positive");
  }
  if (!(bracket_growth > 1.0))
  {
    throw InvalidArgument("bracket_growth must exceed 1");
  }
  if (!(max_bracket > 0.0))
  {
    throw InvalidArgument("max_bracket must be positive");
  }
}

Objective TypeObjective(AgentType const &type, double tax_weight)
{
  return {type.alloc_weights, {MoneyTerm{type.money_weight, tax_weight}}, nullptr};
}

Objective WelfareObjective(std::span<AgentType const> profile, BudgetInstance const &instance,
                           std::size_t excluded)
{
  if (profile.empty())
  {
    throw EmptyProfile("welfare of an empty profile");
  }
  Objective obj;
  obj.gain_weights.assign(profile.front().goods(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    if (i == excluded)
    {
      continue;
    }
    for (std::size_t j = 0; j < obj.gain_weights.size(); ++j)
    {
      obj.gain_weights[j] += profile[i].alloc_weights[j];
    }
    obj.money.push_back({profile[i].money_weight, instance.TaxWeight(i)});
  }
  if (obj.money.empty())
  {
    throw EmptyProfile("welfare objective excludes every agent");
  }
  return obj;
}

double ObjectiveValue(Objective const &objective, BudgetDecision const &decision,
                      BudgetInstance const &instance)
{
  double value = GainValue(objective.gain_weights, decision.allocation,
                           instance.Budget(decision.tax), instance);
  for (auto const &term : objective.money)
  {
    value -= term.coefficient * instance.money_curve.Value(term.omega * decision.tax);
  }
  if (objective.bias != nullptr)
  {
    value += BiasValue(*objective.bias, decision, instance);
  }
  return value;
}

std::vector<double> InnerAllocation(std::span<double const> weights, double budget,
                                    BudgetInstance const &instance, SolverConfig const &config)
{
  std::size_t const m = weights.size();
  if (!(budget > 0.0))
  {
    throw DomainError("inner allocation needs a positive budget");
  }
  std::vector<double> x(m, 0.0);
  std::size_t         active = 0;
  std::size_t         last   = 0;
  for (std::size_t j = 0; j < m; ++j)
  {
    if (weights[j] < 0.0)
    {
      throw InvalidArgument("gain weights must be nonnegative");
    }
    if (weights[j] > 0.0)
    {
      ++active;
      last = j;
    }
  }
  if (active == 0)
  {
    throw InvalidArgument("inner allocation needs a positive gain weight");
  }
  if (active == 1)
  {
    x[last] = 1.0;
    return x;
  }
  if (AllLog(weights, instance))
  {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j)
    {
      x[j] = weights[j] * instance.gain_curves[j].scale();
      sum += x[j];
    }
    for (auto &v : x)
    {
      v /= sum;
    }
    return x;
  }

  // Water-filling on the common marginal: x_j(l) is decreasing in l.
  auto const fill = [&](double log_lambda) {
    double const lambda = std::exp(log_lambda);
    double       total  = 0.0;
    for (std::size_t j = 0; j < m; ++j)
    {
      x[j] = weights[j] > 0.0 ? instance.gain_curves[j].InverseDerivative(lambda / weights[j]) /
                                    budget
                              : 0.0;
      total += x[j];
    }
    return total;
  };
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  auto const share = budget / static_cast<double>(active);
  for (std::size_t j = 0; j < m; ++j)
  {
    if (weights[j] > 0.0)
    {
      lambda_lo = std::max(lambda_lo, weights[j] * instance.gain_curves[j].Derivative(budget));
      lambda_hi = std::max(lambda_hi, weights[j] * instance.gain_curves[j].Derivative(share));
    }
  }
  double lo = std::log(lambda_lo) - 1e-12;
  double hi = std::log(lambda_hi) + 1e-12;
  double total = 0.0;
  int    iter  = 0;
  for (; iter < 400; ++iter)
  {
    double const mid = 0.5 * (lo + hi);
    total            = fill(mid);
    // The second test fires once the bracket is two adjacent doubles.
    if (std::fabs(total - 1.0) <= config.x_tolerance || !(mid > lo && mid < hi))
    {
      break;
    }
    if (total > 1.0)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  if (!(total > 0.0) || std::fabs(total - 1.0) > 1e-6)
  {
    throw ConvergenceError("water-filling did not converge");
  }
  for (auto &v : x)
  {
    v /= total;
  }
  return x;
}

Solution Solve(Objective const &objective, BudgetInstance const &instance,
               SolverConfig const &config)
{
  config.Validate();
  if (objective.gain_weights.size() != instance.goods)
  {
    throw InvalidArgument("objective dimension does not match the number of goods");
  }
  std::vector<double> omegas;
  omegas.reserve(objective.money.size());
  for (auto const &term : objective.money)
  {
    omegas.push_back(term.omega);
  }
  Evaluator const eval(objective, instance, config);
  double const    t_min = instance.FeasibleTaxMin(omegas, config.epsilon);
  double const    scale = std::max(1.0, std::fabs(instance.TaxFloor()));

  // Ladder of taxes covering the feasible interval.
  std::vector<double> ladder{t_min};
  if (t_min < 0.0)
  {
    for (int k = 1; k <= 60; ++k)
    {
      double const w = std::ldexp(1.0, -k);
      double const a = t_min * (1.0 - w);
      double const b = t_min * w;
      if (a > t_min && a - t_min > 1e-12 * scale)
      {
        ladder.push_back(a);
      }
      if (-b > 1e-12 * scale)
      {
        ladder.push_back(b);
      }
    }
    ladder.push_back(0.0);
  }
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

  std::vector<double> values;
  values.reserve(ladder.size() + 64);
  for (double t : ladder)
  {
    values.push_back(eval.Value(t));
  }

  double t = std::max(t_min, 1e-6 * scale);
  if (t <= ladder.back())
  {
    t = ladder.back() * config.bracket_growth;
  }
  int          decreases = 0;
  double const horizon   = 16.0 * scale;
  while (true)
  {
    if (t > config.max_bracket)
    {
      throw TaxDivergence("conditional value still increasing at tax " + std::to_string(t) +
                          "; the optimal tax diverges");
    }
    ladder.push_back(t);
    values.push_back(eval.Value(t));
    std::size_t const k = values.size() - 1;
    decreases           = values[k] < values[k - 1] ? decreases + 1 : 0;
    if (decreases >= 2 && t >= horizon)
    {
      break;
    }
    t *= config.bracket_growth;
  }

  // Local maxima of the ladder, best three by value.
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < values.size(); ++k)
  {
    bool const left  = k == 0 || values[k] >= values[k - 1];
    bool const right = k + 1 == values.size() || values[k] >= values[k + 1];
    if (left && right && std::isfinite(values[k]))
    {
      peaks.push_back(k);
    }
  }
  if (peaks.empty())
  {
    throw ConvergenceError("no finite local maximum on the tax ladder");
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > 3)
  {
    peaks.resize(3);
  }

  std::vector<Candidate> candidates;
  for (std::size_t k : peaks)
  {
    double const lo = k == 0 ? ladder[0] : ladder[k - 1];
    double const hi = k + 1 == ladder.size() ? ladder[k] : ladder[k + 1];
    candidates.push_back(Refine(eval, lo, hi, ladder[k], values[k], config));
  }

  // Highest value first; near ties go to the lowest tax.
  std::sort(candidates.begin(), candidates.end(),
            [](Candidate const &a, Candidate const &b) { return a.value > b.value; });
  double const best_value = candidates.front().value;
  double const tie_tol    = 1e-12 * std::max(1.0, std::fabs(best_value));
  std::size_t  chosen     = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c)
  {
    if (best_value - candidates[c].value <= tie_tol && candidates[c].tax < candidates[chosen].tax)
    {
      chosen = c;
    }
  }
  bool non_unique = false;
  for (std::size_t c = 0; c < candidates.size(); ++c)
  {
    double const gap = best_value - candidates[c].value;
    double const dt  = std::fabs(candidates[c].tax - candidates[chosen].tax);
    if (c != chosen && gap <= 1e-9 * std::max(1.0, std::fabs(best_value)) &&
        dt > 1e-6 * std::max(1.0, std::fabs(candidates[chosen].tax)))
    {
      non_unique = true;
    }
  }
  auto &best = candidates[chosen];
  return {{std::move(best.allocation), best.tax}, best.value, non_unique};
}

BudgetDecision Optimize(AgentType const &type, BudgetInstance const &instance,
                        SolverConfig const &config)
{
  return Solve(TypeObjective(type), instance, config).decision;
}

BudgetDecision OptimizeBiased(AgentType const &type, BiasSpec const &bias,
                              BudgetInstance const &instance, SolverConfig const &config)
{
  if (bias.Inactive())
  {
    return Optimize(type, instance, config);
  }
  Objective obj = TypeObjective(type);
  obj.bias      = &bias;
  return Solve(obj, instance, config).decision;
}

BudgetDecision OptimizeHetero(std::span<AgentType const> profile, BudgetInstance const &instance,
                              SolverConfig const &config)
{
  return Solve(WelfareObjective(profile, instance), instance, config).decision;
}

std::vector<double> EquitableAllocation(double tax, BudgetInstance const &instance)
{
  return EquitableAllocationAtBudget(instance.Budget(tax), instance);
}

std::vector<double> EquitableAllocationAtBudget(double budget, BudgetInstance const &instance)
{
  if (!(budget > 0.0))
  {
    throw DomainError("equitable allocation needs a positive budget");
  }
  std::size_t const m = instance.goods;
  if (m == 1)
  {
    return {1.0};
  }
  auto const &curves = instance.gain_curves;
  double      lo     = kInf;
  double      hi     = -kInf;
  for (auto const &c : curves)
  {
    lo = std::min(lo, c.Value(budget / static_cast<double>(m)));
    hi = std::max(hi, c.Value(budget));
  }
  std::vector<double> x(m);
  auto const          fill = [&](double level) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j)
    {
      x[j] = curves[j].Inverse(std::max(level, curves[j].ValueAtZero())) / budget;
      total += x[j];
    }
    return total;
  };
  for (int i = 0; i < 300; ++i)
  {
    double const mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
    {
      break;
    }
    if (fill(mid) > 1.0)
    {
      hi = mid;
    }
    else
    {
      lo = mid;
    }
  }
  double const total = fill(0.5 * (lo + hi));
  for (auto &v : x)
  {
    v /= total;
  }
  return x;
}

std::vector<double> MrsResiduals(AgentType const &type, BudgetDecision const &decision,
                                 BudgetInstance const &instance, double tax_weight)
{
  double const        budget = instance.Budget(decision.tax);
  double const        fprime = instance.money_curve.Derivative(tax_weight * decision.tax);
  std::vector<double> out(instance.goods, kNaN);
  for (std::size_t j = 0; j < instance.goods; ++j)
  {
    double const a = type.alloc_weights[j];
    double const x = decision.allocation[j];
    if (a == 0.0 || x == 0.0)
    {
      continue;
    }
    double const ratio  = instance.MrsFactor() * instance.gain_curves[j].Derivative(x * budget) /
                         (tax_weight * fprime);
    double const target = type.money_weight / a;
    out[j]              = std::fabs(ratio - target) / target;
  }
  return out;
}

OracleResult GridOracle(Objective const &objective, BudgetInstance const &instance,
                        std::size_t resolution, double t_lo, double t_hi, int zoom_passes)
{
  std::size_t const m = instance.goods;
  if (m > 3)
  {
    throw InvalidArgument("grid oracle supports at most three goods");
  }
  if (resolution < 10)
  {
    throw ResolutionTooCoarse("grid oracle needs at least 10 points per axis");
  }
  if (!(t_hi > t_lo))
  {
    throw InvalidArgument("grid oracle needs t_lo < t_hi");
  }
  if (objective.bias != nullptr && objective.bias->lambda > 0.0)
  {
    throw InvalidArgument("grid oracle does not evaluate phantom bias terms");
  }
  double const g = instance.GainWeight();

  auto const term = [&](std::size_t j, double share, double budget) {
    double const w = objective.gain_weights[j];
    if (w == 0.0)
    {
      return 0.0;
    }
    double const spend = share * budget;
    auto const  &curve = instance.gain_curves[j];
    if (spend < 0.0 || (spend == 0.0 && !curve.AdmitsZero()))
    {
      return -kInf;
    }
    return g * w * curve.Value(spend);
  };
  auto const money = [&](double t) {
    double total = 0.0;
    for (auto const &mt : objective.money)
    {
      if (!instance.money_curve.InDomain(mt.omega * t))
      {
        return kInf;
      }
      total += mt.coefficient * instance.money_curve.Value(mt.omega * t);
    }
    if (objective.bias != nullptr)
    {
      total -= objective.bias->Psi(t);
    }
    return total;
  };

  OracleResult best{{std::vector<double>(m, 0.0), t_lo}, -kInf};
  // Search window: per-axis lattice over [x_lo, x_hi] for the first m-1
  // shares (the last share is the remainder), and [tl, th] for the tax.
  std::vector<double> x_lo(m, 0.0);
  std::vector<double> x_hi(m, 1.0);
  double              tl = t_lo;
  double              th = t_hi;
  std::size_t         points = resolution;

  for (int pass = 0; pass <= zoom_passes; ++pass)
  {
    double const dt = (th - tl) / static_cast<double>(points);
    std::vector<double> dx(m);
    for (std::size_t j = 0; j < m; ++j)
    {
      dx[j] = (x_hi[j] - x_lo[j]) / static_cast<double>(points);
    }
    std::vector<double> col0(points + 1);
    std::vector<double> col1(points + 1);
    for (std::size_t it = 0; it <= points; ++it)
    {
      double const t = tl + dt * static_cast<double>(it);
      double const budget = instance.Budget(t);
      if (!(budget > 0.0))
      {
        continue;
      }
      double const cost = money(t);
      if (!std::isfinite(cost))
      {
        continue;
      }
      auto consider = [&](double value, double a, double b) {
        if (value > best.value)
        {
          best.value = value;
          best.decision.tax = t;
          best.decision.allocation.assign(m, 0.0);
          best.decision.allocation[0] = a;
          if (m >= 2)
          {
            best.decision.allocation[1] = m == 2 ? 1.0 - a : b;
          }
          if (m == 3)
          {
            best.decision.allocation[2] = 1.0 - a - b;
          }
        }
      };
      if (m == 1)
      {
        consider(term(0, 1.0, budget) - cost, 1.0, 0.0);
        continue;
      }
      for (std::size_t i = 0; i <= points; ++i)
      {
        double const a = x_lo[0] + dx[0] * static_cast<double>(i);
        col0[i]        = a >= 0.0 && a <= 1.0 ? term(0, a, budget) : -kInf;
        if (m == 3)
        {
          double const b = x_lo[1] + dx[1] * static_cast<double>(i);
          col1[i]        = b >= 0.0 && b <= 1.0 ? term(1, b, budget) : -kInf;
        }
      }
      for (std::size_t i = 0; i <= points; ++i)
      {
        double const a = x_lo[0] + dx[0] * static_cast<double>(i);
        if (!(a >= 0.0 && a <= 1.0))
        {
          continue;
        }
        if (m == 2)
        {
          consider(col0[i] + term(1, 1.0 - a, budget) - cost, a, 0.0);
          continue;
        }
        for (std::size_t k = 0; k <= points; ++k)
        {
          double const b = x_lo[1] + dx[1] * static_cast<double>(k);
          double const c = 1.0 - a - b;
          if (!(b >= 0.0) || c < -1e-15)
          {
            continue;
          }
          consider(col0[i] + col1[k] + term(2, std::max(c, 0.0), budget) - cost, a, b);
        }
      }
    }
    if (!std::isfinite(best.value))
    {
      throw ConvergenceError("grid oracle found no feasible point");
    }
    // Zoom: two cells on each side of the incumbent, coarser lattice.
    tl = std::max(t_lo, best.decision.tax - 2.0 * dt);
    th = std::min(t_hi, best.decision.tax + 2.0 * dt);
    for (std::size_t j = 0; j + 1 < m; ++j)
    {
      x_lo[j] = std::max(0.0, best.decision.allocation[j] - 2.0 * dx[j]);
      x_hi[j] = std::min(1.0, best.decision.allocation[j] + 2.0 * dx[j]);
    }
    points = std::min<std::size_t>(resolution, 64);
  }
  return best;
}

}  // namespace usvcg
