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

#include "usvcg/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "usvcg/solver.hpp"

namespace usvcg {
namespace {

std::vector<double> Geometric(double lo, double hi, int count)
{
  std::vector<double> out(static_cast<std::size_t>(count));
  double const        step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k)
  {
    out[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
  }
  return out;
}

/// Slopes between consecutive sampled points must be positive and, when
/// `concave`, strictly decreasing (strictly increasing otherwise).
bool ShapeHolds(std::vector<double> const &xs, std::vector<double> const &ys, bool concave)
{
  double prev_slope = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k)
  {
    double const slope = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
    if (!(slope > 0.0))
    {
      return false;
    }
    if (k > 1 && (concave ? !(slope < prev_slope) : !(slope > prev_slope)))
    {
      return false;
    }
    prev_slope = slope;
  }
  return true;
}

std::string Name(char const *base, std::size_t index)
{
  return std::string(base) + "[" + std::to_string(index) + "]";
}

}  // namespace

bool ValidationReport::AllPassed() const noexcept
{
  return std::all_of(checks.begin(), checks.end(), [](auto const &c) { return c.passed; });
}

ValidationReport ValidateAssumptions(BudgetInstance const &instance, ValidationConfig const &config)
{
  ValidationReport report;
  auto const       grid = Geometric(1e-3, 1e6, config.samples);

  // Gain curves: increasing, strictly concave, non-positive limit at zero.
  {
    AssumptionCheck check{"gain_shape", true, "", "all gain curves increasing and strictly concave"};
    for (std::size_t j = 0; j < instance.goods && check.passed; ++j)
    {
      auto const         &c = instance.gain_curves[j];
      std::vector<double> ys;
      for (double x : grid)
      {
        ys.push_back(c.Value(x));
      }
      if (!ShapeHolds(grid, ys, true))
      {
        check = {"gain_shape", false, Name("gain_curves", j), "sampled slopes not decreasing"};
      }
      else if (!(c.ValueAtZero() <= 0.0))
      {
        check = {"gain_shape", false, Name("gain_curves", j), "limit at zero is positive"};
      }
    }
    report.checks.push_back(check);
  }

  // Money curve: f(0) = 0, convex below zero, concave above.
  {
    auto const     &f = instance.money_curve;
    AssumptionCheck check{"money_shape", true, "money_curve",
                          "f(0) = 0, convex on losses, concave on gains"};
    std::vector<double> pos;
    for (double x : grid)
    {
      pos.push_back(f.Value(x));
    }
    std::vector<double> neg_x;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
    {
      if (f.InDomain(-*it))
      {
        neg_x.push_back(-*it);
      }
    }
    std::vector<double> neg_y;
    for (double x : neg_x)
    {
      neg_y.push_back(f.Value(x));
    }
    if (f.Value(0.0) != 0.0)
    {
      check.passed = false;
      check.detail = "f(0) is not zero";
    }
    else if (!ShapeHolds(grid, pos, true))
    {
      check.passed = false;
      check.detail = "not strictly concave on gains";
    }
    else if (neg_x.size() >= 3 && !ShapeHolds(neg_x, neg_y, false))
    {
      check.passed = false;
      check.detail = "not strictly convex on losses";
    }
    report.checks.push_back(check);
  }

  // Lower tax bound is never optimal: near the bound some good's marginal
  // gain from tax exceeds the marginal money disutility, for every agent.
  {
    Profile profile = instance.types;
    bool    assumed = false;
    if (profile.empty())
    {
      profile.push_back(
          {std::vector<double>(instance.goods, 1.0 / static_cast<double>(instance.goods)), 1.0});
      assumed = true;
    }
    AssumptionCheck check{"tax_floor_suboptimal", true, "",
                          assumed ? "checked for the uniform reference type"
                                  : "checked for every agent"};
    double const K = instance.MrsFactor();
    for (std::size_t i = 0; i < profile.size() && check.passed; ++i)
    {
      double const omega = instance.TaxWeight(i);
      double const lo    = instance.FeasibleTaxMin(std::span<double const>(&omega, 1));
      bool         found = false;
      for (double shift : {0.0, 1e-9, 1e-7, 1e-5})
      {
        double const t      = lo + shift * std::max(1.0, std::fabs(lo));
        double const budget = instance.Budget(t);
        double const cost   = profile[i].money_weight * omega * instance.money_curve.Derivative(omega * t);
        for (std::size_t j = 0; j < instance.goods && !found; ++j)
        {
          double const a = profile[i].alloc_weights[j];
          if (a > 0.0 && K * a * instance.gain_curves[j].Derivative(budget) > cost)
          {
            found = true;
          }
        }
        if (found)
        {
          break;
        }
      }
      if (!found)
      {
        check = {"tax_floor_suboptimal", false, Name("agents", i),
                 "money disutility dominates every good at the tax floor"};
      }
    }
    report.checks.push_back(check);
  }

  // theta'_j(z / m) / f'(z) -> 0: log-log slope near the horizon.
  {
    AssumptionCheck check{"no_infinite_tax", true, "", "derivative ratio vanishes at infinity"};
    auto const      m = static_cast<double>(instance.goods);
    for (std::size_t j = 0; j < instance.goods && check.passed; ++j)
    {
      auto const  &c     = instance.gain_curves[j];
      auto const   ratio = [&](double z) {
        return c.Derivative(z / m) / instance.money_curve.Derivative(z);
      };
      double const z1    = config.horizon * 1e-2;
      double const z2    = config.horizon;
      double const slope = (std::log(ratio(z2)) - std::log(ratio(z1))) / std::log(z2 / z1);
      if (!(slope < -0.01))
      {
        std::ostringstream os;
        os << "log-log slope " << slope << " of the derivative ratio does not vanish";
        check = {"no_infinite_tax", false, Name("gain_curves", j), os.str()};
      }
    }
    report.checks.push_back(check);
  }

  // Interior optima: case 2 is structural, case 1 compares marginals at 0.
  {
    bool const case2 = std::all_of(instance.gain_curves.begin(), instance.gain_curves.end(),
                                   [](auto const &c) { return c.DerivativeDivergesAtZero(); });
    bool case1 = !instance.types.empty();
    double const f0 = instance.money_curve.Derivative(0.0);
    for (std::size_t i = 0; i < instance.types.size() && case1; ++i)
    {
      for (std::size_t j = 0; j < instance.goods; ++j)
      {
        double const lhs = static_cast<double>(instance.agents) *
                           instance.types[i].alloc_weights[j] *
                           instance.gain_curves[j].DerivativeAtZero();
        if (!(lhs > instance.types[i].money_weight * f0))
        {
          case1 = false;
          break;
        }
      }
    }
    report.interior_case = case2 ? "case2" : (case1 ? "case1" : "none");
    report.checks.push_back({"interior_optima", case1 || case2, "",
                             case2   ? "every gain derivative diverges at zero"
                             : case1 ? "every agent funds every good at zero spend"
                                     : "boundary optima possible"});
  }

  if (instance.semantics == Semantics::Nominal &&
      instance.mrs_convention == MrsConvention::NScaled)
  {
    report.tax_divergent = std::any_of(
        instance.gain_curves.begin(), instance.gain_curves.end(),
        [](auto const &c) { return c.kind() == GainCurve::Kind::Power; });
  }
  return report;
}

}  // namespace usvcg
