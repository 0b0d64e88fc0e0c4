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

#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "usvcg/bias.hpp"
#include "usvcg/solver.hpp"

using namespace usvcg;
using usvcg::testing::RandomAssumptionInstance;
using usvcg::testing::RandomType;
using usvcg::testing::RunningInstance;

namespace {

/// Plain 1-D scan with local refinement; independent of the solver.
template <typename F>
double ScanArgmax(F const &fn, double lo, double hi, std::size_t points)
{
  double best_x = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 4; ++pass)
  {
    double const step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k)
    {
      double const x = lo + step * static_cast<double>(k);
      double const v = fn(x);
      if (v > best_v)
      {
        best_v = v;
        best_x = x;
      }
    }
    lo = std::max(lo, best_x - 2.0 * step);
    hi = best_x + 2.0 * step;
  }
  return best_x;
}

BudgetInstance PerCapitaSingleGood()
{
  BudgetInstance inst;
  inst.goods       = 1;
  inst.agents      = 4;
  inst.semantics   = Semantics::PerCapita;
  inst.gain_curves = {GainCurve::Power(1.0, 0.3)};
  inst.money_curve = MoneyCurve::Power(0.5);
  return inst;
}

}  // namespace

TEST_SUITE("solver")
{
TEST_CASE("log gains allocate by weight at any budget")
{
  auto const inst = RunningInstance();
  for (double budget : {0.5, 10.0, 1e4})
  {
    auto const x = InnerAllocation(std::vector<double>{0.7, 0.3}, budget, inst);
    CHECK(x[0] == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(x[1] == doctest::Approx(0.3).epsilon(1e-9));
  }
  auto const u = InnerAllocation(std::vector<double>{0.5, 0.5}, 42.0, inst);
  CHECK(u[0] == doctest::Approx(0.5));
  auto const z = InnerAllocation(std::vector<double>{0.0, 1.0}, 42.0, inst);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 1.0);
}

TEST_CASE("mixed catalog inner allocation matches a fine scan")
{
  auto inst        = RunningInstance();
  inst.gain_curves = {GainCurve::Log(10.0), GainCurve::Power(1.0, 0.5)};
  auto const x     = InnerAllocation(std::vector<double>{0.5, 0.5}, 100.0, inst);
  double const scan = ScanArgmax(
      [&](double x1) {
        return 0.5 * inst.gain_curves[0].Value(x1 * 100.0) +
               0.5 * inst.gain_curves[1].Value((1.0 - x1) * 100.0);
      },
      1e-6, 1.0, 10001);
  CHECK(std::fabs(x[0] - scan) <= 1e-3);
  CHECK(x[0] + x[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("shifted curves leave weak goods at zero")
{
  auto inst        = RunningInstance();
  inst.gain_curves = {GainCurve::Power(10.0, 0.5, 1.0), GainCurve::Power(10.0, 0.5, 1.0)};
  // 0.1 * 5 < 0.9 * 5 / sqrt(B + 1) while B < 80.
  auto const x = InnerAllocation(std::vector<double>{0.9, 0.1}, 50.0, inst);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 0.0);
  auto const y = InnerAllocation(std::vector<double>{0.9, 0.1}, 200.0, inst);
  CHECK(y[1] > 0.0);
}

TEST_CASE("mean type of the running profile")
{
  auto const inst = RunningInstance();
  auto const d    = Optimize(MeanType(inst.types), inst);
  CHECK(d.allocation[0] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(d.tax == doctest::Approx(std::pow(20.0 * 30.0 / 31.0, 2)).epsilon(1e-9));
  CHECK(d.tax == doctest::Approx(374.7).epsilon(0.5 / 374.7));
  auto const rounded = Optimize(AgentType{{0.4, 0.6}, 1.03}, inst);
  CHECK(std::fabs(rounded.tax - 377.0) <= 1.0);
}

TEST_CASE("log-sqrt family has a closed-form optimum")
{
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k)
  {
    auto inst         = RunningInstance();
    double const scale = 1.0 + k;
    inst.gain_curves  = {GainCurve::Log(scale), GainCurve::Log(scale)};
    inst.agents       = 1 + static_cast<std::size_t>(k);
    inst.types.clear();
    auto const a = RandomType(rng, 2, false, 0.2, 5.0);
    auto const d = Optimize(a, inst);
    CHECK(d.tax == doctest::Approx(std::pow(2.0 * scale / a.money_weight, 2)).epsilon(1e-9));
    CHECK(d.allocation[0] == doctest::Approx(a.alloc_weights[0]).epsilon(1e-9));
  }
}

TEST_CASE("single good per-capita optimum matches a dense scan and the closed form")
{
  auto const inst = PerCapitaSingleGood();
  auto const d    = Optimize(AgentType{{1.0}, 1.0}, inst);
  CHECK(d.allocation == std::vector<double>{1.0});
  // 0.3 t^-0.7 = 0.5 t^-0.5.
  CHECK(d.tax == doctest::Approx(std::pow(0.6, 5.0)).epsilon(1e-9));
  double const scan = ScanArgmax(
      [](double t) { return std::pow(t, 0.3) - std::sqrt(t); }, 1e-9, 1.0, 1000001);
  // A value scan resolves a flat maximum only to about sqrt(machine epsilon).
  CHECK(std::fabs(d.tax - scan) <= 1e-7 * std::max(1.0, scan));
}

TEST_CASE("MRS conditions hold at the optimum")
{
  for (int k = 0; k < 20; ++k)
  {
    auto const inst = RandomAssumptionInstance(
        300 + k, {2 + static_cast<std::size_t>(k % 2), 3, k % 2 == 0, k % 3 == 0, k % 4 == 1});
    for (auto const &a : inst.types)
    {
      auto const d      = Optimize(a, inst);
      double const B    = inst.Budget(d.tax);
      double const rate = inst.semantics == Semantics::Nominal ? double(inst.agents) : 1.0;
      for (std::size_t j = 0; j < inst.goods; ++j)
      {
        if (d.allocation[j] == 0.0)
        {
          continue;
        }
        double const lhs = rate * inst.gain_curves[j].Derivative(d.allocation[j] * B) /
                           inst.money_curve.Derivative(d.tax);
        double const rhs = a.money_weight / a.alloc_weights[j];
        CHECK(std::fabs(lhs - rhs) <= 1e-6 * rhs);
      }
      for (double r : MrsResiduals(a, d, inst))
      {
        CHECK((std::isnan(r) || r <= 1e-6));
      }
    }
  }
}

TEST_CASE("the optimum dominates random feasible decisions")
{
  std::mt19937_64                        rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto const inst = RandomAssumptionInstance(17, {3, 3, true, true, false});
  auto const a    = inst.types[0];
  auto const d    = Optimize(a, inst);
  double const best = Valuation(a, d, inst);
  double const lo   = inst.FeasibleTaxMin(std::vector<double>{1.0});
  for (int k = 0; k < 1000; ++k)
  {
    BudgetDecision r;
    r.allocation = RandomType(rng, 3).alloc_weights;
    r.tax        = lo + (3.0 * d.tax - lo) * u(rng);
    CHECK(Valuation(a, r, inst) <= best + 1e-12 * std::fabs(best));
  }
}

TEST_CASE("optimal taxes stay bounded on a money-weight band")
{
  std::mt19937_64 rng(21);
  auto const      inst = RunningInstance();
  double          top  = 0.0;
  for (int k = 0; k < 200; ++k)
  {
    top = std::max(top, Optimize(RandomType(rng, 2, true, 0.5, 2.0), inst).tax);
  }
  CHECK(top <= std::pow(20.0 / 0.5, 2) * (1.0 + 1e-9));
}

TEST_CASE("divergent instances raise TaxDivergence")
{
  auto const file = usvcg::testing::LoadInstance("divergent.json");
  CHECK_THROWS_AS(Optimize(AgentType{{1.0}, 1.0}, file.instance), TaxDivergence);
}

TEST_CASE("solver is deterministic")
{
  auto const inst = RandomAssumptionInstance(4, {3, 10, true, true, true});
  auto const a    = Solve(WelfareObjective(inst.types, inst), inst);
  auto const b    = Solve(WelfareObjective(inst.types, inst), inst);
  CHECK(a.decision == b.decision);
  CHECK(a.value == b.value);
}

TEST_CASE("grid oracle agrees with the solver")
{
  auto const inst = RunningInstance();
  auto const obj  = WelfareObjective(inst.types, inst);
  auto const sol  = Solve(obj, inst);
  auto const orc  = GridOracle(obj, inst, 500, 1.0, 2.0 * sol.decision.tax);
  CHECK(std::fabs(orc.value - sol.value) <= 1e-4 * std::fabs(sol.value));
  CHECK(orc.value <= sol.value + 1e-9 * std::fabs(sol.value));
  CHECK_THROWS_AS(GridOracle(obj, inst, 9, 1.0, 10.0), ResolutionTooCoarse);

  auto const one = PerCapitaSingleGood();
  auto const o1  = GridOracle(TypeObjective({{1.0}, 1.0}), one, 100, 1e-6, 1.0);
  CHECK(o1.decision.allocation == std::vector<double>{1.0});
  CHECK(o1.decision.tax == doctest::Approx(std::pow(0.6, 5.0)).epsilon(1e-4));
}

TEST_CASE("zero bias leaves the optimum unchanged")
{
  auto const inst = RunningInstance();
  BiasSpec   none;
  auto const mean = MeanType(inst.types);
  CHECK(OptimizeBiased(mean, none, inst) == Optimize(mean, inst));
}

TEST_CASE("equitable phantom bias shifts the allocation only")
{
  auto const inst = RunningInstance();
  auto const mean = MeanType(inst.types);
  for (double lambda : {0.5, 1.0, 3.0})
  {
    BiasSpec b;
    b.lambda      = lambda;
    b.target_kind = BiasSpec::TargetKind::Equitable;
    auto const d  = OptimizeBiased(mean, b, inst);
    CHECK(d.allocation[0] == doctest::Approx((0.4 + lambda / 2.0) / (1.0 + lambda)).epsilon(1e-9));
    CHECK(d.allocation[1] == doctest::Approx((0.6 + lambda / 2.0) / (1.0 + lambda)).epsilon(1e-9));
    CHECK(d.tax == doctest::Approx(std::pow(20.0 * 30.0 / 31.0, 2)).epsilon(1e-8));
  }
}

TEST_CASE("a dominant bias reaches its target")
{
  auto const inst = RunningInstance();
  BiasSpec   b;
  b.lambda      = 1e6;
  b.target_kind = BiasSpec::TargetKind::Constant;
  b.target      = {0.2, 0.8};
  auto const d  = OptimizeBiased(MeanType(inst.types), b, inst);
  CHECK(std::fabs(d.allocation[0] - 0.2) <= 1e-3);
}

TEST_CASE("equitable allocation equalizes levels")
{
  auto inst        = RunningInstance();
  inst.gain_curves = {GainCurve::Log(10.0), GainCurve::Log(10.0)};
  auto const u     = EquitableAllocationAtBudget(100.0, inst);
  CHECK(u[0] == doctest::Approx(0.5));

  inst.gain_curves = {GainCurve::Log(10.0), GainCurve::Log(20.0)};
  auto const x     = EquitableAllocationAtBudget(100.0, inst);
  CHECK(10.0 * std::log(100.0 * x[0]) == doctest::Approx(20.0 * std::log(100.0 * x[1])));
  CHECK(x[0] + x[1] == doctest::Approx(1.0));
  double const grid = ScanArgmax(
      [&](double x1) {
        return -std::fabs(10.0 * std::log(100.0 * x1) - 20.0 * std::log(100.0 * (1.0 - x1)));
      },
      1e-7, 1.0 - 1e-7, 100001);
  CHECK(std::fabs(grid - x[0]) <= 1e-5);
  CHECK_THROWS_AS(EquitableAllocationAtBudget(0.0, inst), DomainError);
}

TEST_CASE("equitable allocation maximizes the smallest level")
{
  std::mt19937_64 rng(33);
  auto            inst = RunningInstance();
  inst.goods           = 3;
  inst.gain_curves     = {GainCurve::Log(5.0), GainCurve::Power(3.0, 0.5), GainCurve::Log(12.0)};
  auto const x         = EquitableAllocationAtBudget(80.0, inst);
  auto const min_level = [&](std::vector<double> const &a) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j)
    {
      lo = std::min(lo, a[j] > 0.0 ? inst.gain_curves[j].Value(a[j] * 80.0)
                                   : inst.gain_curves[j].ValueAtZero());
    }
    return lo;
  };
  double const at = min_level(x);
  for (int k = 0; k < 1000; ++k)
  {
    CHECK(min_level(RandomType(rng, 3).alloc_weights) <= at + 1e-9);
  }
}

TEST_CASE("heterogeneous optimum with unit weights equals the homogeneous one")
{
  auto const inst = RunningInstance();
  auto const het  = OptimizeHetero(inst.types, inst);
  auto const hom  = Optimize(MeanType(inst.types), inst);
  CHECK(het.tax == doctest::Approx(hom.tax).epsilon(1e-9));
  CHECK(het.allocation[0] == doctest::Approx(hom.allocation[0]).epsilon(1e-9));
}

TEST_CASE("power money curves absorb the tax weight into the money weight")
{
  auto inst        = RunningInstance();
  inst.tax_weights = {2.0, 0.5, 0.5};
  auto const het   = OptimizeHetero(inst.types, inst);
  Profile absorbed = inst.types;
  for (std::size_t i = 0; i < 3; ++i)
  {
    absorbed[i].money_weight *= std::sqrt(inst.tax_weights[i]);
  }
  auto const hom = Optimize(MeanType(absorbed), RunningInstance());
  CHECK(het.tax == doctest::Approx(hom.tax).epsilon(1e-9));
  CHECK(het.allocation[1] == doctest::Approx(hom.allocation[1]).epsilon(1e-9));
}

TEST_CASE("heterogeneous optimum with a KT money curve matches the grid oracle")
{
  auto inst            = RunningInstance();
  inst.external_budget = 30.0;
  inst.money_curve     = MoneyCurve::KahnemanTversky(0.88, 0.88, 2.25);
  inst.tax_weights     = {2.0, 0.5, 0.5};
  auto const obj       = WelfareObjective(inst.types, inst);
  auto const sol       = Solve(obj, inst);
  REQUIRE(sol.decision == OptimizeHetero(inst.types, inst));
  auto const orc = GridOracle(obj, inst, 500, -9.99, 3.0 * std::fabs(sol.decision.tax) + 10.0);
  CHECK(std::fabs(orc.value - sol.value) <= 1e-4 * std::fabs(sol.value));
  CHECK(orc.value <= sol.value + 1e-9 * std::fabs(sol.value));
}
}
