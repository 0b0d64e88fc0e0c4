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
#include "usvcg/mechanism.hpp"
#include "usvcg/solver.hpp"

using namespace usvcg;
using usvcg::testing::RandomAssumptionInstance;
using usvcg::testing::RunningInstance;

namespace {

/// Sum of valuations at the decision minus the welfare of the others at
/// their own optimum, evaluated without the mechanism code.
double IdentityTarget(Profile const &profile, std::size_t i, BudgetDecision const &d,
                      BudgetInstance const &inst)
{
  double total = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k)
  {
    total += Valuation(profile[k], d, inst, inst.TaxWeight(k));
  }
  return total - Solve(WelfareObjective(profile, inst, i), inst).value;
}

BudgetInstance PerCapitaLogSqrt(std::size_t n)
{
  BudgetInstance inst;
  inst.goods       = 2;
  inst.agents      = n;
  inst.semantics   = Semantics::PerCapita;
  inst.gain_curves = {GainCurve::Log(10.0), GainCurve::Log(10.0)};
  // Odd extension so rebates larger than the tax stay invertible.
  inst.money_curve = MoneyCurve::Power(0.5, -std::numeric_limits<double>::infinity());
  return inst;
}

}  // namespace

TEST_SUITE("mechanism")
{
TEST_CASE("running profile outcome")
{
  auto const inst = RunningInstance();
  auto const o    = RunUsVcg(inst.types, inst);
  CHECK(o.decision.allocation[0] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(o.decision.tax == doctest::Approx(std::pow(600.0 / 31.0, 2)).epsilon(1e-9));
  for (std::size_t i = 0; i < 3; ++i)
  {
    CHECK(o.raw_vcg[i] >= -1e-9);
    CHECK(o.identity_residuals[i] <= 1e-8);
    // Two independent solver calls: the others at their own optimum and at
    // the chosen decision.
    auto const   excl = MeanExcluding(inst.types, i);
    double const own  = Valuation(excl, Optimize(excl, inst), inst);
    double const here = Valuation(excl, o.decision, inst);
    CHECK(o.raw_vcg[i] == doctest::Approx(2.0 * (own - here)).epsilon(1e-9));
    CHECK(o.pivots[i] == doctest::Approx(ClarkePivot(inst.types, i, inst)).epsilon(1e-12));
  }
  auto const excl0 = MeanExcluding(inst.types, 0);
  CHECK(ClarkePivot(inst.types, 0, inst) ==
        doctest::Approx(2.0 * Valuation(excl0, Optimize(excl0, inst), inst)));
}

TEST_CASE("the realized utility identity holds on random profiles")
{
  for (int k = 0; k < 12; ++k)
  {
    auto const inst = RandomAssumptionInstance(
        500 + k, {2 + static_cast<std::size_t>(k % 2), k % 3 == 0 ? 10u : 3u, k % 2 == 0,
                  k % 4 == 1, k % 3 == 2});
    auto const o = RunUsVcg(inst.types, inst);
    for (std::size_t i = 0; i < inst.agents; ++i)
    {
      double const u = RealizedUtility(inst.types[i], o.decision, o.payments[i], inst);
      CHECK(std::fabs(u - IdentityTarget(inst.types, i, o.decision, inst)) <=
            1e-8 * std::max(1.0, std::fabs(u)));
      CHECK(o.raw_vcg[i] >= -1e-9);
    }
  }
}

TEST_CASE("identical agents pay nothing")
{
  auto inst  = RunningInstance();
  inst.types = Profile(3, AgentType{{0.3, 0.7}, 0.9});
  auto const o = RunUsVcg(inst.types, inst);
  for (double p : o.payments)
  {
    CHECK(p == 0.0);
  }
}

TEST_CASE("a single agent pays nothing")
{
  auto inst   = RunningInstance();
  inst.agents = 1;
  inst.types  = {{{0.3, 0.7}, 0.9}};
  auto const o = RunUsVcg(inst.types, inst);
  CHECK(o.payments == std::vector<double>{0.0});
  CHECK_THROWS_AS(ClarkePivot(inst.types, 0, inst), EmptyProfile);
}

TEST_CASE("opposite extreme types both pay")
{
  auto inst   = RunningInstance();
  inst.agents = 2;
  inst.types  = {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}};
  auto const o = RunUsVcg(inst.types, inst);
  CHECK(o.raw_vcg[0] > 0.0);
  CHECK(o.raw_vcg[1] > 0.0);
}

TEST_CASE("sensitive payment by direct evaluation")
{
  auto const f = MoneyCurve::Power(0.5);
  CHECK(SensitivePayment(0.13, 377.0, 1.3, f) ==
        doctest::Approx(-377.0 + std::pow(std::sqrt(377.0) + 0.1, 2)));
  CHECK(SensitivePayment(0.13, 377.0, 1.3, f) == doctest::Approx(3.894).epsilon(1e-3));
  CHECK(SensitivePayment(0.0, 377.0, 1.3, f) == 0.0);
  double prev = SensitivePayment(1.0, 100.0, 0.5, f);
  for (double af : {1.0, 2.0, 10.0, 1e3, 1e6})
  {
    double const p = SensitivePayment(1.0, 100.0, af, f);
    CHECK(p < prev);
    CHECK(p > 0.0);
    prev = p;
  }
  CHECK(prev < 1e-4);
  CHECK(SensitivePayment(2.0, 100.0, 1.0, f) > SensitivePayment(1.0, 100.0, 1.0, f));
}

TEST_CASE("realized utility with zero payment is the valuation")
{
  auto const inst = RunningInstance();
  BudgetDecision const d{{0.4, 0.6}, 300.0};
  CHECK(RealizedUtility(inst.types[0], d, 0.0, inst) == Valuation(inst.types[0], d, inst));
  CHECK(RealizedUtility(inst.types[0], d, 0.0, inst, 2.0) ==
        doctest::Approx(Valuation(inst.types[0], d, inst, 2.0)));
}

TEST_CASE("heterogeneous run with unit weights equals the plain run")
{
  auto const inst = RunningInstance();
  auto const a    = RunUsVcg(inst.types, inst);
  auto const b    = RunUsVcgHetero(inst.types, inst);
  CHECK(b.decision.tax == doctest::Approx(a.decision.tax).epsilon(1e-9));
  for (std::size_t i = 0; i < 3; ++i)
  {
    CHECK(b.payments[i] == doctest::Approx(a.payments[i]).epsilon(1e-6));
  }
}

TEST_CASE("power money curves absorb tax weights in the payments")
{
  auto inst        = RunningInstance();
  inst.tax_weights = {2.0, 0.5, 0.5};
  auto const het   = RunUsVcgHetero(inst.types, inst);
  auto       plain = RunningInstance();
  for (std::size_t i = 0; i < 3; ++i)
  {
    plain.types[i].money_weight *= std::sqrt(inst.tax_weights[i]);
  }
  auto const hom = RunUsVcg(plain.types, plain);
  CHECK(het.decision.tax == doctest::Approx(hom.decision.tax).epsilon(1e-9));
  for (std::size_t i = 0; i < 3; ++i)
  {
    CHECK(het.raw_vcg[i] == doctest::Approx(hom.raw_vcg[i]).epsilon(1e-6));
    CHECK(het.payments[i] == doctest::Approx(inst.tax_weights[i] * hom.payments[i]).epsilon(1e-6));
  }
}

TEST_CASE("heterogeneous identity with a KT money curve")
{
  auto inst            = RunningInstance();
  inst.external_budget = 30.0;
  inst.money_curve     = MoneyCurve::KahnemanTversky(0.88, 0.88, 2.25);
  inst.tax_weights     = {1.5, 1.0, 0.5};
  auto const o         = RunUsVcgHetero(inst.types, inst);
  for (std::size_t i = 0; i < 3; ++i)
  {
    double const u = RealizedUtility(inst.types[i], o.decision, o.payments[i], inst, inst.tax_weights[i]);
    CHECK(std::fabs(u - IdentityTarget(inst.types, i, o.decision, inst)) <= 1e-8 * std::max(1.0, std::fabs(u)));
  }
}

TEST_CASE("zero bias reproduces the plain mechanism exactly")
{
  auto const inst = RunningInstance();
  BiasSpec   none;
  auto const a = RunUsVcg(inst.types, inst);
  auto const b = RunBusVcg(inst.types, none, inst);
  CHECK(a.decision == b.decision);
  CHECK(a.payments == b.payments);
  CHECK(a.raw_vcg == b.raw_vcg);
}

TEST_CASE("equitable bias moves the allocation toward uniform and keeps the tax")
{
  auto const inst = RunningInstance();
  BiasSpec   b;
  b.lambda      = 1.0;
  b.target_kind = BiasSpec::TargetKind::Equitable;
  auto const o  = RunBusVcg(inst.types, b, inst);
  CHECK(o.decision.allocation[0] > 0.4);
  CHECK(o.decision.allocation[0] < 0.5);
  CHECK(o.decision.allocation[0] == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(o.decision.tax == doctest::Approx(RunUsVcg(inst.types, inst).decision.tax).epsilon(1e-9));
  for (double r : o.identity_residuals)
  {
    CHECK(r <= 1e-8);
  }
}

TEST_CASE("biased identity with a tax preference")
{
  auto const inst = RunningInstance();
  BiasSpec   b;
  b.lambda      = 0.5;
  b.target_kind = BiasSpec::TargetKind::Constant;
  b.target      = {0.25, 0.75};
  b.psi_kind    = BiasSpec::PsiKind::Exponential;
  b.psi_scale   = 2.0;
  b.psi_rate    = 0.01;
  auto const o  = RunBusVcg(inst.types, b, inst);
  double const n = 3.0;
  double const full = SocialWelfare(inst.types, o.decision, inst) + n * BiasValue(b, o.decision, inst);
  for (std::size_t i = 0; i < 3; ++i)
  {
    // The others' biased optimum, then their welfare plus the bias there.
    auto const excl = MeanExcluding(inst.types, i);
    auto const gi   = OptimizeBiased(excl, b, inst);
    double const h  = (n - 1.0) * Valuation(excl, gi, inst) + n * BiasValue(b, gi, inst);
    double const u = RealizedUtility(inst.types[i], o.decision, o.payments[i], inst);
    CHECK(std::fabs(u - (full - h)) <= 1e-8 * std::max(1.0, std::fabs(u)));
  }
}

TEST_CASE("corresponding types")
{
  auto const inst = RunningInstance();
  auto const a    = CorrespondingType(std::vector<double>{0.25, 0.75}, 100.0, inst);
  CHECK(a[0] == doctest::Approx(0.25));
  auto const u = CorrespondingType(std::vector<double>{0.5, 0.5}, 10.0, inst);
  CHECK(u[0] == doctest::Approx(0.5));

  auto mixed        = inst;
  mixed.gain_curves = {GainCurve::Log(10.0), GainCurve::Power(1.0, 0.5)};
  auto const m      = CorrespondingType(std::vector<double>{0.3, 0.7}, 100.0, mixed);
  auto const x      = InnerAllocation(m, 100.0, mixed);
  CHECK(std::fabs(x[0] - 0.3) <= 1e-6);
  CHECK_THROWS_AS(CorrespondingType(std::vector<double>{0.0, 1.0}, 100.0, inst), BoundaryTarget);
}

TEST_CASE("spectral norm by power iteration")
{
  CHECK(SpectralNorm({{3.0, 0.0}, {0.0, 4.0}}) == doctest::Approx(4.0));
  CHECK(SpectralNorm({{1.0, 2.0}, {2.0, 1.0}}) == doctest::Approx(3.0));
  CHECK(SpectralNorm({{1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("finite-difference Jacobian matches the closed form")
{
  auto const inst = PerCapitaLogSqrt(10);
  for (AgentType const a : {AgentType{{0.4, 0.6}, 1.0}, AgentType{{0.25, 0.75}, 1.6}})
  {
    // V o g = (10 ln(a1 t), 10 ln(a2 t), -sqrt t) with t = (20 / af)^2.
    double const s2 = std::sqrt(0.5);
    double const af = a.money_weight;
    std::vector<std::vector<double>> exact = {
        {10.0 * s2 / a.alloc_weights[0], -20.0 / af},
        {-10.0 * s2 / a.alloc_weights[1], -20.0 / af},
        {0.0, 20.0 / (af * af)}};
    double disagreement = 0.0;
    double const norm   = FeatureJacobianNorm(a, inst, 1e-5, {}, &disagreement);
    CHECK(norm == doctest::Approx(SpectralNorm(exact)).epsilon(1e-4));
    CHECK(disagreement < 0.1);
  }
}

TEST_CASE("identical agents receive a pure rebate under the non-positive scheme")
{
  auto inst  = PerCapitaLogSqrt(4);
  inst.types = Profile(4, AgentType{{0.4, 0.6}, 1.0});
  auto const o = NonPositivePayments(inst.types, inst, {});
  CHECK(o.all_non_positive);
  for (std::size_t i = 0; i < 4; ++i)
  {
    CHECK(o.payments[i] < 0.0);
    double const expected = -(36.0 / 4.0) * (o.jacobian_norms[i] + 1.0);
    CHECK(o.adjusted_vcg[i] == doctest::Approx(expected));
  }
  NonPositiveConfig np;
  np.r = 8.0;
  auto const r = NonPositivePayments(inst.types, inst, np);
  CHECK(r.adjusted_vcg[0] == doctest::Approx(o.adjusted_vcg[0] - 2.0));
  CHECK_THROWS_AS(NonPositivePayments(RunningInstance().types, RunningInstance(), {}), InvalidArgument);
}
}
