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

#include "usvcg/curves.hpp"
#include "usvcg/errors.hpp"

using namespace usvcg;

namespace {

double CentralDifference(GainCurve const &c, double x)
{
  double const h = 1e-6 * std::max(1.0, x);
  return (c.Value(x + h) - c.Value(x - h)) / (2.0 * h);
}

double CentralDifference(MoneyCurve const &c, double x)
{
  double const h = 1e-6 * std::max(1.0, std::fabs(x));
  return (c.Value(x + h) - c.Value(x - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("curves")
{
TEST_CASE("log gain evaluates the scaled logarithm")
{
  auto const c = GainCurve::Log(10.0);
  CHECK(c.Value(78.9) == doctest::Approx(43.6818).epsilon(1e-5));
  CHECK(c.Value(1.0) == 0.0);
  CHECK(c.Derivative(20.0) == doctest::Approx(0.5));
  CHECK(c.Derivative(66.6) == doctest::Approx(0.15015).epsilon(1e-4));
  CHECK(c.Derivative(66.6) == doctest::Approx(CentralDifference(c, 66.6)).epsilon(1e-7));
  CHECK(c.InverseDerivative(0.5) == doctest::Approx(20.0));
  CHECK(std::isinf(c.ValueAtZero()));
  CHECK(c.DerivativeDivergesAtZero());
  CHECK_THROWS_AS(c.Value(0.0), DomainError);
  CHECK_THROWS_AS(c.Derivative(-1.0), DomainError);
}

TEST_CASE("power gain vanishes at the origin")
{
  auto const c = GainCurve::Power(1.0, 0.5);
  CHECK(c.Value(0.0) == 0.0);
  CHECK(c.Derivative(4.0) == doctest::Approx(0.25));
  CHECK(c.InverseDerivative(0.25) == doctest::Approx(4.0));
  CHECK(c.DerivativeDivergesAtZero());
  CHECK_THROWS_AS(c.Value(-1e-3), DomainError);
  CHECK_THROWS_AS(GainCurve::Power(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GainCurve::Log(0.0), InvalidArgument);
}

TEST_CASE("shifted power gain has a finite slope at zero")
{
  auto const c = GainCurve::Power(10.0, 0.5, 1.0);
  CHECK(c.Value(0.0) == 0.0);
  CHECK_FALSE(c.DerivativeDivergesAtZero());
  CHECK(c.DerivativeAtZero() == doctest::Approx(5.0));
  // Above theta'(0) the inverse clips to zero spending.
  CHECK(c.InverseDerivative(6.0) == 0.0);
  CHECK(c.InverseDerivative(2.5) == doctest::Approx(3.0));
  CHECK(c.Value(3.0) == doctest::Approx(10.0));
  CHECK(c.Inverse(10.0) == doctest::Approx(3.0));
}

TEST_CASE("gain derivatives match finite differences and inverses round-trip")
{
  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k)
  {
    double const scale = 0.5 + 20.0 * u(rng);
    double const e     = 0.1 + 0.8 * u(rng);
    double const x     = std::exp(8.0 * u(rng) - 2.0);
    for (auto const &c : {GainCurve::Log(scale), GainCurve::Power(scale, e),
                          GainCurve::Power(scale, e, 2.0 * u(rng))})
    {
      CHECK(std::fabs(c.Derivative(x) - CentralDifference(c, x)) <= 1e-5);
      CHECK(c.InverseDerivative(c.Derivative(x)) == doctest::Approx(x).epsilon(1e-9));
      CHECK(c.Inverse(c.Value(x)) == doctest::Approx(x).epsilon(1e-9));
      CHECK(c.Derivative(x) > c.Derivative(1.5 * x));
    }
  }
  for (double x : {1.0, 37.2, 500.0})
  {
    auto const c = GainCurve::Log(10.0);
    CHECK(c.InverseDerivative(c.Derivative(x)) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("power money curve")
{
  auto const f = MoneyCurve::Power(0.5);
  CHECK(f.Value(377.0) == doctest::Approx(19.4165).epsilon(1e-5));
  CHECK(f.Value(0.0) == 0.0);
  CHECK(f.Inverse(f.Value(377.0)) == doctest::Approx(377.0));
  CHECK(std::isinf(f.Derivative(0.0)));
  CHECK_THROWS_AS(f.Value(-1.0), DomainError);
  CHECK_THROWS_AS(f.Inverse(-1.0), RangeError);
}

TEST_CASE("Kahneman-Tversky money curve")
{
  auto const unit = MoneyCurve::KahnemanTversky(0.88, 0.88, 1.0);
  CHECK(unit.Value(-1.0) == doctest::Approx(-1.0));
  CHECK(unit.Value(0.0) == 0.0);
  auto const kt = MoneyCurve::KahnemanTversky(0.88, 0.88, 2.25);
  // Losses carry exponent q, positive arguments exponent r and weight lambda.
  auto const asym = MoneyCurve::KahnemanTversky(0.6, 0.8, 2.25);
  CHECK(asym.Value(-2.0) == doctest::Approx(-std::pow(2.0, 0.6)));
  CHECK(asym.Value(2.0) == doctest::Approx(2.25 * std::pow(2.0, 0.8)));
  for (double y : {-3.0, -0.1, 0.0, 0.7, 12.0})
  {
    CHECK(kt.Value(kt.Inverse(y)) == doctest::Approx(y).epsilon(1e-10));
    CHECK(kt.InverseNumeric(y) == doctest::Approx(kt.Inverse(y)).epsilon(1e-9));
  }
}

TEST_CASE("money curves are convex on losses and concave on gains")
{
  std::mt19937_64                        rng(11);
  std::uniform_real_distribution<double> u(0.05, 10.0);
  for (auto const &f : {MoneyCurve::Power(0.5, -std::numeric_limits<double>::infinity()),
                        MoneyCurve::KahnemanTversky(0.88, 0.88, 2.25),
                        MoneyCurve::KahnemanTversky(0.6, 0.8, 1.5)})
  {
    for (int k = 0; k < 100; ++k)
    {
      double const a = u(rng);
      double const b = a + u(rng);
      double const c = b + u(rng);
      double const gain_left  = (f.Value(b) - f.Value(a)) / (b - a);
      double const gain_right = (f.Value(c) - f.Value(b)) / (c - b);
      CHECK(gain_left > gain_right);
      double const loss_left  = (f.Value(-b) - f.Value(-c)) / (c - b);
      double const loss_right = (f.Value(-a) - f.Value(-b)) / (b - a);
      CHECK(loss_left < loss_right);
      CHECK(f.Derivative(a) == doctest::Approx(CentralDifference(f, a)).epsilon(1e-6));
      CHECK(f.Inverse(f.Value(-a)) == doctest::Approx(-a).epsilon(1e-9));
      CHECK(f.Inverse(f.Value(a)) == doctest::Approx(a).epsilon(1e-9));
    }
  }
}
}
