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

#include "usvcg/curves.hpp"

#include <cmath>
#include <string>

#include "usvcg/numeric.hpp"

namespace usvcg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool InOpenUnit(double v)
{
  return v > 0.0 && v < 1.0;
}

}  // namespace

GainCurve::GainCurve(Kind kind, double scale, double exponent, double shift)
  : kind_(kind)
  , scale_(scale)
  , exponent_(exponent)
  , shift_(shift)
{}

GainCurve GainCurve::Log(double scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale))
  {
    throw InvalidArgument("log gain curve: scale must be positive");
  }
  return {Kind::Log, scale, 0.0, 0.0};
}

GainCurve GainCurve::Power(double scale, double exponent, double shift)
{
  if (!(scale > 0.0) || !std::isfinite(scale))
  {
    throw InvalidArgument("power gain curve: scale must be positive");
  }
  if (!InOpenUnit(exponent))
  {
    throw InvalidArgument("power gain curve: exponent must lie in (0, 1)");
  }
  if (!(shift >= 0.0) || !std::isfinite(shift))
  {
    throw InvalidArgument("power gain curve: shift must be nonnegative");
  }
  return {Kind::Power, scale, exponent, shift};
}

double GainCurve::Value(double spend) const
{
  if (kind_ == Kind::Log)
  {
    if (!(spend > 0.0))
    {
      throw DomainError("log gain curve evaluated at non-positive spend");
    }
    return scale_ * std::log(spend);
  }
  if (!(spend >= 0.0))
  {
    throw DomainError("power gain curve evaluated at negative spend");
  }
  if (shift_ == 0.0)
  {
    return scale_ * std::pow(spend, exponent_);
  }
  return scale_ * (std::pow(spend + shift_, exponent_) - std::pow(shift_, exponent_));
}

double GainCurve::Derivative(double spend) const
{
  if (!(spend > 0.0))
  {
    throw DomainError("gain derivative requires positive spend");
  }
  if (kind_ == Kind::Log)
  {
    return scale_ / spend;
  }
  return scale_ * exponent_ * std::pow(spend + shift_, exponent_ - 1.0);
}

double GainCurve::InverseDerivative(double marginal) const
{
  if (!(marginal > 0.0))
  {
    throw DomainError("inverse gain derivative requires a positive marginal");
  }
  if (kind_ == Kind::Log)
  {
    return scale_ / marginal;
  }
  if (marginal >= DerivativeAtZero())
  {
    return 0.0;
  }
  double const x = std::pow(marginal / (scale_ * exponent_), 1.0 / (exponent_ - 1.0)) - shift_;
  return x > 0.0 ? x : 0.0;
}

double GainCurve::Inverse(double level) const
{
  if (kind_ == Kind::Log)
  {
    return std::exp(level / scale_);
  }
  if (level < 0.0)
  {
    throw RangeError("power gain curve does not attain negative levels");
  }
  if (shift_ == 0.0)
  {
    return std::pow(level / scale_, 1.0 / exponent_);
  }
  double const x =
      std::pow(level / scale_ + std::pow(shift_, exponent_), 1.0 / exponent_) - shift_;
  return x > 0.0 ? x : 0.0;
}

double GainCurve::ValueAtZero() const noexcept
{
  return kind_ == Kind::Log ? -kInf : 0.0;
}

double GainCurve::DerivativeAtZero() const noexcept
{
  if (kind_ == Kind::Log || shift_ == 0.0)
  {
    return kInf;
  }
  return scale_ * exponent_ * std::pow(shift_, exponent_ - 1.0);
}

bool GainCurve::DerivativeDivergesAtZero() const noexcept
{
  return std::isinf(DerivativeAtZero());
}

MoneyCurve::MoneyCurve(Kind kind, double q, double r, double loss_weight, double domain_min)
  : kind_(kind)
  , q_(q)
  , r_(r)
  , loss_weight_(loss_weight)
  , domain_min_(domain_min)
{}

MoneyCurve MoneyCurve::Power(double q, double domain_min)
{
  if (!InOpenUnit(q))
  {
    throw InvalidArgument("power money curve: q must lie in (0, 1)");
  }
  if (!(domain_min <= 0.0))
  {
    throw InvalidArgument("money curve: domain_min must be <= 0");
  }
  return {Kind::Power, q, q, 1.0, domain_min};
}

MoneyCurve MoneyCurve::KahnemanTversky(double q, double r, double loss_weight, double domain_min)
{
  if (!InOpenUnit(q) || !InOpenUnit(r))
  {
    throw InvalidArgument("kt money curve: q and r must lie in (0, 1)");
  }
  if (!(loss_weight > 0.0) || !std::isfinite(loss_weight))
  {
    throw InvalidArgument("kt money curve: loss_weight must be positive");
  }
  if (!(domain_min <= 0.0))
  {
    throw InvalidArgument("money curve: domain_min must be <= 0");
  }
  return {Kind::KahnemanTversky, q, r, loss_weight, domain_min};
}

double MoneyCurve::Value(double delta) const
{
  if (!(delta >= domain_min_))
  {
    throw DomainError("money curve evaluated below its domain");
  }
  if (delta < 0.0)
  {
    return -std::pow(-delta, q_);
  }
  if (kind_ == Kind::Power)
  {
    return std::pow(delta, q_);
  }
  return loss_weight_ * std::pow(delta, r_);
}

double MoneyCurve::Derivative(double delta) const
{
  if (!(delta >= domain_min_))
  {
    throw DomainError("money derivative evaluated below its domain");
  }
  if (delta == 0.0)
  {
    return kInf;
  }
  if (delta < 0.0)
  {
    return q_ * std::pow(-delta, q_ - 1.0);
  }
  if (kind_ == Kind::Power)
  {
    return q_ * std::pow(delta, q_ - 1.0);
  }
  return loss_weight_ * r_ * std::pow(delta, r_ - 1.0);
}

double MoneyCurve::RangeMin() const noexcept
{
  if (std::isinf(domain_min_))
  {
    return -kInf;
  }
  return -std::pow(-domain_min_, q_);
}

double MoneyCurve::Inverse(double y) const
{
  if (std::isnan(y) || y < RangeMin() || std::isinf(y))
  {
    throw RangeError("value " + std::to_string(y) + " is outside the range of the money curve");
  }
  if (y < 0.0)
  {
    double const d = -std::pow(-y, 1.0 / q_);
    return d < domain_min_ ? domain_min_ : d;
  }
  if (kind_ == Kind::Power)
  {
    return std::pow(y, 1.0 / q_);
  }
  return std::pow(y / loss_weight_, 1.0 / r_);
}

double MoneyCurve::InverseNumeric(double y) const
{
  if (std::isnan(y) || y < RangeMin() || std::isinf(y))
  {
    throw RangeError("value " + std::to_string(y) + " is outside the range of the money curve");
  }
  return numeric::InvertIncreasing([this](double d) { return Value(d); }, y, domain_min_, 1.0,
                                   1e-14);
}

}  // namespace usvcg
