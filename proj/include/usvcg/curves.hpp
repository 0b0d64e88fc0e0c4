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

#include <limits>

#include "usvcg/errors.hpp"

namespace usvcg {

/// Valuation of public spending on one good: increasing, strictly concave,
/// with a limit at zero that is not positive.
///
///   log:   a * ln(X)                       on X > 0
///   power: a * ((X + s)^p - s^p)           on X >= 0, 0 < p < 1, s >= 0
///
/// The shift `s` defaults to 0 (plain power law). A positive shift gives a
/// finite marginal value at zero spend, which is what makes zero-spend
/// ballots ambiguous and triggers follow-up questions during elicitation.
class GainCurve
{
public:
  enum class Kind
  {
    Log,
    Power,
  };

  static GainCurve Log(double scale);
  static GainCurve Power(double scale, double exponent, double shift = 0.0);

  Kind   kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double exponent() const noexcept { return exponent_; }
  double shift() const noexcept { return shift_; }

  /// theta(X). DomainError for X <= 0 (log) or X < 0 (power).
  double Value(double spend) const;
  /// theta'(X) for X > 0.
  double Derivative(double spend) const;
  /// X >= 0 with theta'(X) = marginal; 0 when marginal >= theta'(0+).
  double InverseDerivative(double marginal) const;
  /// X >= 0 with theta(X) = level. RangeError below ValueAtZero().
  double Inverse(double level) const;

  /// lim theta(X) as X -> 0+ (-inf for log).
  double ValueAtZero() const noexcept;
  /// lim theta'(X) as X -> 0+ (+inf unless the power curve is shifted).
  double DerivativeAtZero() const noexcept;
  bool   DerivativeDivergesAtZero() const noexcept;
  /// Whether X = 0 is inside the domain.
  bool   AdmitsZero() const noexcept { return kind_ == Kind::Power; }

private:
  GainCurve(Kind kind, double scale, double exponent, double shift);

  Kind   kind_;
  double scale_;
  double exponent_;
  double shift_;
};

/// Disutility of a monetary transfer (loss when positive): f(0) = 0,
/// increasing, convex on the negative axis and concave on the positive one.
///
///   power: sign(d) * |d|^q                      (domain_min defaults to 0)
///   kt:    -|d|^q for d <= 0, lambda * d^r      (domain unbounded below)
class MoneyCurve
{
public:
  enum class Kind
  {
    Power,
    KahnemanTversky,
  };

  static MoneyCurve Power(double q, double domain_min = 0.0);
  static MoneyCurve KahnemanTversky(double q, double r, double loss_weight,
                                    double domain_min = -std::numeric_limits<double>::infinity());

  Kind   kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  double r() const noexcept { return r_; }
  double loss_weight() const noexcept { return loss_weight_; }
  double domain_min() const noexcept { return domain_min_; }

  double Value(double delta) const;
  /// f'(delta); +inf at the origin.
  double Derivative(double delta) const;
  /// Closed-form f^{-1}(y). RangeError when y is below the attained range.
  double Inverse(double y) const;
  /// Same contract as Inverse, computed by bracketed bisection. Kept as an
  /// independent route for curves without a closed form and for checks.
  double InverseNumeric(double y) const;

  /// Infimum of f over its domain.
  double RangeMin() const noexcept;
  bool   InDomain(double delta) const noexcept { return delta >= domain_min_; }

private:
  MoneyCurve(Kind kind, double q, double r, double loss_weight, double domain_min);

  Kind   kind_;
  double q_;
  double r_;
  double loss_weight_;
  double domain_min_;
};

}  // namespace usvcg
