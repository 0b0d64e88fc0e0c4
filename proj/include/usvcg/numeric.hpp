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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include "usvcg/errors.hpp"

// Small numerical kernels shared by the curves, solver and elicitation code.
namespace usvcg::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Root of a monotone function on [lo, hi] by plain bisection. `fn(lo)` and
/// `fn(hi)` must have opposite signs (zero counts as either sign).
double Bisect(std::function<double(double)> const &fn, double lo, double hi,
              double rel_tol = 1e-15, int max_iter = 400);

/// Solves fn(x) = y for a strictly increasing fn on [domain_min, +inf).
/// Brackets by exponential expansion from `hint` (both directions when the
/// domain is unbounded below) and then bisects. Throws RangeError when the
/// bracket cannot be closed, i.e. y is not attained.
double InvertIncreasing(std::function<double(double)> const &fn, double y,
                        double domain_min = -kInf, double hint = 1.0,
                        double rel_tol = 1e-13, double max_magnitude = 1e300);

struct GoldenResult
{
  double argmax;
  double value;
  double lo;
  double hi;
};

/// Golden-section maximization of a unimodal function on [lo, hi]; stops
/// when the bracket is narrower than `abs_tol`.
GoldenResult GoldenMaximize(std::function<double(double)> const &fn, double lo,
                            double hi, double abs_tol, int max_iter = 300);

/// SplitMix64 step; used to derive independent deterministic substreams.
constexpr std::uint64_t SplitMix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

constexpr std::uint64_t SubstreamSeed(std::uint64_t seed, std::uint64_t index) noexcept
{
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(index + 0x632be59bd9b4e019ULL));
}

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Work is statically partitioned; exceptions are rethrown on the caller
/// (lowest index first).
void ParallelFor(std::size_t count, std::function<void(std::size_t)> const &body);

}  // namespace usvcg::numeric
