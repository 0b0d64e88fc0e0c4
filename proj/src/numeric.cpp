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

#include "usvcg/numeric.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace usvcg::numeric {

double Bisect(std::function<double(double)> const &fn, double lo, double hi, double rel_tol,
              int max_iter)
{
  double f_lo = fn(lo);
  if (f_lo == 0.0)
  {
    return lo;
  }
  double const f_hi = fn(hi);
  if (f_hi == 0.0)
  {
    return hi;
  }
  if ((f_lo < 0.0) == (f_hi < 0.0))
  {
    throw ConvergenceError("Bisect: endpoints do not bracket a root");
  }
  for (int i = 0; i < max_iter; ++i)
  {
    double const mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi ||
        (hi - lo) <= rel_tol * std::max({1.0, std::fabs(lo), std::fabs(hi)}))
    {
      return mid;
    }
    double const f_mid = fn(mid);
    if (f_mid == 0.0)
    {
      return mid;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0))
    {
      lo   = mid;
      f_lo = f_mid;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double InvertIncreasing(std::function<double(double)> const &fn, double y, double domain_min,
                        double hint, double rel_tol, double max_magnitude)
{
  auto const g = [&](double x) { return fn(x) - y; };

  double lo = std::isfinite(domain_min) ? domain_min : std::min(-std::fabs(hint), -1.0);
  double hi = std::max({std::fabs(hint), 1.0, lo + 1.0});

  if (std::isfinite(domain_min) && g(lo) > 0.0)
  {
    throw RangeError("value below the range of the function");
  }
  while (g(hi) < 0.0)
  {
    lo = hi;
    hi *= 2.0;
    if (hi > max_magnitude)
    {
      throw RangeError("value above the range of the function");
    }
  }
  if (!std::isfinite(domain_min))
  {
    while (g(lo) > 0.0)
    {
      hi = lo;
      lo *= 2.0;
      if (-lo > max_magnitude)
      {
        throw RangeError("value below the range of the function");
      }
    }
  }
  return Bisect(g, lo, hi, rel_tol * 1e-3);
}

GoldenResult GoldenMaximize(std::function<double(double)> const &fn, double lo, double hi,
                            double abs_tol, int max_iter)
{
  constexpr double kInvPhi = 0.6180339887498949;
  double a  = lo;
  double b  = hi;
  double c  = b - kInvPhi * (b - a);
  double d  = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int i = 0; i < max_iter && (b - a) > abs_tol; ++i)
  {
    if (fc >= fd)
    {
      b  = d;
      d  = c;
      fd = fc;
      c  = b - kInvPhi * (b - a);
      fc = fn(c);
    }
    else
    {
      a  = c;
      c  = d;
      fc = fd;
      d  = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  if (fc >= fd)
  {
    return {c, fc, a, b};
  }
  return {d, fd, a, b};
}

void ParallelFor(std::size_t count, std::function<void(std::size_t)> const &body)
{
  std::size_t const hw      = std::max(1U, std::thread::hardware_concurrency());
  std::size_t const workers = std::min(hw, count);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
    {
      body(i);
    }
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread>        threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    threads.emplace_back([&, w] {
      std::size_t const begin = count * w / workers;
      std::size_t const end   = count * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i)
      {
        try
        {
          body(i);
        }
        catch (...)
        {
          errors[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto &t : threads)
  {
    t.join();
  }
  for (std::size_t w = 0; w < workers; ++w)
  {
    if (errors[w])
    {
      std::rethrow_exception(errors[w]);
    }
  }
}

}  // namespace usvcg::numeric
