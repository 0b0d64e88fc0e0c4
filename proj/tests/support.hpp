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

// Shared fixtures for the unit tests and the acceptance binary.

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "usvcg/assumptions.hpp"
#include "usvcg/io.hpp"
#include "usvcg/model.hpp"

namespace usvcg::testing {

inline std::string DataPath(std::string const &name)
{
  return std::string(USVCG_DATA_DIR) + "/" + name;
}

inline std::string ReadText(std::string const &path)
{
  std::ifstream      in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline io::InstanceFile LoadInstance(std::string const &name)
{
  return io::ParseInstance(io::ParseText(ReadText(DataPath(name))));
}

/// Three agents, two log goods (scale 10), f = sqrt, B0 = 0, nominal.
inline BudgetInstance RunningInstance(MrsConvention convention = MrsConvention::NScaled)
{
  BudgetInstance inst;
  inst.goods           = 2;
  inst.agents          = 3;
  inst.external_budget = 0.0;
  inst.gain_curves     = {GainCurve::Log(10.0), GainCurve::Log(10.0)};
  inst.money_curve     = MoneyCurve::Power(0.5);
  inst.semantics       = Semantics::Nominal;
  inst.mrs_convention  = convention;
  inst.types           = {{{0.7, 0.3}, 0.8}, {{0.0, 1.0}, 1.3}, {{0.5, 0.5}, 1.0}};
  return inst;
}

/// Weights drawn from a flat Dirichlet; with `allow_zero` each good is
/// dropped with probability 1/4 (at least one survives).
inline AgentType RandomType(std::mt19937_64 &rng, std::size_t m, bool allow_zero = false,
                            double money_lo = 0.5, double money_hi = 2.0)
{
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AgentType t;
  t.alloc_weights.resize(m);
  double sum = 0.0;
  for (auto &w : t.alloc_weights)
  {
    w = expo(rng);
    if (allow_zero && unit(rng) < 0.25)
    {
      w = 0.0;
    }
    sum += w;
  }
  if (sum == 0.0)
  {
    t.alloc_weights[0] = 1.0;
    sum                = 1.0;
  }
  for (auto &w : t.alloc_weights)
  {
    w /= sum;
  }
  t.money_weight = money_lo + (money_hi - money_lo) * unit(rng);
  return t;
}

struct RandomInstanceSpec
{
  std::size_t goods        = 2;
  std::size_t agents       = 3;
  bool        power_gains  = false;
  bool        kt_money     = false;
  bool        per_capita   = false;
};

/// Random instance with a random profile. Gain curves stay unshifted so
/// every positive weight yields an interior allocation.
inline BudgetInstance RandomInstance(std::uint64_t seed, RandomInstanceSpec const &spec)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BudgetInstance                         inst;
  inst.goods           = spec.goods;
  inst.agents          = spec.agents;
  inst.external_budget = 50.0 * unit(rng);
  inst.semantics       = spec.per_capita ? Semantics::PerCapita : Semantics::Nominal;
  inst.mrs_convention  = MrsConvention::NScaled;
  // Gain exponents stay at least 0.15 below the money exponent so optimal
  // taxes remain far below the solver's bracket cap.
  double const q = 0.5 + 0.4 * unit(rng);
  inst.money_curve = spec.kt_money ? MoneyCurve::KahnemanTversky(q, q, 2.25)
                                   : MoneyCurve::Power(q);
  for (std::size_t j = 0; j < spec.goods; ++j)
  {
    double const scale = 5.0 + 15.0 * unit(rng);
    inst.gain_curves.push_back(spec.power_gains
                                   ? GainCurve::Power(scale, 0.2 + (q - 0.35) * unit(rng))
                                   : GainCurve::Log(scale));
  }
  for (std::size_t i = 0; i < spec.agents; ++i)
  {
    inst.types.push_back(RandomType(rng, spec.goods));
  }
  return inst;
}

/// Random instance on which every modelling assumption holds; redraws from
/// consecutive seeds until the validator accepts one.
inline BudgetInstance RandomAssumptionInstance(std::uint64_t seed, RandomInstanceSpec const &spec)
{
  for (std::uint64_t k = 0;; ++k)
  {
    auto inst = RandomInstance(seed * 1000 + k, spec);
    if (ValidateAssumptions(inst).AllPassed())
    {
      return inst;
    }
  }
}

}  // namespace usvcg::testing
