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

#include "usvcg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "usvcg/assumptions.hpp"
#include "usvcg/errors.hpp"
#include "usvcg/numeric.hpp"

namespace usvcg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

std::vector<double> Dirichlet(Rng &rng, std::size_t m)
{
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double>                   x(m);
  double                                sum = 0.0;
  for (auto &v : x)
  {
    v = exp1(rng) + 1e-300;
    sum += v;
  }
  for (auto &v : x)
  {
    v /= sum;
  }
  return x;
}

double LogUniform(Rng &rng, double mu)
{
  std::uniform_real_distribution<double> u(-std::log(mu), std::log(mu));
  return std::exp(u(rng));
}

AgentType RandomType(Rng &rng, std::size_t m, double mu)
{
  auto alloc = Dirichlet(rng, m);
  return {std::move(alloc), LogUniform(rng, mu)};
}

/// Truth moved by Gaussian noise of the given scale, kept on the simplex.
AgentType LocalPerturbation(Rng &rng, AgentType const &truth, double scale)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  AgentType                        out = truth;
  double                           sum = 0.0;
  for (auto &w : out.alloc_weights)
  {
    w = std::max(0.0, w + scale * normal(rng) * std::max(w, 0.05));
    sum += w;
  }
  if (!(sum > 0.0))
  {
    return truth;
  }
  for (auto &w : out.alloc_weights)
  {
    w /= sum;
  }
  out.money_weight = truth.money_weight * std::exp(scale * normal(rng));
  return out;
}

Profile RandomProfile(Rng &rng, std::size_t n, std::size_t m, double mu)
{
  Profile p;
  p.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    p.push_back(RandomType(rng, m, mu));
  }
  return p;
}

AgentType Shifted(AgentType const &mean, AgentType const &from, AgentType const &to, double n)
{
  AgentType out = mean;
  for (std::size_t j = 0; j < out.alloc_weights.size(); ++j)
  {
    out.alloc_weights[j] += (to.alloc_weights[j] - from.alloc_weights[j]) / n;
  }
  out.money_weight += (to.money_weight - from.money_weight) / n;
  return out;
}

/// Everything about agent i that does not depend on its own report.
struct AgentContext
{
  AgentType      mean;
  AgentType      excluded;
  BudgetDecision excluded_optimum;
  double         excluded_value = 0.0;
};

AgentContext MakeContext(std::span<AgentType const> profile, std::size_t agent,
                         BudgetInstance const &instance, SolverConfig const &config)
{
  AgentContext ctx;
  ctx.mean = MeanType(profile);
  if (profile.size() >= 2)
  {
    ctx.excluded         = MeanExcluding(profile, agent);
    ctx.excluded_optimum = Optimize(ctx.excluded, instance, config);
    ctx.excluded_value   = Valuation(ctx.excluded, ctx.excluded_optimum, instance);
  }
  return ctx;
}

double UtilityWithContext(AgentContext const &ctx, std::span<AgentType const> profile,
                          std::size_t agent, AgentType const &report,
                          BudgetInstance const &instance, SolverConfig const &config)
{
  auto const  n     = static_cast<double>(profile.size());
  auto const &truth = profile[agent];
  auto const  mean  = Shifted(ctx.mean, truth, report, n);
  auto const  d     = Optimize(mean, instance, config);
  double      p     = 0.0;
  if (profile.size() >= 2)
  {
    double const at_chosen = Valuation(ctx.excluded, d, instance);
    double const at_own    = std::max(ctx.excluded_value, at_chosen);
    p                      = (n - 1.0) * (at_own - at_chosen);
  }
  double const pay = SensitivePayment(p, d.tax, report.money_weight, instance.money_curve);
  return RealizedUtility(truth, d, pay, instance);
}

bool ValidFor(AgentType const &t, double mu)
{
  for (double w : t.alloc_weights)
  {
    if (!(w >= 0.0))
    {
      return false;
    }
  }
  return t.money_weight > 1.0 / mu && t.money_weight < mu;
}

}  // namespace

char const *ToString(MisreportFamily family) noexcept
{
  switch (family)
  {
  case MisreportFamily::Global:
    return "global";
  case MisreportFamily::Local:
    return "local";
  case MisreportFamily::AllocationOnly:
    return "allocation_only";
  }
  return "unknown";
}

double ReportUtility(std::span<AgentType const> profile, std::size_t agent,
                     AgentType const &report, BudgetInstance const &instance,
                     SolverConfig const &config)
{
  auto const ctx = MakeContext(profile, agent, instance, config);
  return UtilityWithContext(ctx, profile, agent, report, instance, config);
}

FuzzReport SdsicFuzz(BudgetInstance const &instance, std::size_t trials, std::uint64_t seed,
                     FuzzConfig const &fuzz, SolverConfig const &config)
{
  instance.Validate();
  FuzzReport report;
  report.trials    = trials;
  report.tolerance = fuzz.tolerance;
  report.dsic_only = ValidateAssumptions(instance).interior_case == "none";
  report.rows.resize(trials);

  std::size_t const n = instance.agents;
  std::size_t const m = instance.goods;
  bool const        has_profile = !instance.types.empty();

  // Contexts of the instance profile are shared by its trials.
  std::vector<AgentContext> shared(has_profile ? n : 0);
  if (has_profile)
  {
    numeric::ParallelFor(n, [&](std::size_t i) {
      shared[i] = MakeContext(instance.types, i, instance, config);
    });
  }

  numeric::ParallelFor(trials, [&](std::size_t k) {
    Rng rng(numeric::SubstreamSeed(seed, k));
    FuzzTrial &row = report.rows[k];
    row.trial      = k;
    bool const use_instance = has_profile && k % 2 == 0;
    Profile    profile      = use_instance ? instance.types : RandomProfile(rng, n, m, fuzz.mu);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    row.agent  = pick(rng);
    row.family = static_cast<MisreportFamily>((k / 2) % 3);
    row.truth  = profile[row.agent];
    switch (row.family)
    {
    case MisreportFamily::Global:
      row.misreport = RandomType(rng, m, fuzz.mu);
      break;
    case MisreportFamily::Local:
      row.misreport = LocalPerturbation(rng, row.truth, (k / 6) % 2 == 0 ? 0.1 : 0.01);
      break;
    case MisreportFamily::AllocationOnly:
      row.misreport = {Dirichlet(rng, m), row.truth.money_weight};
      break;
    }
    AgentContext const ctx =
        use_instance ? shared[row.agent] : MakeContext(profile, row.agent, instance, config);
    double const honest =
        UtilityWithContext(ctx, profile, row.agent, row.truth, instance, config);
    double const lying =
        UtilityWithContext(ctx, profile, row.agent, row.misreport, instance, config);
    row.gain = lying - honest;
  });

  report.max_gain = trials == 0 ? -kInf : report.rows.front().gain;
  for (int f = 0; f < 3; ++f)
  {
    report.family_max[f] = -kInf;
  }
  for (auto const &row : report.rows)
  {
    auto const f = static_cast<int>(row.family);
    report.family_max[f] = std::max(report.family_max[f], row.gain);
    ++report.family_trials[f];
    if (row.gain >= report.max_gain)
    {
      report.max_gain = row.gain;
      report.worst    = row;
    }
  }
  report.passed = report.max_gain <= fuzz.tolerance;
  return report;
}

std::vector<double> CoalitionUtilities(std::span<AgentType const> truth,
                                       std::span<std::size_t const> members,
                                       std::span<AgentType const> reports,
                                       BudgetInstance const &instance, SolverConfig const &config)
{
  auto const n    = static_cast<double>(truth.size());
  AgentType  mean = MeanType(truth);
  for (std::size_t s = 0; s < members.size(); ++s)
  {
    mean = Shifted(mean, truth[members[s]], reports[s], n);
  }
  auto const          d = Optimize(mean, instance, config);
  std::vector<double> out(members.size(), 0.0);
  for (std::size_t s = 0; s < members.size(); ++s)
  {
    double p = 0.0;
    if (truth.size() >= 2)
    {
      // Mean of everyone else's reports.
      AgentType excluded = mean;
      for (std::size_t j = 0; j < excluded.alloc_weights.size(); ++j)
      {
        excluded.alloc_weights[j] =
            (n * mean.alloc_weights[j] - reports[s].alloc_weights[j]) / (n - 1.0);
      }
      excluded.money_weight = (n * mean.money_weight - reports[s].money_weight) / (n - 1.0);
      auto const   own       = Optimize(excluded, instance, config);
      double const at_chosen = Valuation(excluded, d, instance);
      double const at_own    = std::max(Valuation(excluded, own, instance), at_chosen);
      p                      = (n - 1.0) * (at_own - at_chosen);
    }
    double const pay = SensitivePayment(p, d.tax, reports[s].money_weight, instance.money_curve);
    out[s]           = RealizedUtility(truth[members[s]], d, pay, instance);
  }
  return out;
}

CoalitionReport CoalitionProbe(BudgetInstance const &instance, std::size_t coalition_size,
                               std::size_t trials, std::uint64_t seed, FuzzConfig const &fuzz,
                               SolverConfig const &config)
{
  instance.Validate();
  std::size_t const n = instance.agents;
  std::size_t const m = instance.goods;
  if (coalition_size == 0 || coalition_size > n)
  {
    throw InvalidArgument("coalition size must lie in [1, n]");
  }
  CoalitionReport report;
  report.trials         = trials;
  report.coalition_size = coalition_size;
  report.max_min_gain   = -kInf;
  std::vector<int>    found(trials, 0);
  std::vector<int>    unstable(trials, 0);
  std::vector<double> min_gain(trials, -kInf);

  numeric::ParallelFor(trials, [&](std::size_t k) {
    Rng     rng(numeric::SubstreamSeed(seed, k));
    bool const use_instance = !instance.types.empty() && k % 2 == 0;
    Profile truth = use_instance ? instance.types : RandomProfile(rng, n, m, fuzz.mu);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> members(order.begin(), order.begin() + static_cast<long>(coalition_size));
    std::sort(members.begin(), members.end());

    Profile honest_reports;
    for (auto i : members)
    {
      honest_reports.push_back(truth[i]);
    }
    auto const base = CoalitionUtilities(truth, members, honest_reports, instance, config);

    // Random restarts: a common report for the whole coalition, then
    // independent global and local reports.
    constexpr int kRestarts = 4;
    Profile best_reports;
    double  best_min = -kInf;
    for (int attempt = 0; attempt < kRestarts; ++attempt)
    {
      Profile reports;
      if (attempt == 0)
      {
        reports.assign(members.size(), RandomType(rng, m, fuzz.mu));
      }
      else
      {
        for (auto i : members)
        {
          reports.push_back(attempt % 2 == 1 ? RandomType(rng, m, fuzz.mu)
                                             : LocalPerturbation(rng, truth[i], 0.1));
        }
      }
      auto const   u  = CoalitionUtilities(truth, members, reports, instance, config);
      double       mg = kInf;
      for (std::size_t s = 0; s < members.size(); ++s)
      {
        mg = std::min(mg, u[s] - base[s]);
      }
      if (mg > best_min)
      {
        best_min     = mg;
        best_reports = reports;
      }
    }
    min_gain[k] = best_min;
    if (!(best_min > fuzz.tolerance))
    {
      return;
    }
    found[k] = 1;

    // Stability: does some member have a better unilateral report against
    // the others' misreports? Local search starting from the truth.
    auto const coalition_u = CoalitionUtilities(truth, members, best_reports, instance, config);
    for (std::size_t s = 0; s < members.size() && unstable[k] == 0; ++s)
    {
      auto   reports = best_reports;
      auto   utility = [&](AgentType const &r) {
        reports[s] = r;
        return CoalitionUtilities(truth, members, reports, instance, config)[s];
      };
      AgentType cur   = truth[members[s]];
      double    cur_u = utility(cur);
      for (int step = 0; step < 24 && cur_u <= coalition_u[s] + fuzz.tolerance; ++step)
      {
        auto const cand   = LocalPerturbation(rng, cur, step < 12 ? 0.1 : 0.01);
        double const cand_u = utility(cand);
        if (cand_u > cur_u)
        {
          cur   = cand;
          cur_u = cand_u;
        }
      }
      if (cur_u > coalition_u[s] + fuzz.tolerance)
      {
        unstable[k] = 1;
      }
    }
  });

  for (std::size_t k = 0; k < trials; ++k)
  {
    report.manipulations += static_cast<std::size_t>(found[k]);
    report.unstable += static_cast<std::size_t>(unstable[k]);
    report.max_min_gain = std::max(report.max_min_gain, min_gain[k]);
  }
  report.passed = report.unstable == report.manipulations;
  return report;
}

BudgetInstance ConvergenceInstance(ConvergenceSetup const &setup, std::size_t n)
{
  BudgetInstance inst;
  inst.goods           = setup.gain_curves.size();
  inst.agents          = n;
  inst.external_budget = setup.sigma.b0 * static_cast<double>(n);
  inst.gain_curves     = setup.gain_curves;
  inst.money_curve     = setup.money_curve;
  inst.semantics       = Semantics::PerCapita;
  inst.mrs_convention  = MrsConvention::NScaled;
  return inst;
}

Profile GeneratePopulation(CharacteristicTriplet const &sigma, std::size_t n, std::uint64_t seed)
{
  sigma.Validate();
  auto const &mean = sigma.mean_type;
  std::size_t const m = mean.goods();
  Profile           out;
  out.reserve(n);
  for (std::size_t k = 0; k < n / 2; ++k)
  {
    Rng       rng(numeric::SubstreamSeed(seed, k));
    AgentType draw = RandomType(rng, m, sigma.mu);
    // Largest s with mean +- s (draw - mean) both inside the band.
    double s = 1.0;
    for (std::size_t j = 0; j < m; ++j)
    {
      double const d = draw.alloc_weights[j] - mean.alloc_weights[j];
      if (d != 0.0)
      {
        s = std::min(s, mean.alloc_weights[j] / std::fabs(d));
      }
    }
    double const df = draw.money_weight - mean.money_weight;
    if (df != 0.0)
    {
      double const room = std::min(sigma.mu - mean.money_weight, mean.money_weight - 1.0 / sigma.mu);
      s = std::min(s, room / std::fabs(df));
    }
    s *= 0.999;
    AgentType plus  = mean;
    AgentType minus = mean;
    for (std::size_t j = 0; j < m; ++j)
    {
      double const d        = s * (draw.alloc_weights[j] - mean.alloc_weights[j]);
      plus.alloc_weights[j]  = mean.alloc_weights[j] + d;
      minus.alloc_weights[j] = mean.alloc_weights[j] - d;
    }
    plus.money_weight  = mean.money_weight + s * df;
    minus.money_weight = mean.money_weight - s * df;
    if (!ValidFor(plus, sigma.mu) || !ValidFor(minus, sigma.mu))
    {
      plus  = mean;
      minus = mean;
    }
    out.push_back(std::move(plus));
    out.push_back(std::move(minus));
  }
  if (n % 2 == 1)
  {
    out.push_back(mean);
  }
  return out;
}

ConvergenceTable ConvergenceStudy(ConvergenceSetup const &setup,
                                  std::span<std::size_t const> n_list, std::uint64_t seed,
                                  bool non_positive, NonPositiveConfig const &np,
                                  SolverConfig const &config)
{
  for (std::size_t k = 1; k < n_list.size(); ++k)
  {
    if (!(n_list[k] > n_list[k - 1]))
    {
      throw InvalidArgument("n list must be strictly increasing");
    }
  }
  ConvergenceTable table;
  table.non_positive = non_positive;
  NonPositiveConfig np_cfg = np;
  if (np_cfg.gamma <= 0.0)
  {
    np_cfg.mu = setup.sigma.mu;
  }
  for (std::size_t n : n_list)
  {
    if (n < 2)
    {
      throw InvalidArgument("convergence study needs n >= 2");
    }
    auto const instance = ConvergenceInstance(setup, n);
    auto const profile  = GeneratePopulation(setup.sigma, n, seed);
    auto const check    = Solve(TypeObjective(MeanType(profile)), instance, config);
    if (check.non_unique)
    {
      throw NonUniqueOptimum("the mean type has several optimal decisions at n = " +
                             std::to_string(n));
    }
    ConvergenceRow row;
    row.n = n;
    Outcome outcome;
    if (non_positive)
    {
      auto const npo = NonPositivePayments(profile, instance, np_cfg, config);
      outcome        = npo.base;
      row.np_max_payment = *std::max_element(npo.payments.begin(), npo.payments.end());
      for (double p : npo.payments)
      {
        row.np_sum_abs += std::fabs(p);
      }
      row.np_all_non_positive = npo.all_non_positive;
      row.regularity_warnings = static_cast<std::size_t>(std::count_if(
          outcome.warnings.begin(), outcome.warnings.end(),
          [](std::string const &w) { return w.rfind("RegularityWarning", 0) == 0; }));
    }
    else
    {
      outcome = RunUsVcg(profile, instance, config);
    }
    row.tax = outcome.decision.tax;
    for (double p : outcome.payments)
    {
      row.max_abs_payment = std::max(row.max_abs_payment, std::fabs(p));
      row.sum_abs_payments += std::fabs(p);
    }
    row.n_times_max = static_cast<double>(n) * row.max_abs_payment;
    table.rows.push_back(row);
  }

  auto const &rows = table.rows;
  table.monotone   = true;
  for (std::size_t k = 1; k < rows.size(); ++k)
  {
    if (!(rows[k].max_abs_payment < rows[k - 1].max_abs_payment))
    {
      table.monotone = false;
    }
  }
  if (rows.size() >= 2)
  {
    double const a      = rows[rows.size() - 2].n_times_max;
    double const b      = rows.back().n_times_max;
    table.plateau_ratio = std::max(a, b) / std::max(std::min(a, b), 1e-300);
  }
  table.passed = table.monotone && rows.size() >= 2 && table.plateau_ratio < 3.0;
  if (non_positive)
  {
    table.np_all = std::all_of(rows.begin(), rows.end(),
                               [](ConvergenceRow const &r) { return r.np_all_non_positive; });
    table.np_regime_n = 0;
    for (auto it = rows.rbegin(); it != rows.rend() && it->np_all_non_positive; ++it)
    {
      table.np_regime_n = it->n;
    }
    if (rows.size() >= 2)
    {
      table.np_sum_ratio = rows.back().np_sum_abs / std::max(rows[rows.size() - 2].np_sum_abs, 1e-300);
    }
    table.passed = table.np_all && rows.size() >= 2 && table.np_sum_ratio <= 2.0;
  }
  return table;
}

DivergenceReport TaxDivergenceDemo(double p, double q, std::span<std::size_t const> n_list,
                                   double money_weight, SolverConfig const &config)
{
  if (!(p > 0.0 && p < q && q < 1.0))
  {
    throw InvalidArgument("tax divergence demo needs 0 < p < q < 1");
  }
  if (n_list.size() < 2)
  {
    throw InvalidArgument("tax divergence demo needs at least two population sizes");
  }
  DivergenceReport report;
  report.p             = p;
  report.q             = q;
  report.money_weight  = money_weight;
  report.stated_slope  = 1.0 - q;
  report.derived_slope = p / (q - p);
  AgentType const type{{1.0}, money_weight};
  double          sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double          pc_min = kInf, pc_max = -kInf;
  for (std::size_t n : n_list)
  {
    BudgetInstance inst;
    inst.goods          = 1;
    inst.agents         = n;
    inst.gain_curves    = {GainCurve::Power(1.0, p)};
    inst.money_curve    = MoneyCurve::Power(q);
    inst.semantics      = Semantics::Nominal;
    inst.mrs_convention = MrsConvention::NScaled;
    DivergenceRow row;
    row.n           = n;
    row.nominal_tax = Optimize(type, inst, config).tax;
    auto const nn   = static_cast<double>(n);
    row.closed_form = std::pow(p * std::pow(nn, p) / (money_weight * q), 1.0 / (q - p));
    inst.semantics     = Semantics::PerCapita;
    row.per_capita_tax = Optimize(type, inst, config).tax;
    pc_min             = std::min(pc_min, row.per_capita_tax);
    pc_max             = std::max(pc_max, row.per_capita_tax);
    double const x = std::log(nn);
    double const y = std::log(row.nominal_tax);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    report.rows.push_back(row);
  }
  auto const k          = static_cast<double>(n_list.size());
  report.measured_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  report.per_capita_spread = (pc_max - pc_min) / std::max(1.0, std::fabs(pc_max));
  report.slope_ok          = std::fabs(report.measured_slope - report.stated_slope) <= 0.02;
  report.per_capita_ok     = report.per_capita_spread <= 1e-6;
  report.passed            = report.slope_ok && report.per_capita_ok;
  return report;
}

ContinuityReport ContinuityProbe(AgentType const &type, BudgetInstance const &instance,
                                 std::span<double const> deltas, SolverConfig const &config)
{
  auto const base = Solve(TypeObjective(type), instance, config);
  if (base.non_unique)
  {
    throw NonUniqueOptimum("continuity probe needs a unique optimum");
  }
  std::size_t const   m = type.goods();
  std::vector<double> dir(m + 1, 0.0);
  if (m >= 2)
  {
    dir[0] = 1.0;
    dir[1] = -1.0;
  }
  dir[m] = 1.0;
  double norm = 0.0;
  for (double v : dir)
  {
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto &v : dir)
  {
    v /= norm;
  }

  ContinuityReport report;
  double           lo = kInf;
  double           hi = 0.0;
  for (double delta : deltas)
  {
    AgentType moved = type;
    for (std::size_t j = 0; j < m; ++j)
    {
      moved.alloc_weights[j] += delta * dir[j];
    }
    moved.money_weight += delta * dir[m];
    auto const d    = Optimize(moved, instance, config);
    double     disp = (d.tax - base.decision.tax) * (d.tax - base.decision.tax);
    for (std::size_t j = 0; j < m; ++j)
    {
      double const dx = d.allocation[j] - base.decision.allocation[j];
      disp += dx * dx;
    }
    ContinuityRow row{delta, std::sqrt(disp), 0.0};
    if (delta != 0.0)
    {
      row.ratio = row.displacement / std::fabs(delta);
      lo        = std::min(lo, row.ratio);
      hi        = std::max(hi, row.ratio);
    }
    report.rows.push_back(row);
  }
  report.spread = lo > 0.0 && std::isfinite(lo) ? hi / lo : kInf;
  report.passed = report.spread <= 2.0;
  return report;
}

}  // namespace usvcg
