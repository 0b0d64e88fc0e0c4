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

#include "usvcg/io.hpp"

#include <cmath>
#include <limits>

#include "usvcg/errors.hpp"

namespace usvcg::io {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json const &Field(Json const &j, char const *key)
{
  if (!j.is_object() || !j.contains(key))
  {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(Json const &j, char const *key)
{
  auto const &v = Field(j, key);
  if (v.is_string())
  {
    auto const s = v.get<std::string>();
    if (s == "-inf")
    {
      return -kInf;
    }
    if (s == "inf")
    {
      return kInf;
    }
  }
  if (!v.is_number())
  {
    throw SchemaError(std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

double NumberOr(Json const &j, char const *key, double fallback)
{
  return j.contains(key) ? Number(j, key) : fallback;
}

std::size_t Count(Json const &j, char const *key)
{
  auto const &v = Field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
  {
    throw SchemaError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::string Text(Json const &j, char const *key)
{
  auto const &v = Field(j, key);
  if (!v.is_string())
  {
    throw SchemaError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> Numbers(Json const &v, char const *what)
{
  if (!v.is_array())
  {
    throw SchemaError(std::string(what) + " must be an array of numbers");
  }
  std::vector<double> out;
  for (auto const &e : v)
  {
    if (!e.is_number())
    {
      throw SchemaError(std::string(what) + " must be an array of numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Json Finite(double v)
{
  if (std::isinf(v))
  {
    return v < 0 ? "-inf" : "inf";
  }
  if (std::isnan(v))
  {
    return nullptr;
  }
  return v;
}

Json FiniteArray(std::vector<double> const &v)
{
  Json out = Json::array();
  for (double x : v)
  {
    out.push_back(Finite(x));
  }
  return out;
}

/// Converts library argument errors raised while building values into
/// schema errors.
template <typename F>
auto Guard(char const *what, F &&f)
{
  try
  {
    return f();
  }
  catch (SchemaError const &)
  {
    throw;
  }
  catch (Error const &e)
  {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
  catch (nlohmann::json::exception const &e)
  {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json ParseText(std::string const &text)
{
  try
  {
    return Json::parse(text);
  }
  catch (nlohmann::json::parse_error const &e)
  {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

GainCurve ParseGainCurve(Json const &j)
{
  return Guard("gain curve", [&] {
    auto const kind = Text(j, "kind");
    if (kind == "log")
    {
      return GainCurve::Log(Number(j, "scale"));
    }
    if (kind == "power")
    {
      return GainCurve::Power(NumberOr(j, "scale", 1.0), Number(j, "exponent"),
                              NumberOr(j, "shift", 0.0));
    }
    throw SchemaError("unknown gain curve kind '" + kind + "'");
  });
}

MoneyCurve ParseMoneyCurve(Json const &j)
{
  return Guard("money curve", [&] {
    auto const kind = Text(j, "kind");
    if (kind == "power")
    {
      return MoneyCurve::Power(Number(j, "q"), NumberOr(j, "domain_min", 0.0));
    }
    if (kind == "kt")
    {
      return MoneyCurve::KahnemanTversky(Number(j, "q"), Number(j, "r"), Number(j, "loss_weight"),
                                         NumberOr(j, "domain_min", -kInf));
    }
    throw SchemaError("unknown money curve kind '" + kind + "'");
  });
}

AgentType ParseType(Json const &j)
{
  return Guard("type", [&] {
    AgentType t{Numbers(Field(j, "alloc"), "alloc"), Number(j, "money")};
    t.Validate();
    return t;
  });
}

InstanceFile ParseInstance(Json const &j)
{
  return Guard("instance", [&] {
    InstanceFile    file;
    BudgetInstance &inst = file.instance;
    inst.goods           = Count(j, "goods");
    inst.agents          = Count(j, "agents");
    inst.external_budget = Number(j, "external_budget");

    auto const sem = Text(j, "semantics");
    if (sem == "nominal")
    {
      inst.semantics = Semantics::Nominal;
    }
    else if (sem == "per_capita")
    {
      inst.semantics = Semantics::PerCapita;
    }
    else
    {
      throw SchemaError("semantics must be 'nominal' or 'per_capita'");
    }
    auto const conv = Text(j, "mrs_convention");
    if (conv == "n_scaled")
    {
      inst.mrs_convention = MrsConvention::NScaled;
    }
    else if (conv == "unscaled")
    {
      inst.mrs_convention = MrsConvention::Unscaled;
    }
    else
    {
      throw SchemaError("mrs_convention must be 'n_scaled' or 'unscaled'");
    }

    auto const &curves = Field(j, "gain_curves");
    if (curves.is_object())
    {
      inst.gain_curves.assign(inst.goods, ParseGainCurve(curves));
    }
    else if (curves.is_array())
    {
      for (auto const &c : curves)
      {
        inst.gain_curves.push_back(ParseGainCurve(c));
      }
    }
    else
    {
      throw SchemaError("gain_curves must be an object or an array");
    }
    inst.money_curve = ParseMoneyCurve(Field(j, "money_curve"));
    if (j.contains("tax_weights"))
    {
      inst.tax_weights = Numbers(j.at("tax_weights"), "tax_weights");
    }
    if (j.contains("units"))
    {
      auto const &u = j.at("units");
      if (u.contains("currency"))
      {
        inst.currency = Text(u, "currency");
      }
    }
    if (j.contains("types") && j.contains("ballots"))
    {
      throw SchemaError("profile must contain either 'types' or 'ballots', not both");
    }
    if (j.contains("types"))
    {
      for (auto const &t : j.at("types"))
      {
        inst.types.push_back(ParseType(t));
      }
    }
    if (j.contains("ballots"))
    {
      for (auto const &b : j.at("ballots"))
      {
        file.ballots.push_back(
            {BudgetDecision{Numbers(Field(b, "allocation"), "allocation"), Number(b, "tax")}});
      }
      if (file.ballots.size() != inst.agents)
      {
        throw SchemaError("ballots must contain one entry per agent");
      }
    }
    inst.Validate();
    return file;
  });
}

BiasSpec ParseBias(Json const &j)
{
  return Guard("bias", [&] {
    BiasSpec b;
    b.lambda = Number(j, "lambda");
    if (j.contains("target"))
    {
      auto const &t = j.at("target");
      if (t.is_string() && t.get<std::string>() == "equitable")
      {
        b.target_kind = BiasSpec::TargetKind::Equitable;
      }
      else if (t.is_object() && t.contains("constant"))
      {
        b.target_kind = BiasSpec::TargetKind::Constant;
        b.target      = Numbers(t.at("constant"), "target.constant");
      }
      else if (t.is_object() && t.contains("table"))
      {
        b.target_kind = BiasSpec::TargetKind::Table;
        for (auto const &row : t.at("table"))
        {
          b.table_taxes.push_back(Number(row, "tax"));
          b.table_targets.push_back(Numbers(Field(row, "allocation"), "table allocation"));
        }
      }
      else
      {
        throw SchemaError("target must be \"equitable\", {\"constant\": [...]} or {\"table\": [...]}");
      }
    }
    if (j.contains("psi"))
    {
      auto const &p    = j.at("psi");
      auto const  kind = Text(p, "kind");
      if (kind == "none")
      {
        b.psi_kind = BiasSpec::PsiKind::None;
      }
      else if (kind == "exponential")
      {
        b.psi_kind  = BiasSpec::PsiKind::Exponential;
        b.psi_scale = Number(p, "scale");
        b.psi_rate  = Number(p, "rate");
      }
      else
      {
        throw SchemaError("psi kind must be 'none' or 'exponential'");
      }
    }
    return b;
  });
}

ConvergenceSetup ParseSigma(Json const &j)
{
  return Guard("sigma", [&] {
    ConvergenceSetup s;
    s.sigma.b0        = Number(j, "b0");
    s.sigma.mu        = Number(j, "mu");
    s.sigma.mean_type = ParseType(Field(j, "mean_type"));
    for (auto const &c : Field(j, "gain_curves"))
    {
      s.gain_curves.push_back(ParseGainCurve(c));
    }
    if (s.gain_curves.size() != s.sigma.mean_type.goods())
    {
      throw SchemaError("sigma gain_curves must match the mean type dimension");
    }
    if (j.contains("money_curve"))
    {
      s.money_curve = ParseMoneyCurve(j.at("money_curve"));
    }
    s.sigma.Validate();
    return s;
  });
}

std::vector<Answer> ParseAnswers(Json const &j)
{
  return Guard("answers", [&] {
    std::vector<Answer> out;
    for (auto const &a : Field(j, "answers"))
    {
      out.push_back({Count(a, "agent"), Count(a, "good"), Number(a, "tau")});
    }
    return out;
  });
}

Json ToJson(GainCurve const &c)
{
  if (c.kind() == GainCurve::Kind::Log)
  {
    return {{"kind", "log"}, {"scale", c.scale()}};
  }
  return {{"kind", "power"}, {"scale", c.scale()}, {"exponent", c.exponent()}, {"shift", c.shift()}};
}

Json ToJson(MoneyCurve const &c)
{
  if (c.kind() == MoneyCurve::Kind::Power)
  {
    return {{"kind", "power"}, {"q", c.q()}, {"domain_min", Finite(c.domain_min())}};
  }
  return {{"kind", "kt"},
          {"q", c.q()},
          {"r", c.r()},
          {"loss_weight", c.loss_weight()},
          {"domain_min", Finite(c.domain_min())}};
}

Json ToJson(AgentType const &t)
{
  return {{"alloc", t.alloc_weights}, {"money", t.money_weight}};
}

Json ToJson(BudgetDecision const &d)
{
  return {{"allocation", d.allocation}, {"tax", d.tax}};
}

Json ToJson(BudgetInstance const &inst)
{
  Json j = {{"goods", inst.goods},
            {"agents", inst.agents},
            {"external_budget", inst.external_budget},
            {"semantics", ToString(inst.semantics)},
            {"mrs_convention", ToString(inst.mrs_convention)},
            {"units", {{"currency", inst.currency}}},
            {"money_curve", ToJson(inst.money_curve)}};
  Json curves = Json::array();
  for (auto const &c : inst.gain_curves)
  {
    curves.push_back(ToJson(c));
  }
  j["gain_curves"] = curves;
  if (!inst.tax_weights.empty())
  {
    j["tax_weights"] = inst.tax_weights;
  }
  if (!inst.types.empty())
  {
    Json types = Json::array();
    for (auto const &t : inst.types)
    {
      types.push_back(ToJson(t));
    }
    j["types"] = types;
  }
  return j;
}

Json ToJson(Outcome const &o)
{
  double max_residual = 0.0;
  for (double r : o.identity_residuals)
  {
    max_residual = std::max(max_residual, r);
  }
  return {{"decision", ToJson(o.decision)},
          {"raw_vcg", FiniteArray(o.raw_vcg)},
          {"payments", FiniteArray(o.payments)},
          {"utilities", FiniteArray(o.utilities)},
          {"pivots", FiniteArray(o.pivots)},
          {"welfare", Finite(o.welfare)},
          {"identity_residuals", FiniteArray(o.identity_residuals)},
          {"max_identity_residual", Finite(max_residual)},
          {"warnings", o.warnings}};
}

Json ToJson(ValidationReport const &r)
{
  Json checks = Json::array();
  for (auto const &c : r.checks)
  {
    checks.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}, {"detail", c.detail}});
  }
  return {{"checks", checks},
          {"interior_case", r.interior_case},
          {"tax_divergent", r.tax_divergent},
          {"all_passed", r.AllPassed()}};
}

Json ToJson(FuzzReport const &r, bool include_rows)
{
  Json families = Json::object();
  for (int f = 0; f < 3; ++f)
  {
    families[ToString(static_cast<MisreportFamily>(f))] = {
        {"trials", r.family_trials[f]}, {"max_gain", Finite(r.family_max[f])}};
  }
  Json j = {{"trials", r.trials},
            {"tolerance", r.tolerance},
            {"max_gain", Finite(r.max_gain)},
            {"families", families},
            {"dsic_only", r.dsic_only},
            {"passed", r.passed}};
  if (r.trials > 0)
  {
    j["worst_case"] = {{"trial", r.worst.trial},
                       {"agent", r.worst.agent},
                       {"family", ToString(r.worst.family)},
                       {"truth", ToJson(r.worst.truth)},
                       {"misreport", ToJson(r.worst.misreport)},
                       {"gain", Finite(r.worst.gain)}};
  }
  if (include_rows)
  {
    Json rows = Json::array();
    for (auto const &row : r.rows)
    {
      rows.push_back({{"trial", row.trial},
                      {"agent", row.agent},
                      {"family", ToString(row.family)},
                      {"gain", Finite(row.gain)}});
    }
    j["rows"] = rows;
  }
  return j;
}

Json ToJson(CoalitionReport const &r)
{
  return {{"trials", r.trials},
          {"coalition_size", r.coalition_size},
          {"manipulations", r.manipulations},
          {"unstable", r.unstable},
          {"max_min_gain", Finite(r.max_min_gain)},
          {"passed", r.passed}};
}

Json ToJson(ConvergenceTable const &t)
{
  Json rows = Json::array();
  for (auto const &r : t.rows)
  {
    Json row = {{"n", r.n},
                {"tax", r.tax},
                {"max_abs_payment", r.max_abs_payment},
                {"n_times_max", r.n_times_max},
                {"sum_abs_payments", r.sum_abs_payments}};
    if (t.non_positive)
    {
      row["np_max_payment"]      = r.np_max_payment;
      row["np_sum_abs"]          = r.np_sum_abs;
      row["np_all_non_positive"] = r.np_all_non_positive;
      row["regularity_warnings"] = r.regularity_warnings;
    }
    rows.push_back(row);
  }
  Json j = {{"rows", rows},
            {"monotone", t.monotone},
            {"plateau_ratio", t.plateau_ratio},
            {"non_positive", t.non_positive},
            {"passed", t.passed}};
  if (t.non_positive)
  {
    j["np_all_non_positive"] = t.np_all;
    j["np_sum_ratio"]        = t.np_sum_ratio;
    j["np_regime_n"]         = t.np_regime_n;
  }
  return j;
}

Json ToJson(DivergenceReport const &r)
{
  Json rows = Json::array();
  for (auto const &row : r.rows)
  {
    rows.push_back({{"n", row.n},
                    {"nominal_tax", row.nominal_tax},
                    {"closed_form", row.closed_form},
                    {"per_capita_tax", row.per_capita_tax}});
  }
  return {{"p", r.p},
          {"q", r.q},
          {"money_weight", r.money_weight},
          {"rows", rows},
          {"measured_slope", r.measured_slope},
          {"stated_slope", r.stated_slope},
          {"derived_slope", r.derived_slope},
          {"per_capita_spread", r.per_capita_spread},
          {"slope_ok", r.slope_ok},
          {"per_capita_ok", r.per_capita_ok},
          {"passed", r.passed}};
}

Json ToJson(ContinuityReport const &r)
{
  Json rows = Json::array();
  for (auto const &row : r.rows)
  {
    rows.push_back(
        {{"delta", row.delta}, {"displacement", row.displacement}, {"ratio", row.ratio}});
  }
  return {{"rows", rows}, {"spread", Finite(r.spread)}, {"passed", r.passed}};
}

}  // namespace usvcg::io
