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

#include "usvcg/usvcg.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

#include "usvcg/assumptions.hpp"
#include "usvcg/elicitation.hpp"
#include "usvcg/errors.hpp"
#include "usvcg/experiments.hpp"
#include "usvcg/io.hpp"
#include "usvcg/mechanism.hpp"
#include "usvcg/solver.hpp"

struct usvcg_instance
{
  usvcg::io::InstanceFile file;
};

namespace {

using usvcg::io::Json;

thread_local std::string g_last_error;

struct Result
{
  int  status = USVCG_OK;
  Json doc;
};

int StatusFor(usvcg::ErrorCode code)
{
  using usvcg::ErrorCode;
  switch (code)
  {
  case ErrorCode::Schema:
  case ErrorCode::InvalidArgument:
  case ErrorCode::InfeasibleBallot:
  case ErrorCode::NoPendingQuestion:
  case ErrorCode::IncompleteSession:
    return USVCG_SCHEMA;
  default:
    return USVCG_SOLVER;
  }
}

char *Dup(std::string const &s)
{
  auto *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out != nullptr)
  {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

// Thrown for NULL handles; maps to USVCG_USAGE rather than a library error.
struct NullArgument : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

template <typename F>
int Run(char **result, F &&body)
{
  g_last_error.clear();
  if (result == nullptr)
  {
    g_last_error = "result pointer is NULL";
    return USVCG_USAGE;
  }
  *result = nullptr;
  try
  {
    Result r = body();
    *result  = Dup(r.doc.dump(2));
    return r.status;
  }
  catch (NullArgument const &e)
  {
    g_last_error = e.what();
    return USVCG_USAGE;
  }
  catch (usvcg::Error const &e)
  {
    g_last_error = std::string(usvcg::ToString(e.code())) + ": " + e.what();
    return StatusFor(e.code());
  }
  catch (std::exception const &e)
  {
    g_last_error = std::string("internal error: ") + e.what();
    return USVCG_SOLVER;
  }
}

Json Options(char const *text)
{
  if (text == nullptr || *text == '\0')
  {
    return Json::object();
  }
  auto j = usvcg::io::ParseText(text);
  if (!j.is_object())
  {
    throw usvcg::SchemaError("options must be a JSON object");
  }
  return j;
}

usvcg::io::InstanceFile const &File(usvcg_instance const *instance)
{
  if (instance == nullptr)
  {
    throw NullArgument("instance handle is NULL");
  }
  return instance->file;
}

usvcg::Profile const &Types(usvcg::BudgetInstance const &inst)
{
  if (inst.types.empty())
  {
    throw usvcg::SchemaError("instance has no 'types' profile");
  }
  return inst.types;
}

std::vector<std::size_t> Sizes(Json const &j, char const *key, std::vector<std::size_t> fallback)
{
  if (!j.contains(key))
  {
    return fallback;
  }
  try
  {
    return j.at(key).get<std::vector<std::size_t>>();
  }
  catch (nlohmann::json::exception const &)
  {
    throw usvcg::SchemaError(std::string(key) + " must be an array of positive integers");
  }
}

template <typename T>
T Get(Json const &j, char const *key, T fallback)
{
  if (!j.contains(key))
  {
    return fallback;
  }
  try
  {
    return j.at(key).get<T>();
  }
  catch (nlohmann::json::exception const &)
  {
    throw usvcg::SchemaError(std::string("option '") + key + "' has the wrong type");
  }
}

struct MechanismRun
{
  usvcg::Outcome outcome;
  Json           extra = Json::object();
  std::string    mode;
};

MechanismRun RunMechanism(usvcg::BudgetInstance const &inst, Json const &opts)
{
  auto const  &profile = Types(inst);
  MechanismRun run;
  bool const   hetero       = Get(opts, "hetero", false) || !inst.HomogeneousWeights();
  bool const   non_positive = Get(opts, "non_positive", false);
  bool const   biased       = opts.contains("bias") && !opts.at("bias").is_null();
  if (static_cast<int>(hetero) + static_cast<int>(non_positive) + static_cast<int>(biased) > 1)
  {
    throw usvcg::InvalidArgument("choose at most one of bias, non_positive and hetero");
  }
  if (biased)
  {
    auto const bias = usvcg::io::ParseBias(opts.at("bias"));
    run.outcome     = usvcg::RunBusVcg(profile, bias, inst);
    run.mode        = "bus_vcg";
  }
  else if (non_positive)
  {
    usvcg::NonPositiveConfig np;
    np.gamma   = Get(opts, "gamma", np.gamma);
    np.mu      = Get(opts, "mu", np.mu);
    np.r       = Get(opts, "r", np.r);
    np.fd_step = Get(opts, "fd_step", np.fd_step);
    auto const npo = usvcg::NonPositivePayments(profile, inst, np);
    run.outcome    = npo.base;
    run.mode       = "non_positive";
    run.extra      = {{"gamma", np.Gamma()},
                      {"r", np.r},
                      {"adjusted_vcg", npo.adjusted_vcg},
                      {"jacobian_norms", npo.jacobian_norms},
                      {"payments", npo.payments},
                      {"all_non_positive", npo.all_non_positive}};
  }
  else if (hetero)
  {
    run.outcome = usvcg::RunUsVcgHetero(profile, inst);
    run.mode    = "hetero";
  }
  else
  {
    run.outcome = usvcg::RunUsVcg(profile, inst);
    run.mode    = "us_vcg";
  }
  return run;
}

bool Close(double a, double b, double tol)
{
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

extern "C" {

char const *usvcg_version(void)
{
  return "0.1.0";
}

char const *usvcg_last_error(void)
{
  return g_last_error.c_str();
}

void usvcg_string_free(char *text)
{
  std::free(text);
}

int usvcg_instance_create(char const *instance_json, usvcg_instance **out)
{
  g_last_error.clear();
  if (out == nullptr || instance_json == nullptr)
  {
    g_last_error = "NULL argument";
    return USVCG_USAGE;
  }
  *out = nullptr;
  try
  {
    auto file = usvcg::io::ParseInstance(usvcg::io::ParseText(instance_json));
    *out      = new usvcg_instance{std::move(file)};
    return USVCG_OK;
  }
  catch (usvcg::Error const &e)
  {
    g_last_error = std::string(usvcg::ToString(e.code())) + ": " + e.what();
    return StatusFor(e.code());
  }
  catch (std::exception const &e)
  {
    g_last_error = std::string("internal error: ") + e.what();
    return USVCG_SCHEMA;
  }
}

void usvcg_instance_destroy(usvcg_instance *instance)
{
  delete instance;
}

int usvcg_solve(usvcg_instance const *instance, char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const &inst = File(instance).instance;
    auto const  opts = Options(options_json);
    usvcg::AgentType type;
    if (opts.contains("type"))
    {
      type = usvcg::io::ParseType(opts.at("type"));
      if (type.goods() != inst.goods)
      {
        throw usvcg::SchemaError("type dimension does not match the instance");
      }
    }
    else
    {
      type = usvcg::MeanType(Types(inst));
    }
    auto const sol = usvcg::Solve(usvcg::TypeObjective(type), inst);
    Json       doc = {{"type", usvcg::io::ToJson(type)},
                      {"decision", usvcg::io::ToJson(sol.decision)},
                      {"value", sol.value},
                      {"non_unique", sol.non_unique}};
    Json residuals = Json::array();
    for (double r : usvcg::MrsResiduals(type, sol.decision, inst))
    {
      residuals.push_back(std::isnan(r) ? Json(nullptr) : Json(r));
    }
    doc["mrs_residuals"] = residuals;
    return {USVCG_OK, doc};
  });
}

int usvcg_elicit(usvcg_instance const *instance, char const *answers_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const &file = File(instance);
    auto const &inst = file.instance;
    if (file.ballots.empty())
    {
      throw usvcg::SchemaError("instance has no 'ballots' profile");
    }
    std::vector<usvcg::io::Answer> answers;
    if (answers_json != nullptr)
    {
      answers = usvcg::io::ParseAnswers(usvcg::io::ParseText(answers_json));
    }
    std::vector<usvcg::ElicitationSession> sessions;
    for (std::size_t i = 0; i < file.ballots.size(); ++i)
    {
      sessions.push_back(usvcg::InvertBallot(file.ballots[i], inst, inst.TaxWeight(i)));
    }
    for (auto const &a : answers)
    {
      if (a.agent >= sessions.size())
      {
        throw usvcg::SchemaError("answer refers to unknown agent " + std::to_string(a.agent));
      }
      usvcg::AnswerFollowUp(sessions[a.agent], a.good, a.tau, inst);
    }
    Json questions = Json::array();
    for (std::size_t i = 0; i < sessions.size(); ++i)
    {
      for (auto const &q : sessions[i].pending())
      {
        questions.push_back({{"agent", i},
                             {"good", q.good},
                             {"probe_spend", q.probe_spend},
                             {"ballot_tax", sessions[i].ballot().decision.tax}});
      }
    }
    if (!questions.empty())
    {
      return {USVCG_PENDING, {{"status", "pending"}, {"questions", questions}}};
    }
    Json types = Json::array();
    for (auto const &s : sessions)
    {
      types.push_back(usvcg::io::ToJson(usvcg::CompleteType(s)));
    }
    return {USVCG_OK, {{"status", "complete"}, {"types", types}}};
  });
}

int usvcg_mechanism(usvcg_instance const *instance, char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const &inst = File(instance).instance;
    auto const  opts = Options(options_json);
    auto const  run  = RunMechanism(inst, opts);
    Json        doc  = usvcg::io::ToJson(run.outcome);
    doc["mode"]       = run.mode;
    doc["options"]    = opts;
    doc["validation"] = usvcg::io::ToJson(usvcg::ValidateAssumptions(inst));
    if (run.mode == "non_positive")
    {
      doc["non_positive"] = run.extra;
    }
    return {USVCG_OK, doc};
  });
}

int usvcg_check(usvcg_instance const *instance, char const *result_json, char **report)
{
  return Run(report, [&]() -> Result {
    auto const &inst = File(instance).instance;
    auto const &prof = Types(inst);
    if (result_json == nullptr)
    {
      throw usvcg::SchemaError("result document is NULL");
    }
    auto const stored = usvcg::io::ParseText(result_json);
    Json       checks = Json::array();
    bool       all_ok = true;
    auto       add    = [&](std::string name, bool ok, Json detail) {
      checks.push_back({{"name", std::move(name)}, {"passed", ok}, {"detail", std::move(detail)}});
      all_ok = all_ok && ok;
    };
    try
    {
      usvcg::BudgetDecision const decision{
          stored.at("decision").at("allocation").get<std::vector<double>>(),
          stored.at("decision").at("tax").get<double>()};
      auto const payments = stored.at("payments").get<std::vector<double>>();
      auto const pivots   = stored.at("pivots").get<std::vector<double>>();
      double const welfare = stored.at("welfare").get<double>();
      if (payments.size() != prof.size() || pivots.size() != prof.size())
      {
        throw usvcg::SchemaError("result does not match the profile size");
      }
      usvcg::ValidateDecision(decision, inst);

      // Identities from the stored numbers and independently evaluated
      // utilities.
      double max_residual = 0.0;
      for (std::size_t i = 0; i < prof.size(); ++i)
      {
        double const u = usvcg::RealizedUtility(prof[i], decision, payments[i], inst,
                                                inst.TaxWeight(i));
        max_residual   = std::max(max_residual, std::fabs(u - (welfare - pivots[i])));
      }
      add("identity", max_residual <= 1e-8, {{"max_residual", max_residual}});

      // Recompute the whole mechanism with the recorded options.
      Json const opts = stored.contains("options") ? stored.at("options") : Json::object();
      auto const run  = RunMechanism(inst, opts);
      bool same_decision = Close(run.outcome.decision.tax, decision.tax, 1e-7);
      for (std::size_t j = 0; j < decision.allocation.size(); ++j)
      {
        same_decision = same_decision &&
                        std::fabs(run.outcome.decision.allocation[j] - decision.allocation[j]) <= 1e-7;
      }
      add("decision", same_decision, {{"recomputed", usvcg::io::ToJson(run.outcome.decision)}});
      bool same_payments = true;
      for (std::size_t i = 0; i < payments.size(); ++i)
      {
        same_payments = same_payments && Close(run.outcome.payments[i], payments[i], 1e-6);
      }
      add("payments", same_payments, {{"recomputed", run.outcome.payments}});
      add("welfare", Close(run.outcome.welfare, welfare, 1e-9),
          {{"recomputed", run.outcome.welfare}});
      if (stored.contains("raw_vcg"))
      {
        bool nonneg = true;
        for (double p : stored.at("raw_vcg").get<std::vector<double>>())
        {
          nonneg = nonneg && p >= -1e-9;
        }
        add("clarke_nonnegative", nonneg, Json::object());
      }
    }
    catch (nlohmann::json::exception const &e)
    {
      throw usvcg::SchemaError(std::string("result document: ") + e.what());
    }
    return {all_ok ? USVCG_OK : USVCG_PROPERTY_FAILED, {{"checks", checks}, {"passed", all_ok}}};
  });
}

int usvcg_fuzz(usvcg_instance const *instance, char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const &inst   = File(instance).instance;
    auto const  opts   = Options(options_json);
    auto const  trials = Get<std::size_t>(opts, "trials", 1000);
    auto const  seed   = Get<std::uint64_t>(opts, "seed", 42);
    usvcg::FuzzConfig fuzz;
    fuzz.mu = Get(opts, "mu", fuzz.mu);
    auto const report = usvcg::SdsicFuzz(inst, trials, seed, fuzz);
    Json       doc    = {{"sdsic", usvcg::io::ToJson(report, Get(opts, "rows", false))},
                         {"seed", seed}};
    bool passed = report.passed;
    if (trials == 0)
    {
      doc["warnings"] = Json::array({"no trials were run; the property holds vacuously"});
      passed          = true;
      doc["sdsic"]["passed"] = true;
    }
    auto const coalition = Get<std::size_t>(opts, "coalition", 0);
    if (coalition > 0)
    {
      auto const c     = usvcg::CoalitionProbe(inst, coalition, trials, seed, fuzz);
      doc["coalition"] = usvcg::io::ToJson(c);
      passed           = passed && c.passed;
    }
    doc["passed"] = passed;
    return {passed ? USVCG_OK : USVCG_PROPERTY_FAILED, doc};
  });
}

int usvcg_converge(char const *sigma_json, char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    if (sigma_json == nullptr)
    {
      throw usvcg::SchemaError("sigma document is NULL");
    }
    auto const setup  = usvcg::io::ParseSigma(usvcg::io::ParseText(sigma_json));
    auto const opts   = Options(options_json);
    auto const n_list = Sizes(opts, "n_list", {10, 100, 1000});
    auto const seed   = Get<std::uint64_t>(opts, "seed", 42);
    usvcg::NonPositiveConfig np;
    np.gamma   = Get(opts, "gamma", np.gamma);
    np.r       = Get(opts, "r", np.r);
    np.fd_step = Get(opts, "fd_step", np.fd_step);
    auto const table =
        usvcg::ConvergenceStudy(setup, n_list, seed, Get(opts, "non_positive", false), np);
    Json doc    = usvcg::io::ToJson(table);
    doc["seed"] = seed;
    return {table.passed ? USVCG_OK : USVCG_PROPERTY_FAILED, doc};
  });
}

int usvcg_validate(usvcg_instance const *instance, char **report)
{
  return Run(report, [&]() -> Result {
    auto const r = usvcg::ValidateAssumptions(File(instance).instance);
    return {r.AllPassed() ? USVCG_OK : USVCG_PROPERTY_FAILED, usvcg::io::ToJson(r)};
  });
}

int usvcg_diverge(char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const opts   = Options(options_json);
    auto const n_list = Sizes(opts, "n_list", {10, 100, 1000});
    auto const r      = usvcg::TaxDivergenceDemo(Get(opts, "p", 0.3), Get(opts, "q", 0.5), n_list,
                                                 Get(opts, "money_weight", 1.0));
    return {r.passed ? USVCG_OK : USVCG_PROPERTY_FAILED, usvcg::io::ToJson(r)};
  });
}

int usvcg_continuity(usvcg_instance const *instance, char const *options_json, char **result)
{
  return Run(result, [&]() -> Result {
    auto const &inst = File(instance).instance;
    auto const  opts = Options(options_json);
    auto const  type = opts.contains("type") ? usvcg::io::ParseType(opts.at("type"))
                                             : usvcg::MeanType(Types(inst));
    auto const deltas = Get(opts, "deltas", std::vector<double>{1e-2, 1e-3, 1e-4});
    auto const r      = usvcg::ContinuityProbe(type, inst, deltas);
    return {r.passed ? USVCG_OK : USVCG_PROPERTY_FAILED, usvcg::io::ToJson(r)};
  });
}

}  // extern "C"
