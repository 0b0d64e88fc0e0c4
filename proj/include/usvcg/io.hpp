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

#include <string>
#include <vector>

#include <json.hpp>

#include "usvcg/assumptions.hpp"
#include "usvcg/bias.hpp"
#include "usvcg/elicitation.hpp"
#include "usvcg/experiments.hpp"
#include "usvcg/mechanism.hpp"
#include "usvcg/model.hpp"

// JSON encoding of instances, specs and reports. Parsing failures raise
// SchemaError with the offending field in the message.
namespace usvcg::io {

using Json = nlohmann::json;

struct InstanceFile
{
  BudgetInstance      instance;
  std::vector<Ballot> ballots;
};

Json ParseText(std::string const &text);

GainCurve  ParseGainCurve(Json const &j);
MoneyCurve ParseMoneyCurve(Json const &j);
AgentType  ParseType(Json const &j);
/// Instance plus optional profile ("types" or "ballots", not both).
InstanceFile ParseInstance(Json const &j);
BiasSpec     ParseBias(Json const &j);
ConvergenceSetup ParseSigma(Json const &j);

struct Answer
{
  std::size_t agent = 0;
  std::size_t good  = 0;
  double      tau   = 0.0;
};
std::vector<Answer> ParseAnswers(Json const &j);

Json ToJson(GainCurve const &c);
Json ToJson(MoneyCurve const &c);
Json ToJson(AgentType const &t);
Json ToJson(BudgetDecision const &d);
Json ToJson(BudgetInstance const &instance);
Json ToJson(Outcome const &o);
Json ToJson(ValidationReport const &r);
Json ToJson(FuzzReport const &r, bool include_rows);
Json ToJson(CoalitionReport const &r);
Json ToJson(ConvergenceTable const &t);
Json ToJson(DivergenceReport const &r);
Json ToJson(ContinuityReport const &r);

}  // namespace usvcg::io
