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

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "usvcg/model.hpp"

namespace usvcg {

/// A reported preferred budget decision.
struct Ballot
{
  BudgetDecision decision;
};

/// Follow-up for a good the ballot left unfunded although its marginal value
/// at zero is finite: "how much extra tax would you accept for probe_spend
/// more on this good?"
struct FollowUp
{
  std::size_t           good        = 0;
  double                probe_spend = 0.0;
  std::optional<double> answer;
};

/// Per-agent state of type recovery from one ballot.
class ElicitationSession
{
public:
  ElicitationSession(Ballot ballot, double tax_weight);

  Ballot const &ballot() const noexcept { return ballot_; }
  double        tax_weight() const noexcept { return tax_weight_; }
  /// Unanswered follow-ups, ordered by good.
  std::vector<FollowUp> const &pending() const noexcept { return pending_; }
  /// Recovered a_j / a_f per good.
  std::map<std::size_t, double> const &ratios() const noexcept { return ratios_; }
  bool Complete() const noexcept { return pending_.empty(); }

private:
  friend ElicitationSession InvertBallot(Ballot const &, BudgetInstance const &, double);
  friend void AnswerFollowUp(ElicitationSession &, std::size_t, double, BudgetInstance const &);

  Ballot                        ballot_;
  double                        tax_weight_;
  std::vector<FollowUp>         pending_;
  std::map<std::size_t, double> ratios_;
};

/// Projects a ballot allocation onto the simplex: entries down to -1e-9 are
/// clipped, the rest renormalized. InfeasibleBallot on larger violations.
Ballot SnapBallot(Ballot ballot, BudgetInstance const &instance);

/// Spend at which theta_j reaches one utility unit.
double DefaultProbeSpend(GainCurve const &curve);

/// Reads the stationarity ratios off a ballot under the instance MRS
/// convention. Goods with zero spend get weight 0 when their marginal value
/// at zero diverges and a follow-up otherwise. InfeasibleBallot when the
/// tax leaves f' undefined or infinite.
ElicitationSession InvertBallot(Ballot const &ballot, BudgetInstance const &instance,
                                double tax_weight = 1.0);

/// Records a_j / a_f = (f(w (t + tau)) - f(w t)) / (G theta_j(probe)).
/// NoPendingQuestion when no follow-up is open for `good`.
void AnswerFollowUp(ElicitationSession &session, std::size_t good, double tau,
                    BudgetInstance const &instance);

/// Solves the ratio system with Sum_j a_j = 1. IncompleteSession while
/// follow-ups are pending.
AgentType CompleteType(ElicitationSession const &session);

/// Answer a truthful agent of `type` would give to `question`.
double TruthfulAnswer(AgentType const &type, ElicitationSession const &session,
                      FollowUp const &question, BudgetInstance const &instance);

}  // namespace usvcg
