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

#include "usvcg/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "usvcg/errors.hpp"

namespace usvcg {

ElicitationSession::ElicitationSession(Ballot ballot, double tax_weight)
  : ballot_(std::move(ballot))
  , tax_weight_(tax_weight)
{}

Ballot SnapBallot(Ballot ballot, BudgetInstance const &instance)
{
  auto &x = ballot.decision.allocation;
  if (x.size() != instance.goods)
  {
    throw InfeasibleBallot("ballot allocation has " + std::to_string(x.size()) +
                           " entries, expected " + std::to_string(instance.goods));
  }
  for (auto &v : x)
  {
    if (!(v >= -1e-9) || !std::isfinite(v))
    {
      throw InfeasibleBallot("ballot allocation has a negative entry");
    }
    v = std::max(v, 0.0);
  }
  double const sum = std::accumulate(x.begin(), x.end(), 0.0);
  if (!(sum > 0.0))
  {
    throw InfeasibleBallot("ballot allocation is empty");
  }
  for (auto &v : x)
  {
    v /= sum;
  }
  return ballot;
}

double DefaultProbeSpend(GainCurve const &curve)
{
  return curve.Inverse(1.0);
}

ElicitationSession InvertBallot(Ballot const &raw, BudgetInstance const &instance,
                                double tax_weight)
{
  Ballot const ballot = SnapBallot(raw, instance);
  double const tax    = ballot.decision.tax;
  if (!(tax > instance.TaxFloor()) || !instance.money_curve.InDomain(tax_weight * tax))
  {
    throw InfeasibleBallot("ballot tax lies outside the feasible interval");
  }
  double const fprime = instance.money_curve.Derivative(tax_weight * tax);
  if (!std::isfinite(fprime))
  {
    throw InfeasibleBallot("money disutility is not differentiable at the ballot tax");
  }
  ElicitationSession session(ballot, tax_weight);
  double const       budget = instance.Budget(tax);
  double const       K      = instance.MrsFactor();
  for (std::size_t j = 0; j < instance.goods; ++j)
  {
    double const x     = ballot.decision.allocation[j];
    auto const  &curve = instance.gain_curves[j];
    if (x > 0.0)
    {
      // K theta'_j / (w f') = a_f / a_j.
      session.ratios_[j] = tax_weight * fprime / (K * curve.Derivative(x * budget));
    }
    else if (curve.DerivativeDivergesAtZero())
    {
      session.ratios_[j] = 0.0;
    }
    else
    {
      session.pending_.push_back({j, DefaultProbeSpend(curve), std::nullopt});
    }
  }
  return session;
}

void AnswerFollowUp(ElicitationSession &session, std::size_t good, double tau,
                    BudgetInstance const &instance)
{
  auto it = std::find_if(session.pending_.begin(), session.pending_.end(),
                         [good](FollowUp const &f) { return f.good == good; });
  if (it == session.pending_.end())
  {
    throw NoPendingQuestion("no follow-up pending for good " + std::to_string(good));
  }
  if (!(tau >= 0.0) || !std::isfinite(tau))
  {
    throw InvalidArgument("follow-up answers must be nonnegative");
  }
  double const w     = session.tax_weight_;
  double const t     = session.ballot_.decision.tax;
  double const level = instance.GainWeight() * instance.gain_curves[good].Value(it->probe_spend);
  if (!(level > 0.0))
  {
    throw InvalidArgument("probe spend must yield a positive utility");
  }
  double const paid = instance.money_curve.Value(w * (t + tau)) - instance.money_curve.Value(w * t);
  session.ratios_[good] = tau == 0.0 ? 0.0 : paid / level;
  session.pending_.erase(it);
}

AgentType CompleteType(ElicitationSession const &session)
{
  if (!session.Complete())
  {
    throw IncompleteSession(std::to_string(session.pending().size()) +
                            " follow-up question(s) still pending");
  }
  auto const &r   = session.ratios();
  double      sum = 0.0;
  for (auto const &[j, v] : r)
  {
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
  {
    throw InfeasibleBallot("ballot implies no positive weight on any good");
  }
  AgentType type{std::vector<double>(r.size(), 0.0), 1.0 / sum};
  for (auto const &[j, v] : r)
  {
    type.alloc_weights[j] = v / sum;
  }
  return type;
}

double TruthfulAnswer(AgentType const &type, ElicitationSession const &session,
                      FollowUp const &question, BudgetInstance const &instance)
{
  double const ratio = type.alloc_weights[question.good] / type.money_weight;
  if (ratio == 0.0)
  {
    return 0.0;
  }
  double const w      = session.tax_weight();
  double const t      = session.ballot().decision.tax;
  double const level  = instance.GainWeight() * instance.gain_curves[question.good].Value(question.probe_spend);
  double const target = instance.money_curve.Value(w * t) + ratio * level;
  return instance.money_curve.Inverse(target) / w - t;
}

}  // namespace usvcg
