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

#include <stdexcept>
#include <string>

namespace usvcg {

enum class ErrorCode
{
  Domain,
  Range,
  Convergence,
  TaxDivergence,
  EmptyProfile,
  InfeasibleBallot,
  NoPendingQuestion,
  IncompleteSession,
  BoundaryTarget,
  NonUniqueOptimum,
  ResolutionTooCoarse,
  InvalidArgument,
  Schema,
};

char const *ToString(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, std::string const &what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept
  {
    return code_;
  }

private:
  ErrorCode code_;
};

// One distinct type per code so callers (and tests) can catch selectively.
template <ErrorCode C>
class CodedError : public Error
{
public:
  explicit CodedError(std::string const &what)
    : Error(C, what)
  {}
};

using DomainError          = CodedError<ErrorCode::Domain>;
using RangeError           = CodedError<ErrorCode::Range>;
using ConvergenceError     = CodedError<ErrorCode::Convergence>;
using TaxDivergence        = CodedError<ErrorCode::TaxDivergence>;
using EmptyProfile         = CodedError<ErrorCode::EmptyProfile>;
using InfeasibleBallot     = CodedError<ErrorCode::InfeasibleBallot>;
using NoPendingQuestion    = CodedError<ErrorCode::NoPendingQuestion>;
using IncompleteSession    = CodedError<ErrorCode::IncompleteSession>;
using BoundaryTarget       = CodedError<ErrorCode::BoundaryTarget>;
using NonUniqueOptimum     = CodedError<ErrorCode::NonUniqueOptimum>;
using ResolutionTooCoarse  = CodedError<ErrorCode::ResolutionTooCoarse>;
using InvalidArgument      = CodedError<ErrorCode::InvalidArgument>;
using SchemaError          = CodedError<ErrorCode::Schema>;

}  // namespace usvcg
