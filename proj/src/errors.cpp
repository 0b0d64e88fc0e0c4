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

#include "usvcg/errors.hpp"

namespace usvcg {

char const *ToString(ErrorCode code) noexcept
{
  switch (code)
  {
  case ErrorCode::Domain:
    return "DomainError";
  case ErrorCode::Range:
    return "RangeError";
  case ErrorCode::Convergence:
    return "ConvergenceError";
  case ErrorCode::TaxDivergence:
    return "TaxDivergence";
  case ErrorCode::EmptyProfile:
    return "EmptyProfile";
  case ErrorCode::InfeasibleBallot:
    return "InfeasibleBallot";
  case ErrorCode::NoPendingQuestion:
    return "NoPendingQuestion";
  case ErrorCode::IncompleteSession:
    return "IncompleteSession";
  case ErrorCode::BoundaryTarget:
    return "BoundaryTarget";
  case ErrorCode::NonUniqueOptimum:
    return "NonUniqueOptimum";
  case ErrorCode::ResolutionTooCoarse:
    return "ResolutionTooCoarse";
  case ErrorCode::InvalidArgument:
    return "InvalidArgument";
  case ErrorCode::Schema:
    return "SchemaError";
  }
  return "Unknown";
}

}  // namespace usvcg
