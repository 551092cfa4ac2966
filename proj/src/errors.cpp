/*
 * Copyright 2026 The qgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qgauss/errors.hpp"

namespace qgauss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::KernelParameterOutOfRange: return "KernelParameterOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::QuadratureResolutionTooCoarse: return "QuadratureResolutionTooCoarse";
    case ErrorCode::NoUsableEntries: return "NoUsableEntries";
    case ErrorCode::OutOfTableRange: return "OutOfTableRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::MassUnreachable: return "MassUnreachable";
    case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::CacheFormat: return "CacheFormat";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::GridTooLarge:
    case ErrorCode::KernelParameterOutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DomainError:
    case ErrorCode::MassUnreachable:
    case ErrorCode::InfeasibleConstraints:
    case ErrorCode::DegenerateEnsemble:
      return true;
    default:
      return false;
  }
}

}  // namespace qgauss
