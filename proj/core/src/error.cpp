// Copyright 2026 The mclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mclab/error.hpp"

namespace mclab {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonMonotoneQV: return "NonMonotoneQV";
        case ErrorCode::BreakdownNonpositivePivot: return "BreakdownNonpositivePivot";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::DegenerateStar: return "DegenerateStar";
        case ErrorCode::ZeroPivot: return "ZeroPivot";
        case ErrorCode::UnknownDesign: return "UnknownDesign";
        case ErrorCode::BadDistribution: return "BadDistribution";
        case ErrorCode::ZeroInteraction: return "ZeroInteraction";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::LipschitzViolated: return "LipschitzViolated";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace mclab
