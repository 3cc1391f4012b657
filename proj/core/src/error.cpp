// Copyright 2026 The wsnfd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wsnfd/error.hpp"

namespace wsnfd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnknownLabelValue: return "UnknownLabelValue";
    case ErrorKind::InvalidCount: return "InvalidCount";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::TooFewSamplesPerClass: return "TooFewSamplesPerClass";
    case ErrorKind::ColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteCost: return "NonFiniteCost";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SingleClassInput: return "SingleClassInput";
    case ErrorKind::TooFewValues: return "TooFewValues";
    case ErrorKind::ZeroVarianceDifferences: return "ZeroVarianceDifferences";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace wsnfd
