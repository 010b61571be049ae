//
// Copyright 2026 The dpgnn Authors.
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
//

#include "dpgnn/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "dpgnn/strings.h"

namespace dpgnn {
namespace {

constexpr std::string_view kPayloadUrl = "dpgnn/error_kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array kKinds = {
    KindInfo{ErrorKind::kMissingFile, "MissingFile",
             absl::StatusCode::kNotFound},
    KindInfo{ErrorKind::kCountMismatch, "CountMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kChecksumMismatch, "ChecksumMismatch",
             absl::StatusCode::kDataLoss},
    KindInfo{ErrorKind::kNonNumericFeature, "NonNumericFeature",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kLabelOutOfRange, "LabelOutOfRange",
             absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kOverlappingMasks, "OverlappingMasks",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMalformedInput, "MalformedInput",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kUnknownFormat, "UnknownFormat",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidWalkLength, "InvalidWalkLength",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidRestartCount, "InvalidRestartCount",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kBatchTooLarge, "BatchTooLarge",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kRateExceedsOne, "RateExceedsOne",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kShapeMismatch, "ShapeMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMissingLabel, "MissingLabel",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kEmptyMask, "EmptyMask",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kNonFiniteInput, "NonFiniteInput",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kLengthMismatch, "LengthMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kZeroSigma, "ZeroSigma",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidRate, "InvalidRate",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidDelta, "InvalidDelta",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidOrder, "InvalidOrder",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kConfigInvalid, "ConfigInvalid",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kGraphTooLargeForOracle, "GraphTooLargeForOracle",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kIoError, "IoError", absl::StatusCode::kInternal},
};

const KindInfo& Info(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds.back();
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Info(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Info(kind);
  absl::Status status(info.code, StrCat(info.name, ": ", message));
  status.SetPayload(ToAbsl(kPayloadUrl), absl::Cord(ToAbsl(info.name)));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  const auto payload = status.GetPayload(ToAbsl(kPayloadUrl));
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace dpgnn
