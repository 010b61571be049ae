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

#ifndef DPGNN_STATUS_H_
#define DPGNN_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpgnn {

// Named failure kinds. Each maps onto a canonical absl code and is attached to
// the status as a payload so callers (notably the CLI) can report it by name.
enum class ErrorKind {
  kMissingFile,
  kCountMismatch,
  kChecksumMismatch,
  kNonNumericFeature,
  kLabelOutOfRange,
  kOverlappingMasks,
  kMalformedInput,
  kUnknownFormat,
  kInvalidWalkLength,
  kInvalidRestartCount,
  kBatchTooLarge,
  kRateExceedsOne,
  kShapeMismatch,
  kMissingLabel,
  kEmptyMask,
  kNonFiniteInput,
  kLengthMismatch,
  kZeroSigma,
  kInvalidRate,
  kInvalidDelta,
  kInvalidOrder,
  kConfigInvalid,
  kGraphTooLargeForOracle,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Builds a status whose message is prefixed with the kind name.
absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind attached by MakeError, if any.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

}  // namespace dpgnn

#define DPGNN_STATUS_CONCAT_INNER_(a, b) a##b
#define DPGNN_STATUS_CONCAT_(a, b) DPGNN_STATUS_CONCAT_INNER_(a, b)

#define DPGNN_RETURN_IF_ERROR(expr)                \
  do {                                             \
    const ::absl::Status dpgnn_status_ = (expr);   \
    if (!dpgnn_status_.ok()) return dpgnn_status_; \
  } while (false)

#define DPGNN_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(tmp).value()

#define DPGNN_ASSIGN_OR_RETURN(lhs, expr) \
  DPGNN_ASSIGN_OR_RETURN_IMPL_(           \
      DPGNN_STATUS_CONCAT_(dpgnn_statusor_, __LINE__), lhs, expr)

#endif  // DPGNN_STATUS_H_
