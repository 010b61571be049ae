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

#ifndef DPGNN_CHECKPOINT_H_
#define DPGNN_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpgnn/model.h"

namespace dpgnn {

inline constexpr int kCheckpointVersion = 1;

// JSON document: {"format": "dpgnn-checkpoint", "version", "arch", "depth",
// "input_dim", "hidden_dim", "num_classes", "params": [...]}. Doubles are
// written in shortest round-trip form, so parsing restores them bitwise.
std::string CheckpointToJson(const ModelParams& params);
absl::StatusOr<ModelParams> CheckpointFromJson(std::string_view text);

absl::Status SaveCheckpoint(const ModelParams& params,
                            const std::filesystem::path& path);
absl::StatusOr<ModelParams> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace dpgnn

#endif  // DPGNN_CHECKPOINT_H_
