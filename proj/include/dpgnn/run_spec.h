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

// JSON run specification: a TrainConfig plus the bundle to train on, the
// output directory and, for sweeps, the epsilon checkpoints.
//
// Keys (all optional unless noted): bundle (required), output_dir, arch
// ("GCN" | "MLP"), depth, hidden_dim, sampler ("DRW" | "DRW-R" | "DRW-D"),
// walk_length, restarts, resample_every, batch_size, learning_rate,
// clip_norm, noise_multiplier, target_epsilon, delta (required when
// dp_enabled), max_iterations, seed, dp_enabled, row_normalize, eval_every,
// workers, checkpoints. Unknown keys are rejected.
#ifndef DPGNN_RUN_SPEC_H_
#define DPGNN_RUN_SPEC_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgnn/trainer.h"

namespace dpgnn {

// Environment variable naming the root under which runs without an explicit
// output directory are written.
inline constexpr char kOutputRootEnv[] = "DPGNN_OUTPUT_ROOT";

struct RunSpec {
  TrainConfig config;
  std::filesystem::path bundle;
  // Empty when the spec does not name one.
  std::filesystem::path output_dir;
  std::vector<double> checkpoints;
};

absl::StatusOr<RunSpec> ParseRunSpec(std::string_view json_text);
absl::StatusOr<RunSpec> LoadRunSpec(const std::filesystem::path& path);

// Canonical JSON form of a spec (every key written).
std::string RunSpecToJson(const RunSpec& spec);

// Output directory for `spec`, in order of preference: `override_dir`, the
// spec's output_dir, $DPGNN_OUTPUT_ROOT/<run_name>, ./runs/<run_name>.
std::filesystem::path ResolveOutputDir(
    const RunSpec& spec, const std::filesystem::path& override_dir,
    std::string_view run_name);

}  // namespace dpgnn

#endif  // DPGNN_RUN_SPEC_H_
