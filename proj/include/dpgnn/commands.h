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

// Command implementations behind the dpgnn binary. Each writes its artifacts
// and returns a machine-readable result; the binary only parses flags.
#ifndef DPGNN_COMMANDS_H_
#define DPGNN_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgnn/convert.h"
#include "dpgnn/synthetic.h"
#include "dpgnn/verify.h"

namespace dpgnn {

// Artifact names inside a run directory.
inline constexpr char kSummaryFile[] = "summary.json";
inline constexpr char kLogFile[] = "log.jsonl";
inline constexpr char kCheckpointFile[] = "checkpoint.json";
inline constexpr char kAccountantFile[] = "accountant.json";
inline constexpr char kCurveFile[] = "curve.csv";
inline constexpr char kResolvedSpecFile[] = "spec.json";

// Exit code for an error: 10 + ErrorKind for library errors, 2 otherwise.
int ExitCodeFor(const absl::Status& status);

// {"error": {"kind", "message", "exit_code"}}.
std::string ErrorJson(const absl::Status& status);

struct BundleStats {
  int num_nodes = 0;
  int num_features = 0;
  int num_classes = 0;
  int max_degree = 0;
  int64_t num_edges = 0;
  int train = 0;
  int val = 0;
  int test = 0;

  std::string ToJson() const;
};

BundleStats StatsOf(const Graph& graph);

// Converts a raw dataset into a bundle at `output_dir`.
absl::StatusOr<BundleStats> CmdConvert(const std::filesystem::path& input,
                                       const std::filesystem::path& output_dir,
                                       const ConvertOptions& options);

// Writes a synthetic graph bundle at `output_dir`.
absl::StatusOr<BundleStats> CmdGenerate(
    const SyntheticGraphOptions& options,
    const std::filesystem::path& output_dir);

// Command-line values that take precedence over the run spec.
struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<double> target_epsilon;
  std::optional<int> workers;
  std::filesystem::path output_dir;
};

struct RunArtifacts {
  std::filesystem::path output_dir;
  // Contents of summary.json.
  std::string summary;
};

// Trains per the spec and writes summary.json, log.jsonl, checkpoint.json,
// spec.json and, for private runs, accountant.json.
absl::StatusOr<RunArtifacts> CmdTrain(const std::filesystem::path& spec_path,
                                      const RunOverrides& overrides);

// One private run recording F1 at each epsilon checkpoint; writes curve.csv
// (epsilon, f1_val, f1_test, iteration) alongside the CmdTrain artifacts.
// Without checkpoints in the spec, 1, 2, ... up to the target are used.
absl::StatusOr<RunArtifacts> CmdSweep(const std::filesystem::path& spec_path,
                                      const RunOverrides& overrides);

// Runs the selected oracles on a bundle.
absl::StatusOr<VerifyReport> CmdVerify(const std::filesystem::path& bundle,
                                       OracleTag tag,
                                       const VerifyOptions& options);

}  // namespace dpgnn

#endif  // DPGNN_COMMANDS_H_
