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

#ifndef DPGNN_TRAINER_H_
#define DPGNN_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgnn/accountant.h"
#include "dpgnn/graph.h"
#include "dpgnn/model.h"
#include "dpgnn/samplers.h"

namespace dpgnn {

struct TrainConfig {
  Architecture arch = Architecture::kGcn;
  int depth = 1;
  int hidden_dim = 256;

  SamplerKind sampler = SamplerKind::kDrw;
  int walk_length = 4;
  int restarts = 1;
  // DRW-D re-partitions when t % resample_every == 0 (t > 0). 0 means never.
  int64_t resample_every = 0;

  int batch_size = 64;
  double learning_rate = 0.01;
  double clip_norm = 1.0;
  double noise_multiplier = 1.0;
  double target_epsilon = 8.0;
  // Mandatory when dp_enabled; there is no default delta.
  std::optional<double> delta;
  int64_t max_iterations = 1000;
  uint64_t seed = 0;
  bool dp_enabled = true;

  bool row_normalize = true;
  // Validation F1 is logged every eval_every iterations (0 disables).
  int64_t eval_every = 50;
  int workers = 1;
};

absl::Status ValidateConfig(const TrainConfig& config, const Graph& graph);

// Sampling-rate bound q for this config's sampler on `graph`.
absl::StatusOr<double> ConfigSamplingRate(const TrainConfig& config,
                                          const Graph& graph);

absl::StatusOr<ModelShape> ConfigShape(const TrainConfig& config,
                                       const Graph& graph);

enum class StopReason { kEpsilonExhausted, kMaxIterations };

std::string_view StopReasonName(StopReason reason);

struct IterationRecord {
  int64_t iteration = 0;
  // Mean loss over the batch members with a training root; 0 if none.
  double mean_loss = 0.0;
  int train_roots = 0;
  // Per-step RDP at `alpha` and the running epsilon after this step. Zero in
  // non-private runs.
  double step_gamma = 0.0;
  double epsilon = 0.0;
  int alpha = 0;
  std::optional<double> f1_val;
};

struct TrainResult {
  ModelParams params;
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::kMaxIterations;
  int64_t iterations = 0;
  double epsilon = 0.0;
  int alpha_star = 0;
  double sampling_rate = 0.0;
  std::optional<RdpAccountant> accountant;
  // Scores of the final iterate.
  SplitScores final_scores;
  // Test score of the iterate with the best logged validation score.
  double best_f1_val = 0.0;
  double f1_test_at_best_val = 0.0;
  int64_t best_val_iteration = 0;
};

struct SweepRow {
  double checkpoint = 0.0;
  double epsilon = 0.0;
  int64_t iteration = 0;
  double f1_val = 0.0;
  double f1_test = 0.0;
};

struct SweepResult {
  TrainResult run;
  std::vector<SweepRow> rows;
};

// DP-SGD over random-walk subgraphs. Before every step the step's RDP cost
// is added tentatively and converted; if epsilon would exceed the target the
// run stops without taking the step.
absl::StatusOr<TrainResult> DpSgdTrain(const TrainConfig& config,
                                       const Graph& graph);

// Non-private baseline: GCN on random-walk subgraph batches, MLP on uniform
// batches of training nodes; no clipping, noise or accounting.
absl::StatusOr<TrainResult> NonDpTrain(const TrainConfig& config,
                                       const Graph& graph);

// One DP run recording val/test F1 at the last iterate whose epsilon does not
// exceed each checkpoint.
absl::StatusOr<SweepResult> EpsilonSweep(
    const TrainConfig& config, const Graph& graph,
    const std::vector<double>& checkpoints);

struct GradientSum {
  std::vector<double> sum;
  double loss_sum = 0.0;
  int train_roots = 0;
};

// Sum over batch members of the (optionally clipped) root-loss gradient.
// Members whose root is not a training node contribute exactly zero. Members
// are reduced in fixed chunks of kSumChunk in batch order, whatever the
// worker count, so the result is bitwise reproducible.
inline constexpr int kSumChunk = 8;

absl::StatusOr<GradientSum> BatchGradientSum(const ModelParams& params,
                                             const Graph& graph,
                                             const Partition& partition,
                                             std::span<const int> members,
                                             std::optional<double> clip_norm,
                                             int workers = 1);

// Quantile of per-subgraph gradient norms at initialization. Development aid
// for picking C; it reads private data and is NOT privacy-accounted.
absl::StatusOr<double> SuggestClipNorm(const TrainConfig& config,
                                       const Graph& graph, double quantile);

namespace internal {

// Knobs of the shared loop. DpSgdTrain turns clip, noise and account on;
// NonDpTrain turns them off and, for the MLP, batches training nodes directly
// instead of random-walk subgraphs.
struct LoopMode {
  bool clip = true;
  bool noise = true;
  bool account = true;
  bool train_node_batches = false;
};

absl::StatusOr<SweepResult> RunTrainingLoop(
    const TrainConfig& config, const Graph& graph, const LoopMode& mode,
    const std::vector<double>& checkpoints);

}  // namespace internal
}  // namespace dpgnn

#endif  // DPGNN_TRAINER_H_
