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

#include "dpgnn/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "dpgnn/privacy.h"
#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"

namespace dpgnn {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

class Adam {
 public:
  explicit Adam(size_t size) : m_(size, 0.0), v_(size, 0.0) {}

  void Step(std::span<double> params, std::span<const double> grad,
            double learning_rate) {
    ++t_;
    const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
      m_[i] = kAdamBeta1 * m_[i] + (1.0 - kAdamBeta1) * grad[i];
      v_[i] = kAdamBeta2 * v_[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  int64_t t_ = 0;
};

// Each training node becomes its own singleton subgraph.
Partition TrainNodePartition(const Graph& graph) {
  Partition partition;
  partition.walk_length = 0;
  for (NodeId v : graph.NodesIn(Split::kTrain)) {
    Subgraph sub;
    sub.root = v;
    sub.nodes = {v};
    sub.walk_end = {1};
    partition.subgraphs.push_back(std::move(sub));
  }
  return partition;
}

absl::StatusOr<Partition> MakePartition(const TrainConfig& config,
                                        const Graph& graph, uint64_t seed) {
  switch (config.sampler) {
    case SamplerKind::kDrwR:
      return DrwRPartition(graph, config.walk_length, config.restarts, seed);
    case SamplerKind::kDrw:
      return DrwPartition(graph, config.walk_length, seed);
    case SamplerKind::kDrwD: {
      DPGNN_ASSIGN_OR_RETURN(Partition p,
                             DrwPartition(graph, config.walk_length, seed));
      p.method = SamplerKind::kDrwD;
      for (Subgraph& sub : p.subgraphs) sub.method = SamplerKind::kDrwD;
      return p;
    }
  }
  return MakeError(ErrorKind::kConfigInvalid, "unknown sampler");
}

struct ChunkResult {
  std::vector<double> sum;
  std::vector<double> scratch;
  double loss_sum = 0.0;
  int train_roots = 0;
  absl::Status status;
};

void ProcessChunk(const ModelParams& params, const Graph& graph,
                  const Partition& partition, std::span<const int> members,
                  std::optional<double> clip_norm, ChunkResult& out) {
  std::fill(out.sum.begin(), out.sum.end(), 0.0);
  out.loss_sum = 0.0;
  out.train_roots = 0;
  out.status = absl::OkStatus();
  for (int member : members) {
    const Subgraph& sub = partition.subgraphs[member];
    if (graph.split(sub.root) != Split::kTrain) continue;
    const SubgraphView view = MakeSubgraphView(graph, sub.nodes);
    absl::StatusOr<double> loss =
        ComputeLossAndGradInto(params, view, out.scratch);
    if (!loss.ok()) {
      out.status = loss.status();
      return;
    }
    if (clip_norm.has_value()) {
      out.status = ClipInPlace(out.scratch, *clip_norm);
      if (!out.status.ok()) return;
    }
    for (size_t i = 0; i < out.sum.size(); ++i) out.sum[i] += out.scratch[i];
    out.loss_sum += *loss;
    ++out.train_roots;
  }
}

}  // namespace

std::string_view StopReasonName(StopReason reason) {
  return reason == StopReason::kEpsilonExhausted ? "epsilon_exhausted"
                                                 : "max_iterations";
}

absl::StatusOr<ModelShape> ConfigShape(const TrainConfig& config,
                                       const Graph& graph) {
  ModelShape shape{config.arch, config.depth, graph.num_features(),
                   config.depth == 2 ? config.hidden_dim : 0,
                   graph.num_classes()};
  DPGNN_RETURN_IF_ERROR(ValidateShape(shape));
  return shape;
}

absl::StatusOr<double> ConfigSamplingRate(const TrainConfig& config,
                                          const Graph& graph) {
  return SamplingRateBound(config.sampler, graph.num_nodes(),
                           config.walk_length, config.restarts,
                           config.batch_size);
}

absl::Status ValidateConfig(const TrainConfig& config, const Graph& graph) {
  auto invalid = [](std::string_view what) {
    return MakeError(ErrorKind::kConfigInvalid, what);
  };
  DPGNN_RETURN_IF_ERROR(ConfigShape(config, graph).status());
  if (config.walk_length < 1) {
    return MakeError(
        ErrorKind::kInvalidWalkLength,
        StrCat("walk_length must be >= 1, got ", config.walk_length));
  }
  if (config.restarts < 1) {
    return MakeError(ErrorKind::kInvalidRestartCount,
                     StrCat("restarts must be >= 1, got ", config.restarts));
  }
  if (config.sampler == SamplerKind::kDrwD && config.resample_every < 1) {
    return invalid("DRW-D needs resample_every >= 1");
  }
  if (config.resample_every < 0) return invalid("resample_every must be >= 0");
  if (config.batch_size < 1) return invalid("batch_size must be >= 1");
  if (!(config.learning_rate >= 0.0)) {
    return invalid("learning_rate must be >= 0");
  }
  if (config.max_iterations < 0) return invalid("max_iterations must be >= 0");
  if (config.eval_every < 0) return invalid("eval_every must be >= 0");
  if (config.workers < 1) return invalid("workers must be >= 1");
  if (graph.NodesIn(Split::kTrain).empty()) {
    return MakeError(ErrorKind::kEmptyMask, "graph has no training nodes");
  }
  if (config.dp_enabled) {
    if (!(config.target_epsilon > 0.0)) {
      return invalid("target_epsilon must be > 0");
    }
    if (!config.delta.has_value()) {
      return invalid("delta is required for private training");
    }
    if (!(*config.delta > 0.0 && *config.delta < 1.0)) {
      return MakeError(ErrorKind::kInvalidDelta,
                       StrCat("delta must be in (0, 1), got ", *config.delta));
    }
    DPGNN_RETURN_IF_ERROR(
        NoiseConfig::Create(config.clip_norm, config.noise_multiplier)
            .status());
    DPGNN_RETURN_IF_ERROR(ConfigSamplingRate(config, graph).status());
  }
  return absl::OkStatus();
}

absl::StatusOr<GradientSum> BatchGradientSum(const ModelParams& params,
                                             const Graph& graph,
                                             const Partition& partition,
                                             std::span<const int> members,
                                             std::optional<double> clip_norm,
                                             int workers) {
  const size_t num_chunks = (members.size() + kSumChunk - 1) / kSumChunk;
  std::vector<ChunkResult> chunks(num_chunks);
  for (ChunkResult& c : chunks) {
    c.sum.assign(params.size(), 0.0);
    c.scratch.assign(params.size(), 0.0);
  }
  auto run = [&](size_t c) {
    const size_t begin = c * kSumChunk;
    const size_t count = std::min<size_t>(kSumChunk, members.size() - begin);
    ProcessChunk(params, graph, partition, members.subspan(begin, count),
                 clip_norm, chunks[c]);
  };
  const size_t threads = std::min<size_t>(std::max(workers, 1), num_chunks);
  if (threads <= 1) {
    for (size_t c = 0; c < num_chunks; ++c) run(c);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (size_t c = w; c < num_chunks; c += threads) run(c);
      });
    }
  }

  GradientSum out;
  out.sum.assign(params.size(), 0.0);
  for (const ChunkResult& c : chunks) {
    if (!c.status.ok()) return c.status;
    for (size_t i = 0; i < out.sum.size(); ++i) out.sum[i] += c.sum[i];
    out.loss_sum += c.loss_sum;
    out.train_roots += c.train_roots;
  }
  return out;
}

absl::StatusOr<double> SuggestClipNorm(const TrainConfig& config,
                                       const Graph& graph, double quantile) {
  if (!(quantile >= 0.0 && quantile <= 1.0)) {
    return MakeError(ErrorKind::kConfigInvalid, "quantile must be in [0, 1]");
  }
  const Graph g = config.row_normalize ? graph.RowNormalized() : graph;
  DPGNN_ASSIGN_OR_RETURN(ModelShape shape, ConfigShape(config, g));
  DPGNN_ASSIGN_OR_RETURN(
      ModelParams params,
      ModelParams::GlorotUniform(shape, DeriveSeed(config.seed, kInitStream)));
  DPGNN_ASSIGN_OR_RETURN(
      Partition partition,
      MakePartition(
          config, g,
          DeriveSeed(DeriveSeed(config.seed, kPartitionStream), uint64_t{0})));
  std::vector<double> norms;
  for (const Subgraph& sub : partition.subgraphs) {
    if (g.split(sub.root) != Split::kTrain) continue;
    DPGNN_ASSIGN_OR_RETURN(
        LossAndGrad lg,
        ComputeLossAndGrad(params, MakeSubgraphView(g, sub.nodes)));
    double sq = 0.0;
    for (double x : lg.grad) sq += x * x;
    norms.push_back(std::sqrt(sq));
  }
  if (norms.empty()) {
    return MakeError(ErrorKind::kEmptyMask, "no training-root subgraphs");
  }
  std::sort(norms.begin(), norms.end());
  const size_t idx = std::min(
      norms.size() - 1,
      static_cast<size_t>(std::floor(quantile * (norms.size() - 1) + 0.5)));
  return norms[idx];
}

namespace internal {

absl::StatusOr<SweepResult> RunTrainingLoop(
    const TrainConfig& config, const Graph& input_graph, const LoopMode& mode,
    const std::vector<double>& checkpoints) {
  DPGNN_RETURN_IF_ERROR(ValidateConfig(config, input_graph));
  const Graph graph =
      config.row_normalize ? input_graph.RowNormalized() : input_graph;
  DPGNN_ASSIGN_OR_RETURN(ModelShape shape, ConfigShape(config, graph));

  const uint64_t partition_seed = DeriveSeed(config.seed, kPartitionStream);
  const uint64_t batch_seed = DeriveSeed(config.seed, kBatchStream);
  RandomEngine noise_rng = MakeEngine(DeriveSeed(config.seed, kNoiseStream));

  SweepResult out;
  TrainResult& result = out.run;
  DPGNN_ASSIGN_OR_RETURN(
      result.params,
      ModelParams::GlorotUniform(shape, DeriveSeed(config.seed, kInitStream)));

  uint64_t partitions_drawn = 0;
  Partition partition;
  if (mode.train_node_batches) {
    partition = TrainNodePartition(graph);
  } else {
    DPGNN_ASSIGN_OR_RETURN(
        partition,
        MakePartition(config, graph,
                      DeriveSeed(partition_seed, partitions_drawn++)));
  }
  if (config.batch_size > partition.size()) {
    return MakeError(ErrorKind::kBatchTooLarge,
                     StrCat("batch size ", config.batch_size, " exceeds ",
                            partition.size(), " available subgraphs"));
  }

  std::optional<double> clip;
  double sigma = 0.0;
  std::vector<double> step_cost;
  if (mode.clip || mode.noise || mode.account) {
    DPGNN_ASSIGN_OR_RETURN(
        NoiseConfig noise,
        NoiseConfig::Create(config.clip_norm, config.noise_multiplier));
    if (mode.clip) clip = noise.clip_norm();
    if (mode.noise) sigma = noise.sigma();
    if (mode.account) {
      DPGNN_ASSIGN_OR_RETURN(result.sampling_rate,
                             ConfigSamplingRate(config, graph));
      DPGNN_ASSIGN_OR_RETURN(result.accountant,
                             RdpAccountant::Create(*config.delta));
      DPGNN_ASSIGN_OR_RETURN(
          step_cost,
          result.accountant->StepCost(result.sampling_rate, noise.sensitivity(),
                                      noise.sigma()));
    }
  }
  // Before the first step nothing data-dependent has been released, so the
  // run reports epsilon 0 rather than the conversion of an all-zero budget.

  std::vector<double> pending(checkpoints.begin(), checkpoints.end());
  auto record_checkpoints = [&](double next_epsilon,
                                int64_t iteration) -> absl::Status {
    while (!pending.empty() && next_epsilon > pending.front()) {
      DPGNN_ASSIGN_OR_RETURN(SplitScores scores,
                             EvaluateSplits(result.params, graph));
      out.rows.push_back({pending.front(), result.epsilon, iteration,
                          scores.val, scores.test});
      pending.erase(pending.begin());
    }
    return absl::OkStatus();
  };

  Adam optimizer(result.params.size());
  result.best_f1_val = -1.0;
  int64_t t = 0;
  for (; t < config.max_iterations; ++t) {
    if (!mode.train_node_batches && config.sampler == SamplerKind::kDrwD &&
        t > 0 && t % config.resample_every == 0) {
      DPGNN_ASSIGN_OR_RETURN(
          partition,
          MakePartition(config, graph,
                        DeriveSeed(partition_seed, partitions_drawn++)));
    }
    RdpAccountant::Epsilon next{};
    if (mode.account) {
      DPGNN_ASSIGN_OR_RETURN(next, result.accountant->EpsilonAfter(step_cost));
      DPGNN_RETURN_IF_ERROR(record_checkpoints(next.epsilon, t));
      if (next.epsilon > config.target_epsilon) {
        result.stop_reason = StopReason::kEpsilonExhausted;
        break;
      }
    }

    DPGNN_ASSIGN_OR_RETURN(
        Batch batch, SampleBatch(partition, config.batch_size, batch_seed, t));
    DPGNN_ASSIGN_OR_RETURN(
        GradientSum grads,
        BatchGradientSum(result.params, graph, partition, batch.members, clip,
                         config.workers));
    DPGNN_RETURN_IF_ERROR(AddNoiseAndAverage(
        grads.sum, static_cast<int>(batch.members.size()), sigma, noise_rng));
    optimizer.Step(result.params.mutable_flat(), grads.sum,
                   config.learning_rate);

    IterationRecord record;
    record.iteration = t;
    record.train_roots = grads.train_roots;
    record.mean_loss =
        grads.train_roots > 0 ? grads.loss_sum / grads.train_roots : 0.0;
    if (mode.account) {
      DPGNN_RETURN_IF_ERROR(result.accountant->AccumulateCost(step_cost));
      result.epsilon = next.epsilon;
      result.alpha_star = next.order;
      const auto& orders = result.accountant->orders();
      const size_t idx =
          std::find(orders.begin(), orders.end(), next.order) - orders.begin();
      record.step_gamma = step_cost[idx];
      record.epsilon = next.epsilon;
      record.alpha = next.order;
    }
    if (config.eval_every > 0 && (t + 1) % config.eval_every == 0) {
      DPGNN_ASSIGN_OR_RETURN(SplitScores scores,
                             EvaluateSplits(result.params, graph));
      record.f1_val = scores.val;
      if (scores.val > result.best_f1_val) {
        result.best_f1_val = scores.val;
        result.f1_test_at_best_val = scores.test;
        result.best_val_iteration = t + 1;
      }
    }
    result.records.push_back(record);
  }
  result.iterations = t;
  if (t == config.max_iterations)
    result.stop_reason = StopReason::kMaxIterations;

  DPGNN_RETURN_IF_ERROR(
      record_checkpoints(std::numeric_limits<double>::infinity(), t));
  DPGNN_ASSIGN_OR_RETURN(result.final_scores,
                         EvaluateSplits(result.params, graph));
  if (result.final_scores.val > result.best_f1_val) {
    result.best_f1_val = result.final_scores.val;
    result.f1_test_at_best_val = result.final_scores.test;
    result.best_val_iteration = t;
  }
  return out;
}

}  // namespace internal

absl::StatusOr<TrainResult> DpSgdTrain(const TrainConfig& config,
                                       const Graph& graph) {
  if (!config.dp_enabled) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "DpSgdTrain requires dp_enabled");
  }
  absl::StatusOr<SweepResult> out =
      internal::RunTrainingLoop(config, graph, internal::LoopMode{}, {});
  if (!out.ok()) return out.status();
  return std::move(out->run);
}

absl::StatusOr<TrainResult> NonDpTrain(const TrainConfig& config,
                                       const Graph& graph) {
  if (config.dp_enabled) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "NonDpTrain requires dp_enabled = false");
  }
  internal::LoopMode mode{
      .clip = false,
      .noise = false,
      .account = false,
      .train_node_batches = config.arch == Architecture::kMlp};
  absl::StatusOr<SweepResult> out =
      internal::RunTrainingLoop(config, graph, mode, {});
  if (!out.ok()) return out.status();
  return std::move(out->run);
}

absl::StatusOr<SweepResult> EpsilonSweep(
    const TrainConfig& config, const Graph& graph,
    const std::vector<double>& checkpoints) {
  if (!config.dp_enabled) {
    return MakeError(ErrorKind::kConfigInvalid, "sweep requires dp_enabled");
  }
  if (checkpoints.empty()) {
    return MakeError(ErrorKind::kConfigInvalid, "no checkpoints given");
  }
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0) || checkpoints[i] > config.target_epsilon ||
        (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))) {
      return MakeError(ErrorKind::kConfigInvalid,
                       "checkpoints must be positive, strictly ascending and "
                       "<= target_epsilon");
    }
  }
  return internal::RunTrainingLoop(config, graph, internal::LoopMode{},
                                   checkpoints);
}

}  // namespace dpgnn
