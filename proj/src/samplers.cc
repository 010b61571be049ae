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

#include "dpgnn/samplers.h"

#include <algorithm>
#include <numeric>

#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "json.hpp"

namespace dpgnn {
namespace {

// Remaining-node set with O(1) uniform draw and removal.
class RemainingNodes {
 public:
  explicit RemainingNodes(int n) : nodes_(n), position_(n) {
    std::iota(nodes_.begin(), nodes_.end(), 0);
    std::iota(position_.begin(), position_.end(), 0);
  }

  bool empty() const { return nodes_.empty(); }
  bool contains(NodeId v) const { return position_[v] >= 0; }

  NodeId Draw(RandomEngine& rng) const {
    std::uniform_int_distribution<size_t> pick(0, nodes_.size() - 1);
    return nodes_[pick(rng)];
  }

  void Remove(NodeId v) {
    const int pos = position_[v];
    const NodeId last = nodes_.back();
    nodes_[pos] = last;
    position_[last] = pos;
    nodes_.pop_back();
    position_[v] = -1;
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<int> position_;
};

Partition RandomWalkPartition(const Graph& graph, int walk_length, int restarts,
                              uint64_t seed, SamplerKind tag) {
  Partition partition;
  partition.method = tag;
  partition.walk_length = walk_length;
  partition.restarts = restarts;
  partition.seed = seed;

  RandomEngine rng = MakeEngine(seed);
  RemainingNodes remaining(graph.num_nodes());
  std::vector<NodeId> valid;
  while (!remaining.empty()) {
    Subgraph sub;
    sub.method = tag;
    sub.root = remaining.Draw(rng);
    remaining.Remove(sub.root);
    sub.nodes.push_back(sub.root);
    for (int r = 0; r < restarts; ++r) {
      NodeId current = sub.root;
      for (int step = 0; step < walk_length; ++step) {
        valid.clear();
        for (NodeId u : graph.neighbors(current)) {
          if (remaining.contains(u)) valid.push_back(u);
        }
        if (valid.empty()) break;
        std::uniform_int_distribution<size_t> pick(0, valid.size() - 1);
        current = valid[pick(rng)];
        remaining.Remove(current);
        sub.nodes.push_back(current);
      }
      sub.walk_end.push_back(static_cast<int>(sub.nodes.size()));
    }
    partition.subgraphs.push_back(std::move(sub));
  }
  return partition;
}

}  // namespace

std::string_view SamplerName(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kDrw:
      return "DRW";
    case SamplerKind::kDrwR:
      return "DRW-R";
    case SamplerKind::kDrwD:
      return "DRW-D";
  }
  return "DRW";
}

absl::StatusOr<SamplerKind> ParseSamplerKind(std::string_view name) {
  if (name == "DRW") return SamplerKind::kDrw;
  if (name == "DRW-R") return SamplerKind::kDrwR;
  if (name == "DRW-D") return SamplerKind::kDrwD;
  return MakeError(
      ErrorKind::kConfigInvalid,
      StrCat("unknown sampler '", name, "' (expected DRW, DRW-R or DRW-D)"));
}

std::vector<int> Partition::SubgraphOfNode(int num_nodes) const {
  std::vector<int> owner(num_nodes, -1);
  for (int s = 0; s < size(); ++s) {
    for (NodeId v : subgraphs[s].nodes) owner[v] = s;
  }
  return owner;
}

absl::StatusOr<Partition> DrwPartition(const Graph& graph, int walk_length,
                                       uint64_t seed) {
  if (walk_length < 1) {
    return MakeError(ErrorKind::kInvalidWalkLength,
                     StrCat("walk length must be >= 1, got ", walk_length));
  }
  return RandomWalkPartition(graph, walk_length, 1, seed, SamplerKind::kDrw);
}

absl::StatusOr<Partition> DrwRPartition(const Graph& graph, int walk_length,
                                        int restarts, uint64_t seed) {
  if (walk_length < 1) {
    return MakeError(ErrorKind::kInvalidWalkLength,
                     StrCat("walk length must be >= 1, got ", walk_length));
  }
  if (restarts < 1) {
    return MakeError(ErrorKind::kInvalidRestartCount,
                     StrCat("restarts must be >= 1, got ", restarts));
  }
  return RandomWalkPartition(graph, walk_length, restarts, seed,
                             SamplerKind::kDrwR);
}

absl::StatusOr<Batch> SampleBatch(const Partition& partition, int batch_size,
                                  uint64_t seed, int64_t iteration) {
  if (batch_size < 1 || batch_size > partition.size()) {
    return MakeError(ErrorKind::kBatchTooLarge,
                     StrCat("batch size ", batch_size, " not in [1, ",
                            partition.size(), "]"));
  }
  Batch batch;
  batch.iteration = iteration;
  batch.members.reserve(batch_size);
  std::vector<int> all(partition.size());
  std::iota(all.begin(), all.end(), 0);
  RandomEngine rng =
      MakeEngine(DeriveSeed(seed, static_cast<uint64_t>(iteration)));
  std::sample(all.begin(), all.end(), std::back_inserter(batch.members),
              batch_size, rng);
  return batch;
}

int64_t MinSubgraphCount(SamplerKind method, int64_t num_nodes, int walk_length,
                         int restarts) {
  const int64_t max_size = method == SamplerKind::kDrwR
                               ? 1 + int64_t{restarts} * walk_length
                               : int64_t{walk_length} + 1;
  return (num_nodes + max_size - 1) / max_size;
}

absl::StatusOr<double> SamplingRateBound(SamplerKind method, int64_t num_nodes,
                                         int walk_length, int restarts,
                                         int batch_size) {
  if (walk_length < 1) {
    return MakeError(ErrorKind::kInvalidWalkLength, "walk length must be >= 1");
  }
  if (method == SamplerKind::kDrwR && restarts < 1) {
    return MakeError(ErrorKind::kInvalidRestartCount, "restarts must be >= 1");
  }
  if (num_nodes < 1 || batch_size < 1) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "node count and batch size must be positive");
  }
  const int64_t m_min =
      MinSubgraphCount(method, num_nodes, walk_length, restarts);
  if (batch_size > m_min) {
    return MakeError(
        ErrorKind::kRateExceedsOne,
        StrCat("sampling rate bound ", batch_size, "/", m_min, " exceeds 1"));
  }
  return static_cast<double>(batch_size) / static_cast<double>(m_min);
}

std::string PartitionToJsonLines(const Partition& partition) {
  std::string out;
  for (const Subgraph& sub : partition.subgraphs) {
    nlohmann::json line = {{"root", sub.root},
                           {"nodes", sub.nodes},
                           {"method", SamplerName(sub.method)}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dpgnn
