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

#ifndef DPGNN_SAMPLERS_H_
#define DPGNN_SAMPLERS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgnn/graph.h"

namespace dpgnn {

enum class SamplerKind { kDrw, kDrwR, kDrwD };

std::string_view SamplerName(SamplerKind kind);
absl::StatusOr<SamplerKind> ParseSamplerKind(std::string_view name);

// A root plus the nodes reached by its walk(s). nodes[0] is the root. For
// walk r, the nodes it appended are nodes[walk_end[r-1] .. walk_end[r]) with
// walk_end[-1] taken as 1; each walk starts at the root.
struct Subgraph {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::vector<int> walk_end;
  SamplerKind method = SamplerKind::kDrw;
};

// Node-disjoint cover of the graph by subgraphs.
struct Partition {
  std::vector<Subgraph> subgraphs;
  SamplerKind method = SamplerKind::kDrw;
  int walk_length = 0;
  int restarts = 1;
  uint64_t seed = 0;

  int size() const { return static_cast<int>(subgraphs.size()); }
  // Index of the subgraph holding each node.
  std::vector<int> SubgraphOfNode(int num_nodes) const;
};

// Disjoint random walks: repeatedly pick a uniformly random remaining node as
// root and walk up to `walk_length` steps, each step moving to a uniformly
// random not-yet-consumed neighbor; a walk stops early at a dead end.
absl::StatusOr<Partition> DrwPartition(const Graph& graph, int walk_length,
                                       uint64_t seed);

// Same as DrwPartition but each root launches `restarts` walks in sequence;
// later walks see nodes consumed by earlier ones as unavailable. With
// restarts == 1 and the same seed this reproduces DrwPartition exactly.
absl::StatusOr<Partition> DrwRPartition(const Graph& graph, int walk_length,
                                        int restarts, uint64_t seed);

// m distinct subgraph indices drawn uniformly without replacement.
struct Batch {
  std::vector<int> members;
  int64_t iteration = 0;
};

// The draw depends only on (seed, iteration), so batches of different
// iterations are independent and any iteration can be reproduced alone.
absl::StatusOr<Batch> SampleBatch(const Partition& partition, int batch_size,
                                  uint64_t seed, int64_t iteration);

// Smallest number of subgraphs any N-node graph can be split into:
// ceil(N / (L + 1)) for DRW and DRW-D, ceil(N / (1 + R L)) for DRW-R.
int64_t MinSubgraphCount(SamplerKind method, int64_t num_nodes, int walk_length,
                         int restarts);

// Upper bound m / M_min on the probability that a fixed node's subgraph is in
// a batch. Fails with RateExceedsOne when the bound is above 1.
absl::StatusOr<double> SamplingRateBound(SamplerKind method, int64_t num_nodes,
                                         int walk_length, int restarts,
                                         int batch_size);

// Debug export: one {"root", "nodes", "method"} JSON object per line.
std::string PartitionToJsonLines(const Partition& partition);

}  // namespace dpgnn

#endif  // DPGNN_SAMPLERS_H_
