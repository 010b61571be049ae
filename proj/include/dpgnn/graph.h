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

#ifndef DPGNN_GRAPH_H_
#define DPGNN_GRAPH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace dpgnn {

using NodeId = int32_t;

// Row-major so that a node's feature vector is contiguous.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Split : uint8_t { kNone, kTrain, kVal, kTest };

std::string_view SplitName(Split split);

// Combines three boolean masks into one split per node. Fails with
// OverlappingMasks if a node is in more than one mask.
absl::StatusOr<std::vector<Split>> SplitsFromMasks(
    const std::vector<bool>& train, const std::vector<bool>& val,
    const std::vector<bool>& test);

// Immutable undirected node-classification graph: CSR adjacency (sorted,
// symmetric, no self loops or duplicates), dense features, labels and splits.
class Graph {
 public:
  // Builds a graph from an arbitrary edge list. Edges are symmetrized and
  // deduplicated; self loops are dropped and counted in dropped_self_loops().
  static absl::StatusOr<Graph> Create(
      int num_classes, const std::vector<std::pair<NodeId, NodeId>>& edges,
      FeatureMatrix features, std::vector<int> labels,
      std::vector<Split> splits);

  Graph() = default;

  int num_nodes() const { return static_cast<int>(labels_.size()); }
  int num_features() const { return static_cast<int>(features_.cols()); }
  int num_classes() const { return num_classes_; }
  // Number of undirected edges.
  int64_t num_edges() const {
    return static_cast<int64_t>(neighbors_.size()) / 2;
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v],
            static_cast<size_t>(offsets_[v + 1] - offsets_[v])};
  }
  int degree(NodeId v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  bool HasEdge(NodeId u, NodeId v) const;

  const std::vector<int64_t>& offsets() const { return offsets_; }
  const std::vector<NodeId>& adjacency() const { return neighbors_; }
  const FeatureMatrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(NodeId v) const { return labels_[v]; }
  Split split(NodeId v) const { return splits_[v]; }
  const std::vector<Split>& splits() const { return splits_; }
  std::vector<NodeId> NodesIn(Split split) const;
  int64_t dropped_self_loops() const { return dropped_self_loops_; }

  // Each undirected edge once, as (u, v) with u < v, in CSR order.
  std::vector<std::pair<NodeId, NodeId>> UndirectedEdges() const;

  // Copy of this graph with different features (same structure). Used by the
  // neighboring-graph oracles.
  absl::StatusOr<Graph> WithFeatures(FeatureMatrix features) const;

  // Copy with each feature row scaled to unit L1 norm; all-zero rows stay 0.
  Graph RowNormalized() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  int num_classes_ = 0;
  std::vector<int64_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  FeatureMatrix features_;
  std::vector<int> labels_;
  std::vector<Split> splits_;
  int64_t dropped_self_loops_ = 0;
};

// Largest neighbor count over all nodes; 0 for an edgeless graph.
int MaxDegree(const Graph& graph);

}  // namespace dpgnn

#endif  // DPGNN_GRAPH_H_
