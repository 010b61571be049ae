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

#include "dpgnn/graph.h"

#include <algorithm>
#include <bit>
#include <string>

#include "dpgnn/status.h"
#include "dpgnn/strings.h"

namespace dpgnn {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
    case Split::kNone:
      break;
  }
  return "none";
}

absl::StatusOr<std::vector<Split>> SplitsFromMasks(
    const std::vector<bool>& train, const std::vector<bool>& val,
    const std::vector<bool>& test) {
  if (train.size() != val.size() || train.size() != test.size()) {
    return MakeError(ErrorKind::kCountMismatch, "mask lengths differ");
  }
  std::vector<Split> splits(train.size(), Split::kNone);
  for (size_t i = 0; i < train.size(); ++i) {
    const int count = int{train[i]} + int{val[i]} + int{test[i]};
    if (count > 1) {
      return MakeError(ErrorKind::kOverlappingMasks,
                       StrCat("node ", i, " is in ", count, " masks"));
    }
    if (train[i]) splits[i] = Split::kTrain;
    if (val[i]) splits[i] = Split::kVal;
    if (test[i]) splits[i] = Split::kTest;
  }
  return splits;
}

absl::StatusOr<Graph> Graph::Create(
    int num_classes, const std::vector<std::pair<NodeId, NodeId>>& edges,
    FeatureMatrix features, std::vector<int> labels,
    std::vector<Split> splits) {
  const int64_t n = static_cast<int64_t>(labels.size());
  if (features.rows() != n) {
    return MakeError(
        ErrorKind::kCountMismatch,
        StrCat("feature rows ", features.rows(), " != node count ", n));
  }
  if (static_cast<int64_t>(splits.size()) != n) {
    return MakeError(
        ErrorKind::kCountMismatch,
        StrCat("split entries ", splits.size(), " != node count ", n));
  }
  if (num_classes < 1) {
    return MakeError(ErrorKind::kCountMismatch, "num_classes must be >= 1");
  }
  for (int64_t v = 0; v < n; ++v) {
    if (labels[v] < 0 || labels[v] >= num_classes) {
      return MakeError(ErrorKind::kLabelOutOfRange,
                       StrCat("node ", v, " has label ", labels[v],
                              ", expected [0, ", num_classes, ")"));
    }
  }
  if (!features.allFinite()) {
    return MakeError(ErrorKind::kNonNumericFeature,
                     "features contain non-finite values");
  }

  Graph g;
  g.num_classes_ = num_classes;
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      return MakeError(ErrorKind::kCountMismatch,
                       StrCat("edge (", u, ", ", v,
                              ") references a node outside [0, ", n, ")"));
    }
    if (u == v) {
      ++g.dropped_self_loops_;
      continue;
    }
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  g.offsets_.assign(n + 1, 0);
  g.neighbors_.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++g.offsets_[u + 1];
    g.neighbors_.push_back(v);
  }
  for (int64_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];

  g.features_ = std::move(features);
  g.labels_ = std::move(labels);
  g.splits_ = std::move(splits);
  return g;
}

bool Graph::HasEdge(NodeId u, NodeId v) const {
  std::span<const NodeId> nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<NodeId> Graph::NodesIn(Split split) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < num_nodes(); ++v) {
    if (splits_[v] == split) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> Graph::UndirectedEdges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

absl::StatusOr<Graph> Graph::WithFeatures(FeatureMatrix features) const {
  if (features.rows() != features_.rows() ||
      features.cols() != features_.cols()) {
    return MakeError(ErrorKind::kShapeMismatch,
                     "replacement features must keep the same shape");
  }
  Graph copy = *this;
  copy.features_ = std::move(features);
  return copy;
}

Graph Graph::RowNormalized() const {
  Graph copy = *this;
  for (Eigen::Index r = 0; r < copy.features_.rows(); ++r) {
    const double total = copy.features_.row(r).cwiseAbs().sum();
    if (total > 0.0) copy.features_.row(r) /= total;
  }
  return copy;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_classes_ != b.num_classes_ || a.offsets_ != b.offsets_ ||
      a.neighbors_ != b.neighbors_ || a.labels_ != b.labels_ ||
      a.splits_ != b.splits_ || a.features_.rows() != b.features_.rows() ||
      a.features_.cols() != b.features_.cols()) {
    return false;
  }
  // Bitwise comparison, so -0.0 and 0.0 differ and NaN payloads would matter.
  return std::equal(a.features_.data(), a.features_.data() + a.features_.size(),
                    b.features_.data(), [](double x, double y) {
                      return std::bit_cast<uint64_t>(x) ==
                             std::bit_cast<uint64_t>(y);
                    });
}

int MaxDegree(const Graph& graph) {
  int best = 0;
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    best = std::max(best, graph.degree(v));
  }
  return best;
}

}  // namespace dpgnn
