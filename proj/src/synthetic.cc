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

#include "dpgnn/synthetic.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "dpgnn/rng.h"
#include "dpgnn/status.h"

namespace dpgnn {

absl::StatusOr<Graph> MakeSyntheticGraph(const SyntheticGraphOptions& options) {
  if (options.num_nodes < 1 || options.num_classes < 1 ||
      options.num_features < 0 || options.avg_degree < 0 ||
      options.homophily < 0 || options.homophily > 1 ||
      options.train_fraction + options.val_fraction + options.test_fraction >
          1.0 + 1e-12) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "invalid synthetic graph options");
  }
  const int n = options.num_nodes;
  const int k = options.num_classes;
  RandomEngine rng = MakeEngine(DeriveSeed(options.seed, "synthetic"));

  std::vector<int> labels(n);
  std::uniform_int_distribution<int> class_dist(0, k - 1);
  for (int& label : labels) label = class_dist(rng);
  std::vector<std::vector<NodeId>> members(k);
  for (NodeId v = 0; v < n; ++v) members[labels[v]].push_back(v);

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<NodeId> any_node(0, n - 1);
  const double per_node = options.avg_degree / 2.0;
  for (NodeId v = 0; v < n; ++v) {
    int draws = static_cast<int>(per_node);
    if (unit(rng) < per_node - draws) ++draws;
    for (int e = 0; e < draws; ++e) {
      NodeId u;
      if (unit(rng) < options.homophily) {
        const std::vector<NodeId>& same = members[labels[v]];
        u = same[std::uniform_int_distribution<size_t>(0,
                                                       same.size() - 1)(rng)];
      } else {
        u = any_node(rng);
      }
      if (u != v) edges.emplace_back(v, u);
    }
  }

  FeatureMatrix prototypes(k, options.num_features);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index i = 0; i < prototypes.size(); ++i) {
    prototypes.data()[i] = coin(rng) ? 1.0 : -1.0;
  }
  FeatureMatrix features(n, options.num_features);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (NodeId v = 0; v < n; ++v) {
    for (int c = 0; c < options.num_features; ++c) {
      features(v, c) = options.signal * prototypes(labels[v], c) + noise(rng);
    }
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Split> splits(n, Split::kNone);
  const int n_train = static_cast<int>(options.train_fraction * n);
  const int n_val = static_cast<int>(options.val_fraction * n);
  const int n_test = std::min(n - n_train - n_val,
                              static_cast<int>(options.test_fraction * n));
  for (int i = 0; i < n_train + n_val + n_test; ++i) {
    splits[order[i]] = i < n_train           ? Split::kTrain
                       : i < n_train + n_val ? Split::kVal
                                             : Split::kTest;
  }
  return Graph::Create(k, edges, std::move(features), std::move(labels),
                       std::move(splits));
}

}  // namespace dpgnn
