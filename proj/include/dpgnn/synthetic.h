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

#ifndef DPGNN_SYNTHETIC_H_
#define DPGNN_SYNTHETIC_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dpgnn/graph.h"

namespace dpgnn {

// Homophilous planted-partition graph with class-dependent Gaussian features.
// Each node draws `avg_degree / 2` partners; a partner has the same class with
// probability `homophily`, otherwise it is uniform over all nodes. Features
// are `signal` times a per-class +/-1 prototype plus unit Gaussian noise.
struct SyntheticGraphOptions {
  int num_nodes = 1000;
  int num_classes = 7;
  int num_features = 32;
  double avg_degree = 6.0;
  double homophily = 0.8;
  double signal = 0.4;
  // Split fractions; the remainder is left unassigned.
  double train_fraction = 0.5;
  double val_fraction = 0.25;
  double test_fraction = 0.25;
  uint64_t seed = 0;
};

absl::StatusOr<Graph> MakeSyntheticGraph(const SyntheticGraphOptions& options);

}  // namespace dpgnn

#endif  // DPGNN_SYNTHETIC_H_
