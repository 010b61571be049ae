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

#ifndef DPGNN_CONVERT_H_
#define DPGNN_CONVERT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "absl/status/statusor.h"
#include "dpgnn/graph.h"

namespace dpgnn {

// Raw dataset adapters that produce a Graph with contiguous node ids.
//
// "edgelist": a directory with
//   edges.txt  two node ids per line (any tokens; tab, space or comma)
//   nodes.csv  id,label,split,f_1,...,f_d  (split in train/val/test/none)
// Node ids are remapped to 0..N-1 in nodes.csv order; labels are arbitrary
// tokens mapped to class ids in sorted order.
//
// "linqs": a directory with one <name>.content file (id, d features, label;
// tab separated) and one <name>.cites file (cited, citing), as distributed
// for Cora and CiteSeer. Citations to unknown ids are dropped. Splits are the
// usual planetoid-style sizes: train_per_class training nodes per class,
// then num_val validation and num_test test nodes, drawn with `seed`.
struct ConvertOptions {
  std::string format;
  uint64_t seed = 0;
  int train_per_class = 20;
  int num_val = 500;
  int num_test = 1000;
};

absl::StatusOr<Graph> ConvertRawDataset(const std::filesystem::path& input,
                                        const ConvertOptions& options);

}  // namespace dpgnn

#endif  // DPGNN_CONVERT_H_
