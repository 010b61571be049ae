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

#ifndef DPGNN_GRAPH_BUNDLE_H_
#define DPGNN_GRAPH_BUNDLE_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgnn/graph.h"

namespace dpgnn {

// On-disk graph bundle: a directory holding
//   edges.tsv     one "u<TAB>v" pair per line, decimal node ids
//   features.csv  N rows of d comma-separated decimals, no header
//   labels.tsv    one integer class id per line
//   masks.tsv     one of {train, val, test, none} per line
//   meta.json     {"n_nodes", "n_features", "n_classes", "checksum"}
// where checksum is the hex SHA-256 of the raw bytes of edges.tsv.
inline constexpr std::string_view kEdgesFile = "edges.tsv";
inline constexpr std::string_view kFeaturesFile = "features.csv";
inline constexpr std::string_view kLabelsFile = "labels.tsv";
inline constexpr std::string_view kMasksFile = "masks.tsv";
inline constexpr std::string_view kMetaFile = "meta.json";

// Loads and validates a bundle. Errors name the offending file and line.
absl::StatusOr<Graph> LoadGraphBundle(const std::filesystem::path& dir);

// Writes `graph` as a bundle. Features are written in shortest round-trip
// form so that loading the result reproduces the graph bitwise.
absl::Status WriteGraphBundle(const Graph& graph,
                              const std::filesystem::path& dir);

std::string Sha256Hex(std::string_view data);

absl::StatusOr<std::string> ReadFileToString(const std::filesystem::path& path);
absl::Status WriteStringToFile(const std::filesystem::path& path,
                               std::string_view contents);

}  // namespace dpgnn

#endif  // DPGNN_GRAPH_BUNDLE_H_
