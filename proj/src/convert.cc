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

#include "dpgnn/convert.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "dpgnn/graph_bundle.h"
#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"

namespace dpgnn {
namespace {

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::string_view line : SplitOn(text, '\n')) {
    line = StripWhitespace(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool ParseDouble(std::string_view token, double& out) {
  token = StripWhitespace(token);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

absl::Status Malformed(const std::filesystem::path& file, size_t line,
                       std::string_view what) {
  return MakeError(ErrorKind::kMalformedInput,
                   StrCat(file.filename().string(), ":", line, ": ", what));
}

absl::StatusOr<Graph> ConvertEdgeList(const std::filesystem::path& dir) {
  const std::filesystem::path nodes_path = dir / "nodes.csv";
  const std::filesystem::path edges_path = dir / "edges.txt";
  DPGNN_ASSIGN_OR_RETURN(std::string nodes_text, ReadFileToString(nodes_path));
  DPGNN_ASSIGN_OR_RETURN(std::string edges_text, ReadFileToString(edges_path));

  const std::vector<std::string_view> rows = Lines(nodes_text);
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> raw_labels;
  std::vector<Split> splits;
  std::vector<std::vector<double>> feature_rows;
  int64_t d = -1;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string_view> cols = SplitOn(rows[i], ',');
    if (cols.size() < 3) {
      return Malformed(nodes_path, i + 1, "expected id,label,split,features");
    }
    const std::string id(StripWhitespace(cols[0]));
    if (!ids.emplace(id, static_cast<NodeId>(ids.size())).second) {
      return Malformed(nodes_path, i + 1, StrCat("duplicate id ", id));
    }
    raw_labels.emplace_back(StripWhitespace(cols[1]));
    const std::string_view split = StripWhitespace(cols[2]);
    if (split == "train") {
      splits.push_back(Split::kTrain);
    } else if (split == "val") {
      splits.push_back(Split::kVal);
    } else if (split == "test") {
      splits.push_back(Split::kTest);
    } else if (split == "none" || split.empty()) {
      splits.push_back(Split::kNone);
    } else {
      return Malformed(nodes_path, i + 1,
                       StrCat("unknown split '", split, "'"));
    }
    std::vector<double> row;
    for (size_t c = 3; c < cols.size(); ++c) {
      double value;
      if (!ParseDouble(cols[c], value)) {
        return Malformed(nodes_path, i + 1,
                         StrCat("non-numeric feature '", cols[c], "'"));
      }
      row.push_back(value);
    }
    if (d < 0) d = static_cast<int64_t>(row.size());
    if (static_cast<int64_t>(row.size()) != d) {
      return Malformed(nodes_path, i + 1, "inconsistent feature width");
    }
    feature_rows.push_back(std::move(row));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  const std::vector<std::string_view> edge_lines = Lines(edges_text);
  for (size_t i = 0; i < edge_lines.size(); ++i) {
    std::vector<std::string_view> parts = SplitOnAny(edge_lines[i], "\t ,");
    if (parts.size() != 2)
      return Malformed(edges_path, i + 1, "expected 2 ids");
    auto u = ids.find(std::string(parts[0]));
    auto v = ids.find(std::string(parts[1]));
    if (u == ids.end() || v == ids.end()) {
      return Malformed(edges_path, i + 1, "edge references unknown node id");
    }
    edges.emplace_back(u->second, v->second);
  }

  std::map<std::string, int> classes;
  for (const std::string& label : raw_labels) classes.emplace(label, 0);
  int next = 0;
  for (auto& [name, id] : classes) id = next++;
  std::vector<int> labels;
  labels.reserve(raw_labels.size());
  for (const std::string& label : raw_labels) labels.push_back(classes[label]);

  FeatureMatrix features(static_cast<Eigen::Index>(feature_rows.size()),
                         std::max<int64_t>(d, 0));
  for (size_t r = 0; r < feature_rows.size(); ++r) {
    for (int64_t c = 0; c < d; ++c) features(r, c) = feature_rows[r][c];
  }
  return Graph::Create(std::max(1, next), edges, std::move(features),
                       std::move(labels), std::move(splits));
}

absl::StatusOr<std::filesystem::path> FindOne(const std::filesystem::path& dir,
                                              std::string_view extension) {
  std::vector<std::filesystem::path> found;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == extension) found.push_back(entry.path());
  }
  if (found.size() != 1) {
    return MakeError(ErrorKind::kMissingFile,
                     StrCat("expected exactly one *", extension, " file in ",
                            dir.string(), ", found ", found.size()));
  }
  return found.front();
}

absl::StatusOr<Graph> ConvertLinqs(const std::filesystem::path& dir,
                                   const ConvertOptions& options) {
  DPGNN_ASSIGN_OR_RETURN(std::filesystem::path content_path,
                         FindOne(dir, ".content"));
  DPGNN_ASSIGN_OR_RETURN(std::filesystem::path cites_path,
                         FindOne(dir, ".cites"));
  DPGNN_ASSIGN_OR_RETURN(std::string content, ReadFileToString(content_path));
  DPGNN_ASSIGN_OR_RETURN(std::string cites, ReadFileToString(cites_path));

  const std::vector<std::string_view> rows = Lines(content);
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> raw_labels;
  std::vector<std::vector<double>> feature_rows;
  int64_t d = -1;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string_view> cols = SplitOnAny(rows[i], "\t ");
    if (cols.size() < 2)
      return Malformed(content_path, i + 1, "too few columns");
    if (!ids.emplace(std::string(cols.front()), static_cast<NodeId>(ids.size()))
             .second) {
      return Malformed(content_path, i + 1, "duplicate paper id");
    }
    raw_labels.emplace_back(cols.back());
    std::vector<double> row;
    for (size_t c = 1; c + 1 < cols.size(); ++c) {
      double value;
      if (!ParseDouble(cols[c], value)) {
        return Malformed(content_path, i + 1, "non-numeric feature");
      }
      row.push_back(value);
    }
    if (d < 0) d = static_cast<int64_t>(row.size());
    if (static_cast<int64_t>(row.size()) != d) {
      return Malformed(content_path, i + 1, "inconsistent feature width");
    }
    feature_rows.push_back(std::move(row));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  int64_t dangling = 0;
  const std::vector<std::string_view> cite_lines = Lines(cites);
  for (size_t i = 0; i < cite_lines.size(); ++i) {
    std::vector<std::string_view> parts = SplitOnAny(cite_lines[i], "\t ");
    if (parts.size() != 2)
      return Malformed(cites_path, i + 1, "expected 2 ids");
    auto u = ids.find(std::string(parts[0]));
    auto v = ids.find(std::string(parts[1]));
    if (u == ids.end() || v == ids.end()) {
      ++dangling;
      continue;
    }
    edges.emplace_back(u->second, v->second);
  }
  if (dangling > 0) {
    std::clog << "dpgnn: " << cites_path.filename().string() << ": dropped "
              << dangling << " citation(s) to unknown ids\n";
  }

  std::map<std::string, int> classes;
  for (const std::string& label : raw_labels) classes.emplace(label, 0);
  int next = 0;
  for (auto& [name, id] : classes) id = next++;
  const int n = static_cast<int>(raw_labels.size());
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[v] = classes[raw_labels[v]];

  RandomEngine rng = MakeEngine(DeriveSeed(options.seed, "split"));
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Split> splits(n, Split::kNone);
  std::vector<int> per_class(next, 0);
  std::vector<NodeId> rest;
  for (NodeId v : order) {
    if (per_class[labels[v]] < options.train_per_class) {
      ++per_class[labels[v]];
      splits[v] = Split::kTrain;
    } else {
      rest.push_back(v);
    }
  }
  size_t cursor = 0;
  for (int i = 0; i < options.num_val && cursor < rest.size(); ++i) {
    splits[rest[cursor++]] = Split::kVal;
  }
  for (int i = 0; i < options.num_test && cursor < rest.size(); ++i) {
    splits[rest[cursor++]] = Split::kTest;
  }

  FeatureMatrix features(n, std::max<int64_t>(d, 0));
  for (int r = 0; r < n; ++r) {
    for (int64_t c = 0; c < d; ++c) features(r, c) = feature_rows[r][c];
  }
  return Graph::Create(std::max(1, next), edges, std::move(features),
                       std::move(labels), std::move(splits));
}

}  // namespace

absl::StatusOr<Graph> ConvertRawDataset(const std::filesystem::path& input,
                                        const ConvertOptions& options) {
  if (!std::filesystem::is_directory(input)) {
    return MakeError(ErrorKind::kMissingFile,
                     StrCat(input.string(), " is not a directory"));
  }
  if (options.format == "edgelist") return ConvertEdgeList(input);
  if (options.format == "linqs" || options.format == "planetoid") {
    return ConvertLinqs(input, options);
  }
  return MakeError(ErrorKind::kUnknownFormat,
                   StrCat("unknown format '", options.format,
                          "' (expected edgelist or linqs)"));
}

}  // namespace dpgnn
