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

#include "dpgnn/graph_bundle.h"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "json.hpp"

namespace dpgnn {
namespace {

using ::nlohmann::json;

std::string Where(std::string_view file, size_t line) {
  return StrCat(file, ":", line);
}

// Splits into lines, dropping a single trailing empty line and any '\r'.
std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines = SplitOn(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string_view& line : lines) {
    line = (line.ends_with('\r') ? line.substr(0, line.size() - 1) : line);
  }
  return lines;
}

template <typename T>
bool ParseNumber(std::string_view token, T& out) {
  token = StripWhitespace(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

absl::StatusOr<std::string> ReadBundleFile(const std::filesystem::path& dir,
                                           std::string_view name) {
  const std::filesystem::path path = dir / name;
  if (!std::filesystem::is_regular_file(path)) {
    return MakeError(ErrorKind::kMissingFile,
                     StrCat(name, ": not found in ", dir.string()));
  }
  return ReadFileToString(path);
}

void AppendDouble(std::string& out, double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), ptr);
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
             nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

absl::StatusOr<std::string> ReadFileToString(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kMissingFile,
                     StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteStringToFile(const std::filesystem::path& path,
                               std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIoError,
                     StrCat("cannot write ", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    return MakeError(ErrorKind::kIoError,
                     StrCat("short write to ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<Graph> LoadGraphBundle(const std::filesystem::path& dir) {
  DPGNN_ASSIGN_OR_RETURN(std::string meta_text, ReadBundleFile(dir, kMetaFile));
  DPGNN_ASSIGN_OR_RETURN(std::string edges_text,
                         ReadBundleFile(dir, kEdgesFile));
  DPGNN_ASSIGN_OR_RETURN(std::string features_text,
                         ReadBundleFile(dir, kFeaturesFile));
  DPGNN_ASSIGN_OR_RETURN(std::string labels_text,
                         ReadBundleFile(dir, kLabelsFile));
  DPGNN_ASSIGN_OR_RETURN(std::string masks_text,
                         ReadBundleFile(dir, kMasksFile));

  json meta = json::parse(meta_text, nullptr, /*allow_exceptions=*/false);
  if (meta.is_discarded() || !meta.is_object()) {
    return MakeError(ErrorKind::kMalformedInput,
                     StrCat(kMetaFile, ": not a JSON object"));
  }
  for (const char* key : {"n_nodes", "n_features", "n_classes"}) {
    if (!meta.contains(key) || !meta[key].is_number_integer() ||
        meta[key].get<int64_t>() < 0) {
      return MakeError(ErrorKind::kMalformedInput,
                       StrCat(kMetaFile, ": missing or invalid '", key, "'"));
    }
  }
  if (!meta.contains("checksum") || !meta["checksum"].is_string()) {
    return MakeError(ErrorKind::kMalformedInput,
                     StrCat(kMetaFile, ": missing 'checksum'"));
  }
  const int64_t n = meta["n_nodes"].get<int64_t>();
  const int64_t d = meta["n_features"].get<int64_t>();
  const int n_classes = meta["n_classes"].get<int>();
  // Meta-declared counts, not raw text, drive the structural checks below.
  const std::string actual_checksum = Sha256Hex(edges_text);
  if (meta["checksum"].get<std::string>() != actual_checksum) {
    return MakeError(ErrorKind::kChecksumMismatch,
                     StrCat(kMetaFile, ": checksum does not match ", kEdgesFile,
                            " (actual ", actual_checksum, ")"));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  {
    const std::vector<std::string_view> lines = Lines(edges_text);
    edges.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
      if (StripWhitespace(lines[i]).empty()) continue;
      std::vector<std::string_view> parts = SplitOnAny(lines[i], "\t ");
      int64_t u = 0, v = 0;
      if (parts.size() != 2 || !ParseNumber(parts[0], u) ||
          !ParseNumber(parts[1], v)) {
        return MakeError(ErrorKind::kMalformedInput,
                         StrCat(Where(kEdgesFile, i + 1),
                                ": expected 'u<TAB>v', got '", lines[i], "'"));
      }
      if (u < 0 || v < 0 || u >= n || v >= n) {
        return MakeError(
            ErrorKind::kCountMismatch,
            StrCat(Where(kEdgesFile, i + 1), ": node id ",
                   std::max(u, v) >= n ? std::max(u, v) : std::min(u, v),
                   " outside [0, ", n, ")"));
      }
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }

  FeatureMatrix features(n, d);
  {
    const std::vector<std::string_view> lines = Lines(features_text);
    if (static_cast<int64_t>(lines.size()) != n) {
      return MakeError(ErrorKind::kCountMismatch,
                       StrCat(kFeaturesFile, ": ", lines.size(),
                              " rows, meta declares ", n));
    }
    for (int64_t r = 0; r < n; ++r) {
      if (d == 0 && StripWhitespace(lines[r]).empty()) continue;
      int64_t c = 0;
      for (std::string_view token : SplitOn(lines[r], ',')) {
        if (c >= d) {
          c = d + 1;
          break;
        }
        double value = 0.0;
        if (!ParseNumber(token, value) || !std::isfinite(value)) {
          return MakeError(
              ErrorKind::kNonNumericFeature,
              StrCat(Where(kFeaturesFile, r + 1), ": column ", c + 1,
                     " is not a finite number: '", token, "'"));
        }
        features(r, c++) = value;
      }
      if (c != d) {
        return MakeError(
            ErrorKind::kCountMismatch,
            StrCat(Where(kFeaturesFile, r + 1), ": expected ", d, " columns"));
      }
    }
  }

  std::vector<int> labels(n);
  {
    const std::vector<std::string_view> lines = Lines(labels_text);
    if (static_cast<int64_t>(lines.size()) != n) {
      return MakeError(
          ErrorKind::kCountMismatch,
          StrCat(kLabelsFile, ": ", lines.size(), " lines, meta declares ", n));
    }
    for (int64_t i = 0; i < n; ++i) {
      int value = 0;
      if (!ParseNumber(lines[i], value)) {
        return MakeError(ErrorKind::kMalformedInput,
                         StrCat(Where(kLabelsFile, i + 1),
                                ": not an integer: '", lines[i], "'"));
      }
      if (value < 0 || value >= n_classes) {
        return MakeError(ErrorKind::kLabelOutOfRange,
                         StrCat(Where(kLabelsFile, i + 1), ": label ", value,
                                " outside [0, ", n_classes, ")"));
      }
      labels[i] = value;
    }
  }

  std::vector<Split> splits(n, Split::kNone);
  {
    const std::vector<std::string_view> lines = Lines(masks_text);
    if (static_cast<int64_t>(lines.size()) != n) {
      return MakeError(
          ErrorKind::kCountMismatch,
          StrCat(kMasksFile, ": ", lines.size(), " lines, meta declares ", n));
    }
    for (int64_t i = 0; i < n; ++i) {
      int assigned = 0;
      for (std::string_view raw : SplitOn(lines[i], ',')) {
        std::string_view tag = StripWhitespace(raw);
        Split split;
        if (tag == "train") {
          split = Split::kTrain;
        } else if (tag == "val") {
          split = Split::kVal;
        } else if (tag == "test") {
          split = Split::kTest;
        } else if (tag == "none") {
          continue;
        } else {
          return MakeError(
              ErrorKind::kMalformedInput,
              StrCat(Where(kMasksFile, i + 1), ": unknown mask '", tag, "'"));
        }
        if (assigned++ > 0 && split != splits[i]) {
          return MakeError(
              ErrorKind::kOverlappingMasks,
              StrCat(Where(kMasksFile, i + 1), ": node in more than one mask"));
        }
        splits[i] = split;
      }
    }
  }

  absl::StatusOr<Graph> graph =
      Graph::Create(n_classes, edges, std::move(features), std::move(labels),
                    std::move(splits));
  if (graph.ok() && graph->dropped_self_loops() > 0) {
    std::clog << "dpgnn: " << (dir / kEdgesFile).string() << ": dropped "
              << graph->dropped_self_loops() << " self loop(s)\n";
  }
  return graph;
}

absl::Status WriteGraphBundle(const Graph& graph,
                              const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorKind::kIoError, StrCat("cannot create ", dir.string(),
                                                 ": ", ec.message()));
  }

  std::string edges;
  for (const auto& [u, v] : graph.UndirectedEdges()) {
    StrAppend(&edges, u, "\t", v, "\n");
  }

  std::string features;
  const FeatureMatrix& x = graph.features();
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (c > 0) features.push_back(',');
      AppendDouble(features, x(r, c));
    }
    features.push_back('\n');
  }

  std::string labels;
  std::string masks;
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    StrAppend(&labels, graph.label(v), "\n");
    StrAppend(&masks, SplitName(graph.split(v)), "\n");
  }

  json meta = {{"n_nodes", graph.num_nodes()},
               {"n_features", graph.num_features()},
               {"n_classes", graph.num_classes()},
               {"checksum", Sha256Hex(edges)}};

  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kEdgesFile, edges));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kFeaturesFile, features));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kLabelsFile, labels));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kMasksFile, masks));
  return WriteStringToFile(dir / kMetaFile, meta.dump(2) + "\n");
}

}  // namespace dpgnn
