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

#include "dpgnn/checkpoint.h"

#include <vector>

#include "dpgnn/graph_bundle.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "json.hpp"

namespace dpgnn {

using ::nlohmann::json;

std::string CheckpointToJson(const ModelParams& params) {
  const ModelShape& shape = params.shape();
  json doc = {{"format", "dpgnn-checkpoint"},
              {"version", kCheckpointVersion},
              {"arch", ArchitectureName(shape.arch)},
              {"depth", shape.depth},
              {"input_dim", shape.input_dim},
              {"hidden_dim", shape.hidden_dim},
              {"num_classes", shape.num_classes},
              {"params", std::vector<double>(params.flat().begin(),
                                             params.flat().end())}};
  return doc.dump() + "\n";
}

absl::StatusOr<ModelParams> CheckpointFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() ||
      doc.value("format", "") != "dpgnn-checkpoint") {
    return MakeError(ErrorKind::kMalformedInput, "not a dpgnn checkpoint");
  }
  if (doc.value("version", 0) != kCheckpointVersion) {
    return MakeError(
        ErrorKind::kMalformedInput,
        StrCat("unsupported checkpoint version ", doc.value("version", 0)));
  }
  try {
    ModelShape shape;
    DPGNN_ASSIGN_OR_RETURN(
        shape.arch, ParseArchitecture(doc.at("arch").get<std::string>()));
    shape.depth = doc.at("depth").get<int>();
    shape.input_dim = doc.at("input_dim").get<int>();
    shape.hidden_dim = doc.at("hidden_dim").get<int>();
    shape.num_classes = doc.at("num_classes").get<int>();
    return ModelParams::FromFlat(shape,
                                 doc.at("params").get<std::vector<double>>());
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kMalformedInput,
                     StrCat("bad checkpoint field: ", e.what()));
  }
}

absl::Status SaveCheckpoint(const ModelParams& params,
                            const std::filesystem::path& path) {
  return WriteStringToFile(path, CheckpointToJson(params));
}

absl::StatusOr<ModelParams> LoadCheckpoint(const std::filesystem::path& path) {
  DPGNN_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  return CheckpointFromJson(text);
}

}  // namespace dpgnn
