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

#include "dpgnn/commands.h"

#include <cmath>
#include <system_error>

#include "dpgnn/accountant.h"
#include "dpgnn/checkpoint.h"
#include "dpgnn/graph_bundle.h"
#include "dpgnn/run_spec.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "dpgnn/trainer.h"
#include "json.hpp"

namespace dpgnn {
namespace {

using nlohmann::json;

absl::Status EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorKind::kIoError, StrCat("cannot create ", dir.string(),
                                                 ": ", ec.message()));
  }
  return absl::OkStatus();
}

struct LoadedRun {
  RunSpec spec;
  Graph graph;
  std::filesystem::path output_dir;
};

absl::StatusOr<LoadedRun> PrepareRun(const std::filesystem::path& spec_path,
                                     const RunOverrides& overrides) {
  DPGNN_ASSIGN_OR_RETURN(RunSpec spec, LoadRunSpec(spec_path));
  if (overrides.seed.has_value()) spec.config.seed = *overrides.seed;
  if (overrides.target_epsilon.has_value()) {
    spec.config.target_epsilon = *overrides.target_epsilon;
  }
  if (overrides.workers.has_value()) spec.config.workers = *overrides.workers;
  DPGNN_ASSIGN_OR_RETURN(Graph graph, LoadGraphBundle(spec.bundle));
  // Everything is validated before any directory is created or any step
  // is taken.
  DPGNN_RETURN_IF_ERROR(ValidateConfig(spec.config, graph));
  std::filesystem::path out =
      ResolveOutputDir(spec, overrides.output_dir, spec_path.stem().string());
  return LoadedRun{std::move(spec), std::move(graph), std::move(out)};
}

std::string LogLines(const TrainResult& result) {
  std::string out;
  for (const IterationRecord& r : result.records) {
    json line = {{"iteration", r.iteration},     {"loss", r.mean_loss},
                 {"train_roots", r.train_roots}, {"step_gamma", r.step_gamma},
                 {"epsilon", r.epsilon},         {"alpha", r.alpha}};
    if (r.f1_val.has_value()) line["f1_val"] = *r.f1_val;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string SummaryJson(const TrainConfig& config, const TrainResult& result) {
  json j = {
      {"f1_test", result.final_scores.test},
      {"f1_val", result.final_scores.val},
      {"epsilon", result.epsilon},
      {"alpha_star", result.alpha_star},
      {"iterations", result.iterations},
      {"stop_reason", StopReasonName(result.stop_reason)},
      {"best_f1_val", result.best_f1_val},
      {"f1_test_at_best_val", result.f1_test_at_best_val},
      {"best_val_iteration", result.best_val_iteration},
      {"dp_enabled", config.dp_enabled},
      {"target_epsilon",
       config.dp_enabled ? json(config.target_epsilon) : json(nullptr)},
      {"delta", config.delta.has_value() ? json(*config.delta) : json(nullptr)},
      {"sampling_rate",
       config.dp_enabled ? json(result.sampling_rate) : json(nullptr)},
      {"arch", ArchitectureName(config.arch)},
      {"sampler", SamplerName(config.sampler)},
      {"seed", config.seed},
  };
  return j.dump(2) + "\n";
}

absl::Status WriteRunArtifacts(const LoadedRun& run, const TrainResult& result,
                               const std::string& summary) {
  const std::filesystem::path& dir = run.output_dir;
  DPGNN_RETURN_IF_ERROR(EnsureDir(dir));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kSummaryFile, summary));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kLogFile, LogLines(result)));
  DPGNN_RETURN_IF_ERROR(SaveCheckpoint(result.params, dir / kCheckpointFile));
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(dir / kResolvedSpecFile,
                                          RunSpecToJson(run.spec) + "\n"));
  if (result.accountant.has_value()) {
    DPGNN_RETURN_IF_ERROR(WriteStringToFile(
        dir / kAccountantFile, result.accountant->ToJson() + "\n"));
  }
  return absl::OkStatus();
}

std::string FormatDouble(double v) {
  // Shortest round-trip form, matching the JSON artifacts.
  return json(v).dump();
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return 0;
  std::optional<ErrorKind> kind = ErrorKindOf(status);
  if (!kind.has_value()) return 2;
  return 10 + static_cast<int>(*kind);
}

std::string ErrorJson(const absl::Status& status) {
  std::optional<ErrorKind> kind = ErrorKindOf(status);
  json j = {{"error",
             {{"kind", kind.has_value() ? std::string(ErrorKindName(*kind))
                                        : std::string("Internal")},
              {"message", std::string(status.message())},
              {"exit_code", ExitCodeFor(status)}}}};
  return j.dump();
}

std::string BundleStats::ToJson() const {
  json j = {{"nodes", num_nodes},
            {"features", num_features},
            {"classes", num_classes},
            {"max_degree", max_degree},
            {"edges", num_edges},
            {"train", train},
            {"val", val},
            {"test", test}};
  return j.dump(2);
}

BundleStats StatsOf(const Graph& graph) {
  BundleStats s;
  s.num_nodes = graph.num_nodes();
  s.num_features = graph.num_features();
  s.num_classes = graph.num_classes();
  s.max_degree = MaxDegree(graph);
  s.num_edges = static_cast<int64_t>(graph.UndirectedEdges().size());
  s.train = static_cast<int>(graph.NodesIn(Split::kTrain).size());
  s.val = static_cast<int>(graph.NodesIn(Split::kVal).size());
  s.test = static_cast<int>(graph.NodesIn(Split::kTest).size());
  return s;
}

absl::StatusOr<BundleStats> CmdConvert(const std::filesystem::path& input,
                                       const std::filesystem::path& output_dir,
                                       const ConvertOptions& options) {
  DPGNN_ASSIGN_OR_RETURN(Graph graph, ConvertRawDataset(input, options));
  DPGNN_RETURN_IF_ERROR(WriteGraphBundle(graph, output_dir));
  // Round-trip through the loader so that a written bundle is a valid one.
  DPGNN_ASSIGN_OR_RETURN(Graph reloaded, LoadGraphBundle(output_dir));
  return StatsOf(reloaded);
}

absl::StatusOr<BundleStats> CmdGenerate(
    const SyntheticGraphOptions& options,
    const std::filesystem::path& output_dir) {
  DPGNN_ASSIGN_OR_RETURN(Graph graph, MakeSyntheticGraph(options));
  DPGNN_RETURN_IF_ERROR(WriteGraphBundle(graph, output_dir));
  return StatsOf(graph);
}

absl::StatusOr<RunArtifacts> CmdTrain(const std::filesystem::path& spec_path,
                                      const RunOverrides& overrides) {
  DPGNN_ASSIGN_OR_RETURN(LoadedRun run, PrepareRun(spec_path, overrides));
  absl::StatusOr<TrainResult> result =
      run.spec.config.dp_enabled ? DpSgdTrain(run.spec.config, run.graph)
                                 : NonDpTrain(run.spec.config, run.graph);
  DPGNN_RETURN_IF_ERROR(result.status());
  RunArtifacts out{run.output_dir, SummaryJson(run.spec.config, *result)};
  DPGNN_RETURN_IF_ERROR(WriteRunArtifacts(run, *result, out.summary));
  return out;
}

absl::StatusOr<RunArtifacts> CmdSweep(const std::filesystem::path& spec_path,
                                      const RunOverrides& overrides) {
  DPGNN_ASSIGN_OR_RETURN(LoadedRun run, PrepareRun(spec_path, overrides));
  std::vector<double> checkpoints = run.spec.checkpoints;
  if (checkpoints.empty()) {
    const double target = run.spec.config.target_epsilon;
    for (double c = 1.0; c < target; c += 1.0) checkpoints.push_back(c);
    checkpoints.push_back(target);
    run.spec.checkpoints = checkpoints;
  }
  DPGNN_ASSIGN_OR_RETURN(SweepResult sweep,
                         EpsilonSweep(run.spec.config, run.graph, checkpoints));
  RunArtifacts out{run.output_dir, SummaryJson(run.spec.config, sweep.run)};
  DPGNN_RETURN_IF_ERROR(WriteRunArtifacts(run, sweep.run, out.summary));
  std::string csv = "epsilon,f1_val,f1_test,iteration\n";
  for (const SweepRow& row : sweep.rows) {
    StrAppend(&csv, FormatDouble(row.epsilon), ",", FormatDouble(row.f1_val),
              ",", FormatDouble(row.f1_test), ",", row.iteration, "\n");
  }
  DPGNN_RETURN_IF_ERROR(WriteStringToFile(run.output_dir / kCurveFile, csv));
  return out;
}

absl::StatusOr<VerifyReport> CmdVerify(const std::filesystem::path& bundle,
                                       OracleTag tag,
                                       const VerifyOptions& options) {
  DPGNN_ASSIGN_OR_RETURN(Graph graph, LoadGraphBundle(bundle));
  return RunVerify(graph, tag, options);
}

}  // namespace dpgnn
