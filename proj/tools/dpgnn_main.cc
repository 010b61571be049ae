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

// dpgnn: convert datasets, train and sweep private GNNs, run the oracles.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <tuple>

#include "CLI11.hpp"
#include "dpgnn/commands.h"
#include "dpgnn/graph_bundle.h"
#include "dpgnn/status.h"

namespace {

int Fail(const absl::Status& status) {
  std::cerr << dpgnn::ErrorJson(status) << "\n";
  return dpgnn::ExitCodeFor(status);
}

void AddRunFlags(CLI::App* cmd, std::string& spec, uint64_t& seed,
                 double& target_epsilon, int& workers, std::string& output) {
  cmd->add_option("spec", spec, "Run spec JSON file")->required();
  cmd->add_option("--seed", seed, "Master seed (overrides the spec)");
  cmd->add_option("--target-epsilon", target_epsilon,
                  "Privacy budget (overrides the spec)");
  cmd->add_option("--workers", workers,
                  "Gradient worker threads (overrides the spec)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--output", output, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private GNN training on disjoint subgraphs"};
  app.require_subcommand(1);

  // convert
  std::string convert_input;
  std::string convert_output;
  dpgnn::ConvertOptions convert_options;
  convert_options.format = "edgelist";
  CLI::App* convert = app.add_subcommand("convert", "Raw dataset to bundle");
  convert->add_option("input", convert_input, "Raw dataset directory")
      ->required();
  convert->add_option("--format", convert_options.format,
                      "edgelist, linqs or planetoid");
  convert->add_option("--output", convert_output, "Bundle directory")
      ->required();
  convert->add_option("--seed", convert_options.seed, "Split seed (linqs)");
  convert->add_option("--train-per-class", convert_options.train_per_class);
  convert->add_option("--num-val", convert_options.num_val);
  convert->add_option("--num-test", convert_options.num_test);

  // generate
  std::string generate_output;
  dpgnn::SyntheticGraphOptions synth;
  CLI::App* generate =
      app.add_subcommand("generate", "Synthetic homophilous graph bundle");
  generate->add_option("--output", generate_output, "Bundle directory")
      ->required();
  generate->add_option("--nodes", synth.num_nodes);
  generate->add_option("--classes", synth.num_classes);
  generate->add_option("--features", synth.num_features);
  generate->add_option("--avg-degree", synth.avg_degree);
  generate->add_option("--homophily", synth.homophily);
  generate->add_option("--signal", synth.signal);
  generate->add_option("--seed", synth.seed);

  // train and sweep
  std::string train_spec, sweep_spec, train_output, sweep_output;
  dpgnn::RunOverrides train_overrides, sweep_overrides;
  uint64_t train_seed = 0, sweep_seed = 0;
  double train_eps = 0, sweep_eps = 0;
  int train_workers = 1, sweep_workers = 1;
  CLI::App* train = app.add_subcommand("train", "Single training run");
  AddRunFlags(train, train_spec, train_seed, train_eps, train_workers,
              train_output);
  CLI::App* sweep =
      app.add_subcommand("sweep", "Private run with an epsilon/F1 curve");
  AddRunFlags(sweep, sweep_spec, sweep_seed, sweep_eps, sweep_workers,
              sweep_output);

  // verify
  std::string verify_bundle, verify_oracle = "all", verify_output;
  dpgnn::VerifyOptions verify_options;
  CLI::App* verify = app.add_subcommand("verify", "Brute-force oracles");
  verify->add_option("bundle", verify_bundle, "Bundle directory")->required();
  verify->add_option("--oracle", verify_oracle,
                     "partition, sensitivity, gradient, accountant or all");
  verify->add_option("--seed", verify_options.seed);
  verify->add_option("--walk-length", verify_options.walk_length);
  verify->add_option("--restarts", verify_options.restarts);
  verify->add_option("--clip-norm", verify_options.clip_norm);
  verify->add_option("--batch-size", verify_options.batch_size);
  verify->add_option("--batches", verify_options.num_batches);
  verify->add_option("--gradient-cases", verify_options.gradient_cases);
  verify->add_option("--output", verify_output, "Also write the report here");

  CLI11_PARSE(app, argc, argv);

  if (convert->parsed()) {
    absl::StatusOr<dpgnn::BundleStats> stats =
        dpgnn::CmdConvert(convert_input, convert_output, convert_options);
    if (!stats.ok()) return Fail(stats.status());
    std::cout << stats->ToJson() << "\n";
    return 0;
  }
  if (generate->parsed()) {
    absl::StatusOr<dpgnn::BundleStats> stats =
        dpgnn::CmdGenerate(synth, generate_output);
    if (!stats.ok()) return Fail(stats.status());
    std::cout << stats->ToJson() << "\n";
    return 0;
  }
  for (auto [cmd, spec, overrides, seed, eps, workers, output] :
       {std::tuple{train, &train_spec, &train_overrides, &train_seed,
                   &train_eps, &train_workers, &train_output},
        std::tuple{sweep, &sweep_spec, &sweep_overrides, &sweep_seed,
                   &sweep_eps, &sweep_workers, &sweep_output}}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed") > 0) overrides->seed = *seed;
    if (cmd->count("--target-epsilon") > 0) overrides->target_epsilon = *eps;
    if (cmd->count("--workers") > 0) overrides->workers = *workers;
    overrides->output_dir = *output;
    absl::StatusOr<dpgnn::RunArtifacts> out =
        cmd == train ? dpgnn::CmdTrain(*spec, *overrides)
                     : dpgnn::CmdSweep(*spec, *overrides);
    if (!out.ok()) return Fail(out.status());
    std::cout << out->summary;
    std::cerr << "wrote " << out->output_dir.string() << "\n";
    return 0;
  }
  if (verify->parsed()) {
    absl::StatusOr<dpgnn::OracleTag> tag = dpgnn::ParseOracleTag(verify_oracle);
    if (!tag.ok()) return Fail(tag.status());
    absl::StatusOr<dpgnn::VerifyReport> report =
        dpgnn::CmdVerify(verify_bundle, *tag, verify_options);
    if (!report.ok()) return Fail(report.status());
    const std::string text = report->ToJson() + "\n";
    std::cout << text;
    if (!verify_output.empty()) {
      absl::Status written = dpgnn::WriteStringToFile(verify_output, text);
      if (!written.ok()) return Fail(written);
    }
    return report->passed() ? 0 : 1;
  }
  return 0;
}
