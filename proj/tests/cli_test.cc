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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpgnn/commands.h"
#include "dpgnn/run_spec.h"
#include "dpgnn/status.h"
#include "dpgnn/synthetic.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace dpgnn {
namespace {

namespace fs = std::filesystem;
using ::dpgnn::testing::ScratchDir;
using ::testing::HasSubstr;
using json = nlohmann::json;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

TEST(RunSpecTest, ParsesKeys) {
  const RunSpec s = *ParseRunSpec(R"({
    "bundle": "data/x", "arch": "MLP", "depth": 2, "hidden_dim": 16,
    "sampler": "DRW-R", "walk_length": 3, "restarts": 2, "batch_size": 8,
    "learning_rate": 0.1, "clip_norm": 0.5, "noise_multiplier": 2.0,
    "target_epsilon": 3.0, "delta": 1e-5, "max_iterations": 10, "seed": 7,
    "workers": 2, "checkpoints": [1, 2, 3]})");
  EXPECT_EQ(s.bundle, fs::path("data/x"));
  EXPECT_EQ(s.config.arch, Architecture::kMlp);
  EXPECT_EQ(s.config.depth, 2);
  EXPECT_EQ(s.config.hidden_dim, 16);
  EXPECT_EQ(s.config.sampler, SamplerKind::kDrwR);
  EXPECT_EQ(s.config.restarts, 2);
  EXPECT_EQ(s.config.clip_norm, 0.5);
  EXPECT_EQ(*s.config.delta, 1e-5);
  EXPECT_EQ(s.config.seed, 7u);
  EXPECT_EQ(s.checkpoints, (std::vector<double>{1, 2, 3}));

  const RunSpec back = *ParseRunSpec(RunSpecToJson(s));
  EXPECT_EQ(RunSpecToJson(back), RunSpecToJson(s));
}

TEST(RunSpecTest, RejectsBadSpecs) {
  auto kind = [](const std::string& text) {
    return ErrorKindOf(ParseRunSpec(text).status());
  };
  EXPECT_EQ(kind(R"({"bundle": "b", "delta": 1e-5, "colour": 1})"),
            ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind(R"({"delta": 1e-5})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind(R"({"bundle": "b"})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind(R"({"bundle": "b", "delta": "small"})"),
            ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind(R"({"bundle": "b", "delta": 1e-5, "seed": -1})"),
            ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind("not json"), ErrorKind::kConfigInvalid);
  EXPECT_TRUE(ParseRunSpec(R"({"bundle": "b", "dp_enabled": false})").ok());
  EXPECT_EQ(ErrorKindOf(LoadRunSpec("/nonexistent/spec.json").status()),
            ErrorKind::kMissingFile);
}

TEST(RunSpecTest, ResolveOutputDirOrder) {
  RunSpec s;
  unsetenv(kOutputRootEnv);
  EXPECT_EQ(ResolveOutputDir(s, "", "cfg"), fs::path("runs/cfg"));
  setenv(kOutputRootEnv, "/tmp/root", 1);
  EXPECT_EQ(ResolveOutputDir(s, "", "cfg"), fs::path("/tmp/root/cfg"));
  s.output_dir = "from_spec";
  EXPECT_EQ(ResolveOutputDir(s, "", "cfg"), fs::path("from_spec"));
  EXPECT_EQ(ResolveOutputDir(s, "flag", "cfg"), fs::path("flag"));
  unsetenv(kOutputRootEnv);
}

TEST(ErrorReportingTest, ExitCodesAndJson) {
  const absl::Status s = MakeError(ErrorKind::kRateExceedsOne, "q too big");
  EXPECT_EQ(ExitCodeFor(s), 10 + static_cast<int>(ErrorKind::kRateExceedsOne));
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), 0);
  EXPECT_EQ(ExitCodeFor(absl::InternalError("x")), 2);
  const json j = json::parse(ErrorJson(s));
  EXPECT_EQ(j["error"]["kind"], "RateExceedsOne");
  EXPECT_THAT(j["error"]["message"].get<std::string>(), HasSubstr("q too big"));
  EXPECT_EQ(j["error"]["exit_code"], ExitCodeFor(s));
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = ScratchDir("commands");
    SyntheticGraphOptions o;
    o.num_nodes = 300;
    o.num_classes = 3;
    o.num_features = 6;
    o.signal = 1.0;
    o.seed = 5;
    const BundleStats stats = *CmdGenerate(o, dir_ / "bundle");
    ASSERT_EQ(stats.num_nodes, 300);
  }

  fs::path Spec(const std::string& name, json extra = json::object()) {
    json j = {{"bundle", (dir_ / "bundle").string()},
              {"output_dir", (dir_ / name).string()},
              {"walk_length", 2},
              {"batch_size", 16},
              {"noise_multiplier", 2.0},
              {"target_epsilon", 4.0},
              {"delta", 1e-4},
              {"max_iterations", 80},
              {"eval_every", 20},
              {"seed", 1}};
    j.update(extra);
    const fs::path path = dir_ / (name + ".json");
    WriteFile(path, j.dump());
    return path;
  }

  fs::path dir_;
};

TEST_F(CommandsTest, TrainWritesArtifactsDeterministically) {
  const fs::path spec = Spec("run");
  const RunArtifacts a = *CmdTrain(spec, {});
  const std::string first = ReadFile(a.output_dir / kSummaryFile);
  const std::string ckpt = ReadFile(a.output_dir / kCheckpointFile);
  const RunArtifacts b = *CmdTrain(spec, {});
  EXPECT_EQ(ReadFile(b.output_dir / kSummaryFile), first);
  EXPECT_EQ(ReadFile(b.output_dir / kCheckpointFile), ckpt);
  EXPECT_EQ(first, a.summary);

  const json s = json::parse(first);
  for (const char* key :
       {"f1_test", "f1_val", "epsilon", "alpha_star", "iterations",
        "stop_reason", "best_f1_val", "f1_test_at_best_val", "dp_enabled",
        "target_epsilon", "delta", "sampling_rate"}) {
    EXPECT_TRUE(s.contains(key)) << key;
  }
  EXPECT_LE(s["epsilon"].get<double>(), 4.0);
  EXPECT_TRUE(fs::exists(a.output_dir / kAccountantFile));
  EXPECT_TRUE(fs::exists(a.output_dir / kResolvedSpecFile));

  std::ifstream log(a.output_dir / kLogFile);
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    EXPECT_TRUE(json::accept(line)) << line;
    ++lines;
  }
  EXPECT_EQ(lines, s["iterations"].get<int>());
}

TEST_F(CommandsTest, OverridesApply) {
  const fs::path spec = Spec("base");
  RunOverrides o;
  o.seed = 9;
  o.target_epsilon = 1.0;
  o.output_dir = dir_ / "over";
  const RunArtifacts r = *CmdTrain(spec, o);
  EXPECT_EQ(r.output_dir, dir_ / "over");
  const json s = json::parse(r.summary);
  EXPECT_EQ(s["seed"], 9);
  EXPECT_EQ(s["target_epsilon"], 1.0);
  EXPECT_LE(s["epsilon"].get<double>(), 1.0);
}

TEST_F(CommandsTest, NonPrivateRunSkipsAccountant) {
  const fs::path spec = Spec("plain", {{"dp_enabled", false}});
  const RunArtifacts r = *CmdTrain(spec, {});
  EXPECT_FALSE(fs::exists(r.output_dir / kAccountantFile));
  EXPECT_EQ(json::parse(r.summary)["epsilon"], 0.0);
}

TEST_F(CommandsTest, RateAboveOneFailsBeforeTraining) {
  const fs::path spec = Spec("toolarge", {{"batch_size", 299}});
  const absl::StatusOr<RunArtifacts> r = CmdTrain(spec, {});
  EXPECT_EQ(ErrorKindOf(r.status()), ErrorKind::kRateExceedsOne);
  EXPECT_FALSE(fs::exists(dir_ / "toolarge"));
}

TEST_F(CommandsTest, MissingBundle) {
  const fs::path spec =
      Spec("nobundle", {{"bundle", (dir_ / "absent").string()}});
  EXPECT_EQ(ErrorKindOf(CmdTrain(spec, {}).status()), ErrorKind::kMissingFile);
}

TEST_F(CommandsTest, SweepWritesCurve) {
  const fs::path spec = Spec("sweep", {{"max_iterations", 400}});
  const RunArtifacts r = *CmdSweep(spec, {});
  std::ifstream csv(r.output_dir / kCurveFile);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "epsilon,f1_val,f1_test,iteration");
  double prev = 0;
  int rows = 0;
  while (std::getline(csv, line)) {
    const double eps = std::stod(line.substr(0, line.find(',')));
    EXPECT_GE(eps, prev);
    EXPECT_LE(eps, rows + 1.0);
    prev = eps;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST_F(CommandsTest, VerifyOnBundle) {
  SyntheticGraphOptions o;
  o.num_nodes = 40;
  o.num_classes = 2;
  o.num_features = 3;
  ASSERT_TRUE(CmdGenerate(o, dir_ / "small").ok());
  const VerifyReport r =
      *CmdVerify(dir_ / "small", OracleTag::kPartition, VerifyOptions{});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(ErrorKindOf(CmdVerify(dir_ / "bundle", OracleTag::kPartition,
                                  VerifyOptions{})
                            .status()),
            ErrorKind::kGraphTooLargeForOracle);
}

#ifdef DPGNN_CLI_PATH
int RunCli(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string(DPGNN_CLI_PATH) + " " + args + " >" +
                          (err.string() + ".out") + " 2>" + err.string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST_F(CommandsTest, BinaryReportsErrorsAsJson) {
  const fs::path spec = Spec("cli_bad", {{"batch_size", 299}});
  const fs::path err = dir_ / "stderr.txt";
  EXPECT_EQ(RunCli("train " + spec.string(), err),
            10 + static_cast<int>(ErrorKind::kRateExceedsOne));
  const json j = json::parse(ReadFile(err));
  EXPECT_EQ(j["error"]["kind"], "RateExceedsOne");
}

TEST_F(CommandsTest, BinaryTrainsAndVerifies) {
  const fs::path spec = Spec("cli_run", {{"max_iterations", 20}});
  const fs::path err = dir_ / "stderr2.txt";
  EXPECT_EQ(RunCli("train " + spec.string() + " --seed 3", err), 0);
  EXPECT_EQ(json::parse(ReadFile(dir_ / "cli_run" / kSummaryFile))["seed"], 3);
  SyntheticGraphOptions o;
  o.num_nodes = 30;
  ASSERT_TRUE(CmdGenerate(o, dir_ / "tiny").ok());
  EXPECT_EQ(
      RunCli("verify " + (dir_ / "tiny").string() + " --oracle partition", err),
      0);
  EXPECT_THAT(ReadFile(err.string() + ".out"), HasSubstr("\"passed\""));
}
#endif  // DPGNN_CLI_PATH

}  // namespace
}  // namespace dpgnn
