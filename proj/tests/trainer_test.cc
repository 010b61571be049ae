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

#include "dpgnn/trainer.h"

#include <cmath>
#include <random>

#include "dpgnn/accountant.h"
#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/synthetic.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpgnn {
namespace {

using ::dpgnn::testing::RandomGraph;

TrainConfig SmallConfig() {
  TrainConfig c;
  c.depth = 1;
  c.walk_length = 2;
  c.batch_size = 4;
  c.learning_rate = 0.05;
  c.noise_multiplier = 3.0;
  c.target_epsilon = 4.0;
  c.delta = 1e-4;
  c.max_iterations = 30;
  c.seed = 3;
  c.eval_every = 10;
  return c;
}

// Steps the accountant alone until the next step would cross the target.
int64_t StepsWithinBudget(double q, double clip, double lambda, double delta,
                          double target, int64_t cap) {
  RdpAccountant acc = *RdpAccountant::Create(delta);
  const std::vector<double> cost =
      *acc.StepCost(q, 2 * clip, 2 * clip * lambda);
  int64_t steps = 0;
  while (steps < cap && acc.EpsilonAfter(cost)->epsilon <= target) {
    EXPECT_TRUE(acc.AccumulateCost(cost).ok());
    ++steps;
  }
  return steps;
}

TEST(ValidateConfigTest, RejectsBadConfigs) {
  const Graph g = RandomGraph(30, 0.1, 4, 3, 1);
  auto kind = [&](auto mutate) {
    TrainConfig c = SmallConfig();
    mutate(c);
    return ErrorKindOf(ValidateConfig(c, g));
  };
  EXPECT_TRUE(ValidateConfig(SmallConfig(), g).ok());
  EXPECT_EQ(kind([](TrainConfig& c) { c.walk_length = 0; }),
            ErrorKind::kInvalidWalkLength);
  EXPECT_EQ(kind([](TrainConfig& c) {
              c.sampler = SamplerKind::kDrwR;
              c.restarts = 0;
            }),
            ErrorKind::kInvalidRestartCount);
  EXPECT_EQ(kind([](TrainConfig& c) { c.delta.reset(); }),
            ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind([](TrainConfig& c) { c.delta = 1.5; }),
            ErrorKind::kInvalidDelta);
  EXPECT_EQ(kind([](TrainConfig& c) { c.batch_size = 30; }),
            ErrorKind::kRateExceedsOne);
  EXPECT_EQ(kind([](TrainConfig& c) { c.noise_multiplier = 0; }),
            ErrorKind::kZeroSigma);
  EXPECT_EQ(kind([](TrainConfig& c) {
              c.sampler = SamplerKind::kDrwD;
              c.resample_every = 0;
            }),
            ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind([](TrainConfig& c) { c.workers = 0; }),
            ErrorKind::kConfigInvalid);
  // Non-private runs need no delta and no rate bound.
  EXPECT_EQ(kind([](TrainConfig& c) {
              c.dp_enabled = false;
              c.delta.reset();
              c.batch_size = 20;
            }),
            std::nullopt);
}

TEST(ValidateConfigTest, EmptyTrainMask) {
  Graph g = RandomGraph(20, 0.2, 3, 2, 2, /*train_fraction=*/0.0);
  EXPECT_EQ(ErrorKindOf(ValidateConfig(SmallConfig(), g)),
            ErrorKind::kEmptyMask);
}

TEST(DpSgdTrainTest, BudgetNeverExceededOnRandomConfigs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(20, 80)(rng);
    const Graph g = RandomGraph(n, 0.08, 3, 3, rng());
    TrainConfig c = SmallConfig();
    c.sampler = static_cast<SamplerKind>(trial % 3);
    c.walk_length = std::uniform_int_distribution<int>(1, 4)(rng);
    c.restarts = std::uniform_int_distribution<int>(1, 3)(rng);
    c.resample_every = 5;
    const int64_t m_min =
        MinSubgraphCount(c.sampler, n, c.walk_length, c.restarts);
    c.batch_size =
        std::uniform_int_distribution<int>(1, static_cast<int>(m_min))(rng);
    c.noise_multiplier = std::uniform_real_distribution<double>(0.3, 3)(rng);
    c.clip_norm = std::uniform_real_distribution<double>(0.1, 2)(rng);
    c.target_epsilon = std::uniform_real_distribution<double>(0.2, 6)(rng);
    c.max_iterations = 60;
    c.seed = rng();
    const TrainResult r = *DpSgdTrain(c, g);
    EXPECT_LE(r.epsilon, c.target_epsilon);
    for (const IterationRecord& rec : r.records) {
      EXPECT_LE(rec.epsilon, c.target_epsilon);
    }
    EXPECT_EQ(
        r.iterations,
        StepsWithinBudget(r.sampling_rate, c.clip_norm, c.noise_multiplier,
                          *c.delta, c.target_epsilon, c.max_iterations));
    EXPECT_EQ(r.accountant->steps(), r.iterations);
    if (r.stop_reason == StopReason::kEpsilonExhausted) {
      EXPECT_GT(r.accountant
                    ->EpsilonAfter(*r.accountant->StepCost(
                        r.sampling_rate, 2 * c.clip_norm,
                        2 * c.clip_norm * c.noise_multiplier))
                    ->epsilon,
                c.target_epsilon);
    }
  }
}

TEST(DpSgdTrainTest, StopsAtClosedFormCount) {
  const Graph g = RandomGraph(60, 0.05, 3, 3, 4);
  TrainConfig c = SmallConfig();
  c.noise_multiplier = 50.0;
  c.target_epsilon = 0.3;
  c.max_iterations = 100000;
  c.eval_every = 0;
  const TrainResult r = *DpSgdTrain(c, g);
  const int64_t expected =
      StepsWithinBudget(r.sampling_rate, c.clip_norm, c.noise_multiplier,
                        *c.delta, c.target_epsilon, c.max_iterations);
  EXPECT_GT(expected, 0);
  EXPECT_LT(expected, c.max_iterations);
  EXPECT_EQ(r.iterations, expected);
  EXPECT_EQ(r.stop_reason, StopReason::kEpsilonExhausted);
}

TEST(DpSgdTrainTest, TinyTargetTakesNoStep) {
  const Graph g = RandomGraph(40, 0.1, 3, 2, 5);
  TrainConfig c = SmallConfig();
  c.target_epsilon = 1e-3;
  const TrainResult r = *DpSgdTrain(c, g);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.epsilon, 0.0);
  EXPECT_EQ(r.stop_reason, StopReason::kEpsilonExhausted);
}

TEST(DpSgdTrainTest, RecordsMatchAccountant) {
  const Graph g = RandomGraph(50, 0.1, 3, 2, 6);
  const TrainResult r = *DpSgdTrain(SmallConfig(), g);
  ASSERT_EQ(r.records.size(), static_cast<size_t>(r.iterations));
  double prev = 0;
  for (size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].iteration, static_cast<int64_t>(i));
    EXPECT_GE(r.records[i].epsilon, prev);
    EXPECT_GT(r.records[i].step_gamma, 0.0);
    prev = r.records[i].epsilon;
  }
  EXPECT_EQ(r.records.back().epsilon, r.epsilon);
  EXPECT_EQ(r.accountant->CurrentEpsilon().epsilon, r.epsilon);
  EXPECT_EQ(r.alpha_star, r.accountant->CurrentEpsilon().order);
}

TEST(DpSgdTrainTest, DeterministicAndWorkerIndependent) {
  const Graph g = RandomGraph(70, 0.08, 4, 3, 7);
  TrainConfig c = SmallConfig();
  c.batch_size = 20;
  c.walk_length = 1;
  const TrainResult a = *DpSgdTrain(c, g);
  const TrainResult b = *DpSgdTrain(c, g);
  c.workers = 3;
  const TrainResult w = *DpSgdTrain(c, g);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.params, w.params);
  EXPECT_EQ(a.final_scores.test, w.final_scores.test);
  c.seed = 4;
  EXPECT_FALSE(DpSgdTrain(c, g)->params == a.params);
}

TEST(DpSgdTrainTest, ZeroLearningRateKeepsInitialParams) {
  const Graph g = RandomGraph(40, 0.1, 3, 3, 8);
  TrainConfig c = SmallConfig();
  c.learning_rate = 0.0;
  const TrainResult r = *DpSgdTrain(c, g);
  const ModelShape shape = *ConfigShape(c, g);
  const ModelParams init =
      *ModelParams::GlorotUniform(shape, DeriveSeed(c.seed, kInitStream));
  EXPECT_EQ(r.params, init);
  const SplitScores s = *EvaluateSplits(init, g.RowNormalized());
  EXPECT_EQ(r.final_scores.val, s.val);
  EXPECT_EQ(r.final_scores.test, s.test);
}

TEST(DpSgdTrainTest, DrwDWithoutResamplingEqualsDrw) {
  const Graph g = RandomGraph(50, 0.1, 3, 2, 9);
  TrainConfig c = SmallConfig();
  const TrainResult drw = *DpSgdTrain(c, g);
  ASSERT_GT(drw.iterations, 4);
  c.sampler = SamplerKind::kDrwD;
  c.resample_every = c.max_iterations + 1;
  const TrainResult drwd = *DpSgdTrain(c, g);
  EXPECT_EQ(drw.params, drwd.params);
  EXPECT_EQ(drw.epsilon, drwd.epsilon);
  c.resample_every = 3;
  EXPECT_FALSE(DpSgdTrain(c, g)->params == drw.params);
}

TEST(NonDpTrainTest, BatchTooLarge) {
  // No rate bound applies without privacy, so only the partition size does.
  const Graph g = dpgnn::testing::PathGraph(6);
  TrainConfig c = SmallConfig();
  c.dp_enabled = false;
  c.walk_length = 1;
  c.batch_size = 7;
  EXPECT_EQ(ErrorKindOf(NonDpTrain(c, g).status()), ErrorKind::kBatchTooLarge);
}

TEST(TrainingLoopTest, AccountingOnlyMatchesNonPrivate) {
  const Graph g = RandomGraph(50, 0.1, 3, 3, 10);
  TrainConfig c = SmallConfig();
  c.target_epsilon = 1e9;
  const SweepResult acc_only = *internal::RunTrainingLoop(
      c, g, internal::LoopMode{.clip = false, .noise = false, .account = true},
      {});
  c.dp_enabled = false;
  const TrainResult plain = *NonDpTrain(c, g);
  EXPECT_EQ(acc_only.run.params, plain.params);
  EXPECT_EQ(acc_only.run.iterations, c.max_iterations);
  EXPECT_GT(acc_only.run.epsilon, 0.0);
  EXPECT_EQ(plain.epsilon, 0.0);
}

TEST(TrainingLoopTest, NoiseWithoutClipChangesTrajectory) {
  const Graph g = RandomGraph(50, 0.1, 3, 3, 10);
  TrainConfig c = SmallConfig();
  const SweepResult noisy = *internal::RunTrainingLoop(
      c, g, internal::LoopMode{.clip = false, .noise = true, .account = false},
      {});
  const SweepResult clean = *internal::RunTrainingLoop(
      c, g, internal::LoopMode{.clip = false, .noise = false, .account = false},
      {});
  EXPECT_FALSE(noisy.run.params == clean.run.params);
}

TEST(NonDpTrainTest, RequiresDpDisabled) {
  const Graph g = RandomGraph(30, 0.1, 3, 2, 1);
  EXPECT_EQ(ErrorKindOf(NonDpTrain(SmallConfig(), g).status()),
            ErrorKind::kConfigInvalid);
  TrainConfig c = SmallConfig();
  c.dp_enabled = false;
  EXPECT_EQ(ErrorKindOf(DpSgdTrain(c, g).status()), ErrorKind::kConfigInvalid);
}

TEST(NonDpTrainTest, LearnsSeparableSignal) {
  SyntheticGraphOptions o;
  o.num_nodes = 400;
  o.num_classes = 3;
  o.num_features = 8;
  o.signal = 1.5;
  o.seed = 2;
  const Graph g = *MakeSyntheticGraph(o);
  for (Architecture arch : {Architecture::kMlp, Architecture::kGcn}) {
    TrainConfig c;
    c.arch = arch;
    c.dp_enabled = false;
    c.batch_size = 32;
    c.max_iterations = 300;
    c.walk_length = 2;
    const TrainResult r = *NonDpTrain(c, g);
    EXPECT_GT(r.final_scores.test, 0.6) << ArchitectureName(arch);
    EXPECT_EQ(r.stop_reason, StopReason::kMaxIterations);
  }
}

TEST(BatchGradientSumTest, NonTrainRootsContributeZero) {
  const Graph g = RandomGraph(40, 0.15, 3, 2, 12, /*train_fraction=*/0.3);
  const Partition p = *DrwPartition(g, 2, 1);
  std::vector<int> members;
  for (int i = 0; i < p.size(); ++i) {
    if (g.split(p.subgraphs[i].root) != Split::kTrain) members.push_back(i);
  }
  ASSERT_FALSE(members.empty());
  const ModelShape shape{
      .arch = Architecture::kGcn, .depth = 1, .input_dim = 3, .num_classes = 2};
  const ModelParams params = *ModelParams::GlorotUniform(shape, 1);
  const GradientSum s = *BatchGradientSum(params, g, p, members, 1.0);
  EXPECT_EQ(s.train_roots, 0);
  EXPECT_EQ(s.loss_sum, 0.0);
  for (double v : s.sum) EXPECT_EQ(v, 0.0);
}

TEST(BatchGradientSumTest, ClippedMembersAndWorkerCounts) {
  const Graph g = RandomGraph(60, 0.1, 3, 2, 13, /*train_fraction=*/1.0);
  const Partition p = *DrwPartition(g, 1, 2);
  std::vector<int> members(p.size());
  std::iota(members.begin(), members.end(), 0);
  const ModelShape shape{
      .arch = Architecture::kGcn, .depth = 1, .input_dim = 3, .num_classes = 2};
  const ModelParams params = *ModelParams::GlorotUniform(shape, 5);
  const double clip = 1e-3;
  const GradientSum one = *BatchGradientSum(params, g, p, members, clip, 1);
  const GradientSum four = *BatchGradientSum(params, g, p, members, clip, 4);
  EXPECT_EQ(one.sum, four.sum);
  EXPECT_EQ(one.loss_sum, four.loss_sum);
  EXPECT_EQ(one.train_roots, p.size());
  double norm = 0;
  for (double v : one.sum) norm += v * v;
  EXPECT_LE(std::sqrt(norm), clip * p.size() * (1 + 1e-12));
}

TEST(EpsilonSweepTest, RowsFollowBudget) {
  const Graph g = RandomGraph(80, 0.06, 3, 3, 14);
  TrainConfig c = SmallConfig();
  c.max_iterations = 200;
  const SweepResult s = *EpsilonSweep(c, g, {0.5, 1.0, 2.0, 4.0});
  ASSERT_EQ(s.rows.size(), 4u);
  for (size_t i = 0; i < s.rows.size(); ++i) {
    EXPECT_LE(s.rows[i].epsilon, s.rows[i].checkpoint);
    if (i > 0) {
      EXPECT_GE(s.rows[i].epsilon, s.rows[i - 1].epsilon);
      EXPECT_GE(s.rows[i].iteration, s.rows[i - 1].iteration);
    }
    const int64_t it = s.rows[i].iteration;
    if (it > 0) {
      EXPECT_EQ(s.run.records[it - 1].epsilon, s.rows[i].epsilon);
    }
    if (it < s.run.iterations) {
      EXPECT_GT(s.run.records[it].epsilon, s.rows[i].checkpoint);
    }
  }
  const SweepRow& last = s.rows.back();
  EXPECT_EQ(last.iteration, s.run.iterations);
  EXPECT_EQ(last.f1_test, s.run.final_scores.test);
  EXPECT_EQ(last.f1_val, s.run.final_scores.val);
}

TEST(EpsilonSweepTest, SameRunAsPlainTraining) {
  const Graph g = RandomGraph(50, 0.1, 3, 2, 15);
  const TrainConfig c = SmallConfig();
  EXPECT_EQ(EpsilonSweep(c, g, {1.0, 4.0})->run.params,
            DpSgdTrain(c, g)->params);
}

TEST(EpsilonSweepTest, RejectsBadCheckpoints) {
  const Graph g = RandomGraph(30, 0.1, 3, 2, 1);
  const TrainConfig c = SmallConfig();
  for (const std::vector<double>& cps : std::vector<std::vector<double>>{
           {}, {0.0}, {2.0, 1.0}, {1.0, 1.0}, {5.0}}) {
    EXPECT_EQ(ErrorKindOf(EpsilonSweep(c, g, cps).status()),
              ErrorKind::kConfigInvalid);
  }
}

TEST(SuggestClipNormTest, QuantilesAreOrdered) {
  const Graph g = RandomGraph(60, 0.1, 3, 2, 16);
  const TrainConfig c = SmallConfig();
  const double lo = *SuggestClipNorm(c, g, 0.1);
  const double mid = *SuggestClipNorm(c, g, 0.5);
  const double hi = *SuggestClipNorm(c, g, 1.0);
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(lo, mid);
  EXPECT_LE(mid, hi);
  EXPECT_FALSE(SuggestClipNorm(c, g, 1.5).ok());
}

TEST(StopReasonTest, Names) {
  EXPECT_EQ(StopReasonName(StopReason::kEpsilonExhausted), "epsilon_exhausted");
  EXPECT_EQ(StopReasonName(StopReason::kMaxIterations), "max_iterations");
}

}  // namespace
}  // namespace dpgnn
