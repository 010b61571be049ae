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

// Brute-force oracles for small graphs: partition invariants, batch
// sensitivity, gradient finite differences and an extended-precision
// reimplementation of the accountant.
#ifndef DPGNN_VERIFY_H_
#define DPGNN_VERIFY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgnn/graph.h"
#include "dpgnn/model.h"
#include "dpgnn/samplers.h"

namespace dpgnn {

// Largest graph the brute-force oracles accept.
inline constexpr int kMaxOracleNodes = 200;

enum class OracleTag { kPartition, kSensitivity, kGradient, kAccountant, kAll };

std::string_view OracleTagName(OracleTag tag);
absl::StatusOr<OracleTag> ParseOracleTag(std::string_view name);

// Outcome of one oracle. `worst` is the worst observed value of the checked
// quantity and `bound` the limit it must respect (worst <= bound), so
// bound - worst is the margin.
struct OracleCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  double bound = 0.0;
  int64_t cases = 0;
  std::string detail;
};

struct VerifyReport {
  OracleTag tag = OracleTag::kAll;
  std::vector<OracleCheck> checks;

  bool passed() const;
  std::string ToJson() const;
};

struct VerifyOptions {
  uint64_t seed = 0;
  int walk_length = 2;
  int restarts = 2;
  double clip_norm = 1.0;
  int batch_size = 4;
  int num_batches = 8;
  int gradient_cases = 100;
  double fd_step = 1e-5;
};

// Checks one partition: every node covered exactly once, subgraph sizes
// within 1 + L (DRW, DRW-D) or 1 + R L (DRW-R), consecutive walk nodes
// adjacent, walks rooted at the subgraph root, and M >= M_min.
OracleCheck CheckPartition(const Graph& graph, const Partition& partition);

// For every node v and every batch of a fixed schedule, replaces v's
// features and recomputes the clipped, noiseless gradient sum. The largest
// l2 change must not exceed 2C (+1e-9); when v's subgraph is not in the
// batch the change must be exactly 0. Returns two checks (bounded change
// and exact locality).
std::vector<OracleCheck> SensitivityOracle(
    const Graph& graph, const Partition& partition, const ModelParams& params,
    double clip_norm, const std::vector<Batch>& batches, uint64_t seed);

// Largest per-coordinate relative error between the analytic gradient and a
// central finite difference, over `cases` random (shape, params, subgraph)
// draws. Relative error is |a - n| / max(|a|, |n|, 1e-5).
OracleCheck GradientOracle(const Graph& graph, int cases, double step,
                           uint64_t seed);

// Compares RdpOfGaussian, AmplifiedRdp and RdpToDp with an independent
// 50-digit implementation over a grid of (q, sigma, alpha, delta), plus the
// structural properties: amplification never exceeds the direct bound, is
// monotone in q, and composes additively.
std::vector<OracleCheck> AccountantOracle();

// Extended-precision reference values, exposed for tests.
double ReferenceAmplifiedRdp(double q, double sensitivity, double sigma,
                             int alpha);
double ReferenceRdpToDp(double alpha, double gamma, double delta);

// Runs the oracles selected by `tag` on `graph`. Fails with
// GraphTooLargeForOracle above kMaxOracleNodes for graph-based tags.
absl::StatusOr<VerifyReport> RunVerify(const Graph& graph, OracleTag tag,
                                       const VerifyOptions& options);

}  // namespace dpgnn

#endif  // DPGNN_VERIFY_H_
