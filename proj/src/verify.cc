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

#include "dpgnn/verify.h"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "dpgnn/accountant.h"
#include "dpgnn/privacy.h"
#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "dpgnn/trainer.h"
#include "json.hpp"

namespace dpgnn {
namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

constexpr double kAccountantRelTol = 1e-9;
constexpr double kConversionAbsTol = 1e-6;
constexpr double kCompositionRelTol = 1e-12;
constexpr double kSensitivitySlack = 1e-9;
constexpr double kGradientRelTol = 1e-5;
// Redraw a gradient case when a hidden pre-activation is this close to the
// ReLU kink, where the finite difference is not a derivative.
constexpr double kKinkGuard = 1e-4;

Big BigBinomial(int n, int k) {
  Big r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

OracleCheck NewCheck(std::string name, double bound) {
  OracleCheck c;
  c.name = std::move(name);
  c.bound = bound;
  return c;
}

double RelativeError(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

OracleCheck Fold(std::string name, const std::vector<OracleCheck>& parts) {
  OracleCheck out;
  out.name = std::move(name);
  out.worst = -std::numeric_limits<double>::infinity();
  for (const OracleCheck& c : parts) {
    out.cases += c.cases;
    out.worst = std::max(out.worst, c.worst - c.bound);
    if (!c.passed && out.passed) {
      out.passed = false;
      out.detail = c.detail;
    }
  }
  if (parts.empty()) out.worst = 0.0;
  out.bound = 0.0;
  return out;
}

double L2Distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sq);
}

}  // namespace

std::string_view OracleTagName(OracleTag tag) {
  switch (tag) {
    case OracleTag::kPartition:
      return "partition";
    case OracleTag::kSensitivity:
      return "sensitivity";
    case OracleTag::kGradient:
      return "gradient";
    case OracleTag::kAccountant:
      return "accountant";
    case OracleTag::kAll:
      return "all";
  }
  return "all";
}

absl::StatusOr<OracleTag> ParseOracleTag(std::string_view name) {
  for (OracleTag tag :
       {OracleTag::kPartition, OracleTag::kSensitivity, OracleTag::kGradient,
        OracleTag::kAccountant, OracleTag::kAll}) {
    if (OracleTagName(tag) == name) return tag;
  }
  return MakeError(ErrorKind::kConfigInvalid,
                   StrCat("unknown oracle '", name,
                          "' (expected partition, sensitivity, gradient, "
                          "accountant or all)"));
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.passed; });
}

std::string VerifyReport::ToJson() const {
  nlohmann::json j;
  j["oracle"] = OracleTagName(tag);
  j["passed"] = passed();
  j["checks"] = nlohmann::json::array();
  for (const OracleCheck& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"worst", c.worst},
                           {"bound", c.bound},
                           {"margin", c.bound - c.worst},
                           {"cases", c.cases},
                           {"detail", c.detail}});
  }
  return j.dump(2);
}

OracleCheck CheckPartition(const Graph& graph, const Partition& partition) {
  OracleCheck check;
  check.name = "partition";
  check.cases = 1;
  const int n = graph.num_nodes();
  const int64_t max_size =
      partition.method == SamplerKind::kDrwR
          ? 1 + int64_t{partition.restarts} * partition.walk_length
          : int64_t{partition.walk_length} + 1;
  check.bound = static_cast<double>(max_size);
  auto fail = [&](std::string detail) {
    if (check.passed) check.detail = std::move(detail);
    check.passed = false;
  };

  std::vector<int> seen(n, 0);
  for (int s = 0; s < partition.size(); ++s) {
    const Subgraph& sub = partition.subgraphs[s];
    check.worst = std::max(check.worst, static_cast<double>(sub.nodes.size()));
    if (static_cast<int64_t>(sub.nodes.size()) > max_size) {
      fail(StrCat("subgraph ", s, " has ", sub.nodes.size(), " nodes, above ",
                  max_size));
    }
    if (sub.nodes.empty() || sub.nodes[0] != sub.root) {
      fail(StrCat("subgraph ", s, " does not start at its root"));
      continue;
    }
    for (NodeId v : sub.nodes) {
      if (v < 0 || v >= n) {
        fail(StrCat("subgraph ", s, " holds invalid node ", v));
        continue;
      }
      ++seen[v];
    }
    int begin = 1;
    for (int end : sub.walk_end) {
      if (end < begin || end > static_cast<int>(sub.nodes.size())) {
        fail(StrCat("subgraph ", s, " has inconsistent walk bounds"));
        break;
      }
      if (end - begin > partition.walk_length) {
        fail(StrCat("subgraph ", s, " has a walk longer than L"));
      }
      NodeId prev = sub.root;
      for (int i = begin; i < end; ++i) {
        if (!graph.HasEdge(prev, sub.nodes[i])) {
          fail(StrCat("subgraph ", s, " steps along a non-edge ", prev, "-",
                      sub.nodes[i]));
        }
        prev = sub.nodes[i];
      }
      begin = end;
    }
    if (begin != static_cast<int>(sub.nodes.size())) {
      fail(StrCat("subgraph ", s, " has nodes outside its walks"));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (seen[v] != 1) {
      fail(StrCat("node ", v, " covered ", seen[v], " times"));
      break;
    }
  }
  const int64_t m_min = MinSubgraphCount(
      partition.method, n, partition.walk_length, partition.restarts);
  if (partition.size() < m_min) {
    fail(StrCat(partition.size(), " subgraphs, below the minimum ", m_min));
  }
  return check;
}

std::vector<OracleCheck> SensitivityOracle(
    const Graph& graph, const Partition& partition, const ModelParams& params,
    double clip_norm, const std::vector<Batch>& batches, uint64_t seed) {
  OracleCheck bounded =
      NewCheck("sensitivity", 2.0 * clip_norm + kSensitivitySlack);
  OracleCheck locality = NewCheck("locality", 0.0);
  auto fail = [](OracleCheck& c, std::string detail) {
    if (c.passed) c.detail = std::move(detail);
    c.passed = false;
  };

  std::vector<std::vector<double>> base;
  for (const Batch& b : batches) {
    absl::StatusOr<GradientSum> s =
        BatchGradientSum(params, graph, partition, b.members, clip_norm);
    if (!s.ok()) {
      fail(bounded, std::string(s.status().message()));
      return {bounded, locality};
    }
    base.push_back(std::move(s->sum));
  }

  const std::vector<int> owner = partition.SubgraphOfNode(graph.num_nodes());
  RandomEngine rng = MakeEngine(DeriveSeed(seed, "perturb"));
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = graph.num_features();
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    // Three replacements: large random, zero, and a scaled negation.
    std::vector<Eigen::RowVectorXd> rows(3, Eigen::RowVectorXd::Zero(d));
    for (int c = 0; c < d; ++c) rows[0](c) = 10.0 * normal(rng);
    rows[2] = -100.0 * graph.features().row(v);
    for (const Eigen::RowVectorXd& row : rows) {
      FeatureMatrix x = graph.features();
      x.row(v) = row;
      absl::StatusOr<Graph> perturbed = graph.WithFeatures(std::move(x));
      if (!perturbed.ok()) {
        fail(bounded, std::string(perturbed.status().message()));
        continue;
      }
      for (size_t b = 0; b < batches.size(); ++b) {
        absl::StatusOr<GradientSum> s = BatchGradientSum(
            params, *perturbed, partition, batches[b].members, clip_norm);
        if (!s.ok()) {
          fail(bounded, std::string(s.status().message()));
          continue;
        }
        const double change = L2Distance(base[b], s->sum);
        const bool batched =
            std::find(batches[b].members.begin(), batches[b].members.end(),
                      owner[v]) != batches[b].members.end();
        ++bounded.cases;
        bounded.worst = std::max(bounded.worst, change);
        if (change > bounded.bound) {
          fail(bounded, StrCat("node ", v, " batch ", b, " changed the sum by ",
                               change));
        }
        if (!batched) {
          ++locality.cases;
          locality.worst = std::max(locality.worst, change);
          if (s->sum != base[b]) {
            fail(locality, StrCat("node ", v, " outside batch ", b,
                                  " changed the sum by ", change));
          }
        }
      }
    }
  }
  return {bounded, locality};
}

OracleCheck GradientOracle(const Graph& graph, int cases, double step,
                           uint64_t seed) {
  OracleCheck check = NewCheck("gradient", kGradientRelTol);
  auto fail = [&](std::string detail) {
    if (check.passed) check.detail = std::move(detail);
    check.passed = false;
  };
  RandomEngine rng = MakeEngine(DeriveSeed(seed, "gradient"));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> hidden(1, 6);
  std::uniform_int_distribution<int> walk(1, 4);

  int done = 0;
  int attempts = 0;
  while (done < cases && attempts < cases * 50) {
    ++attempts;
    ModelShape shape{coin(rng) ? Architecture::kGcn : Architecture::kMlp,
                     1 + coin(rng), graph.num_features(), 0,
                     graph.num_classes()};
    if (shape.depth == 2) shape.hidden_dim = hidden(rng);
    std::vector<double> flat(shape.NumParameters());
    for (double& w : flat) w = 0.5 * normal(rng);
    absl::StatusOr<ModelParams> params = ModelParams::FromFlat(shape, flat);
    if (!params.ok()) {
      fail(std::string(params.status().message()));
      break;
    }
    absl::StatusOr<Partition> partition = DrwPartition(graph, walk(rng), rng());
    if (!partition.ok()) {
      fail(std::string(partition.status().message()));
      break;
    }
    std::uniform_int_distribution<int> pick(0, partition->size() - 1);
    const Subgraph& sub = partition->subgraphs[pick(rng)];
    const SubgraphView view = MakeSubgraphView(graph, sub.nodes);

    absl::StatusOr<ForwardResult> fwd = Forward(*params, view);
    if (!fwd.ok()) {
      fail(std::string(fwd.status().message()));
      break;
    }
    bool near_kink = false;
    for (const Eigen::MatrixXd& pre : fwd->pre_activation) {
      if (pre.size() > 0 && pre.cwiseAbs().minCoeff() < kKinkGuard) {
        near_kink = true;
      }
    }
    if (near_kink) continue;

    absl::StatusOr<LossAndGrad> analytic = ComputeLossAndGrad(*params, view);
    if (!analytic.ok()) {
      fail(std::string(analytic.status().message()));
      break;
    }
    ModelParams probe = *params;
    std::span<double> p = probe.mutable_flat();
    for (size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + step;
      const double up = ComputeLossAndGrad(probe, view)->loss;
      p[i] = saved - step;
      const double down = ComputeLossAndGrad(probe, view)->loss;
      p[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = RelativeError(analytic->grad[i], numeric, 1e-5);
      check.worst = std::max(check.worst, err);
      if (err >= kGradientRelTol) {
        fail(StrCat("case ", done, " coordinate ", i, ": analytic ",
                    analytic->grad[i], " vs numeric ", numeric));
      }
    }
    ++done;
  }
  check.cases = done;
  if (done < cases) fail(StrCat("only ", done, " of ", cases, " cases drawn"));
  return check;
}

double ReferenceAmplifiedRdp(double q, double sensitivity, double sigma,
                             int alpha) {
  const Big bq = q;
  const Big ratio = Big(sensitivity) * sensitivity / (Big(2) * sigma * sigma);
  auto gamma = [&](int j) { return ratio * j; };
  const Big e2 = exp(gamma(2));
  Big sum =
      1 + bq * bq * BigBinomial(alpha, 2) * std::min<Big>(4 * (e2 - 1), 2 * e2);
  for (int j = 3; j <= alpha; ++j) {
    sum += 2 * pow(bq, j) * BigBinomial(alpha, j) * exp((j - 1) * gamma(j));
  }
  const Big amplified = log(sum) / (alpha - 1);
  return static_cast<double>(std::min<Big>(amplified, gamma(alpha)));
}

double ReferenceRdpToDp(double alpha, double gamma, double delta) {
  const Big a = alpha;
  const Big eps =
      Big(gamma) + log((a - 1) / a) - (log(Big(delta)) + log(a)) / (a - 1);
  return std::max(0.0, static_cast<double>(eps));
}

std::vector<OracleCheck> AccountantOracle() {
  OracleCheck gaussian = NewCheck("rdp_of_gaussian", kAccountantRelTol);
  OracleCheck amplified = NewCheck("amplified_rdp", kAccountantRelTol);
  OracleCheck conversion = NewCheck("rdp_to_dp", kConversionAbsTol);
  OracleCheck capped = NewCheck("amplified_le_direct", 0.0);
  OracleCheck monotone = NewCheck("amplified_monotone_in_q", 0.0);
  OracleCheck additive = NewCheck("composition_additive", kCompositionRelTol);
  auto fail = [](OracleCheck& c, std::string detail) {
    if (c.passed) c.detail = std::move(detail);
    c.passed = false;
  };
  auto observe = [&](OracleCheck& c, double value, std::string detail) {
    ++c.cases;
    c.worst = std::max(c.worst, value);
    if (value > c.bound) fail(c, std::move(detail));
  };

  const double clip = 1.0;
  const double sens = 2.0 * clip;
  const std::vector<double> multipliers = {0.5, 1.0, 2.0, 4.0, 8.0};
  const std::vector<double> rates = {1e-4, 1e-3, 0.01, 0.05, 0.1,
                                     0.3,  0.5,  0.8,  1.0};
  for (double lambda : multipliers) {
    const double sigma = lambda * sens;
    for (int alpha : RdpAccountant::DefaultOrders()) {
      const double direct = *RdpOfGaussian(alpha, sens, sigma);
      const double ref_direct = static_cast<double>(Big(alpha) * sens * sens /
                                                    (Big(2) * sigma * sigma));
      observe(gaussian, RelativeError(direct, ref_direct, 1e-300),
              StrCat("alpha ", alpha, " lambda ", lambda));
      for (double q : rates) {
        const double got = *AmplifiedRdp(q, sens, sigma, alpha);
        const double ref = ReferenceAmplifiedRdp(q, sens, sigma, alpha);
        observe(amplified, RelativeError(got, ref, 1e-300),
                StrCat("q ", q, " alpha ", alpha, " lambda ", lambda, ": ", got,
                       " vs ", ref));
        observe(capped, got - direct,
                StrCat("q ", q, " alpha ", alpha, " exceeds direct bound"));
      }
      double prev = 0.0;
      for (int i = 1; i <= 20; ++i) {
        const double got = *AmplifiedRdp(i / 20.0, sens, sigma, alpha);
        observe(monotone, prev - got,
                StrCat("alpha ", alpha, " lambda ", lambda, " decreases at q ",
                       i / 20.0));
        prev = got;
      }
    }
  }

  for (double delta : {1e-3, 1e-5, 1e-8}) {
    for (int alpha : {2, 3, 8, 32, 64}) {
      for (double gamma : {0.0, 0.01, 0.5, 1.0, 4.0, 30.0}) {
        const double got = *RdpToDp(alpha, gamma, delta);
        const double ref = ReferenceRdpToDp(alpha, gamma, delta);
        observe(conversion, std::abs(got - ref),
                StrCat("alpha ", alpha, " gamma ", gamma, " delta ", delta));
      }
    }
  }

  for (double q : {0.01, 0.1, 0.5}) {
    absl::StatusOr<RdpAccountant> acc = RdpAccountant::Create(1e-5);
    const std::vector<double> cost = *acc->StepCost(q, sens, 2.0 * sens);
    const int steps = 1000;
    for (int t = 0; t < steps; ++t) (void)acc->AccumulateCost(cost);
    for (size_t i = 0; i < cost.size(); ++i) {
      observe(additive, RelativeError(acc->spent()[i], steps * cost[i], 1e-300),
              StrCat("q ", q, " order ", acc->orders()[i]));
    }
  }
  return {gaussian, amplified, conversion, capped, monotone, additive};
}

absl::StatusOr<VerifyReport> RunVerify(const Graph& graph, OracleTag tag,
                                       const VerifyOptions& options) {
  const bool wants_graph = tag != OracleTag::kAccountant;
  if (wants_graph && graph.num_nodes() > kMaxOracleNodes) {
    return MakeError(
        ErrorKind::kGraphTooLargeForOracle,
        StrCat("graph has ", graph.num_nodes(),
               " nodes; brute-force oracles accept at most ", kMaxOracleNodes));
  }
  VerifyReport report;
  report.tag = tag;
  const bool all = tag == OracleTag::kAll;

  if (all || tag == OracleTag::kPartition) {
    std::vector<OracleCheck> parts;
    for (uint64_t s = 0; s < 16; ++s) {
      const uint64_t seed = DeriveSeed(options.seed, s);
      for (int l = 1; l <= 8; ++l) {
        DPGNN_ASSIGN_OR_RETURN(Partition drw, DrwPartition(graph, l, seed));
        parts.push_back(CheckPartition(graph, drw));
        for (int r = 1; r <= 4; ++r) {
          DPGNN_ASSIGN_OR_RETURN(Partition drwr,
                                 DrwRPartition(graph, l, r, seed));
          parts.push_back(CheckPartition(graph, drwr));
        }
      }
    }
    report.checks.push_back(Fold("partition", parts));
  }

  if (all || tag == OracleTag::kSensitivity) {
    const ModelShape shape{Architecture::kGcn, 2, graph.num_features(), 8,
                           graph.num_classes()};
    DPGNN_ASSIGN_OR_RETURN(
        ModelParams params,
        ModelParams::GlorotUniform(shape, DeriveSeed(options.seed, "init")));
    std::vector<OracleCheck> bounded;
    std::vector<OracleCheck> local;
    for (SamplerKind kind : {SamplerKind::kDrw, SamplerKind::kDrwR}) {
      const uint64_t seed = DeriveSeed(options.seed, SamplerName(kind));
      DPGNN_ASSIGN_OR_RETURN(
          Partition partition,
          kind == SamplerKind::kDrw
              ? DrwPartition(graph, options.walk_length, seed)
              : DrwRPartition(graph, options.walk_length, options.restarts,
                              seed));
      std::vector<Batch> batches;
      const int m = std::min(options.batch_size, partition.size());
      for (int t = 0; t < options.num_batches; ++t) {
        DPGNN_ASSIGN_OR_RETURN(Batch b, SampleBatch(partition, m, seed, t));
        batches.push_back(std::move(b));
      }
      std::vector<OracleCheck> got = SensitivityOracle(
          graph, partition, params, options.clip_norm, batches, seed);
      bounded.push_back(got[0]);
      local.push_back(got[1]);
    }
    OracleCheck b = Fold("sensitivity", bounded);
    b.worst += 2.0 * options.clip_norm + kSensitivitySlack;
    b.bound = 2.0 * options.clip_norm + kSensitivitySlack;
    report.checks.push_back(b);
    report.checks.push_back(Fold("locality", local));
  }

  if (all || tag == OracleTag::kGradient) {
    report.checks.push_back(GradientOracle(graph, options.gradient_cases,
                                           options.fd_step, options.seed));
  }

  if (all || tag == OracleTag::kAccountant) {
    for (OracleCheck& c : AccountantOracle()) {
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace dpgnn
