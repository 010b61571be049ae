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

#ifndef DPGNN_MODEL_H_
#define DPGNN_MODEL_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "dpgnn/graph.h"

namespace dpgnn {

enum class Architecture { kGcn, kMlp };

std::string_view ArchitectureName(Architecture arch);
absl::StatusOr<Architecture> ParseArchitecture(std::string_view name);

struct ModelShape {
  Architecture arch = Architecture::kGcn;
  int depth = 1;  // 1 or 2
  int input_dim = 0;
  int hidden_dim = 0;  // used when depth == 2
  int num_classes = 0;

  int LayerInputDim(int layer) const;
  int LayerOutputDim(int layer) const;
  int64_t NumParameters() const;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

absl::Status ValidateShape(const ModelShape& shape);

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Weights and biases of a 1- or 2-layer GCN/MLP held in one contiguous
// buffer. Layer l stores W_l (in x out, row-major) followed by b_l (out).
class ModelParams {
 public:
  ModelParams() = default;

  static absl::StatusOr<ModelParams> Zeros(const ModelShape& shape);
  // W ~ U(-a, a) with a = sqrt(6 / (in + out)); biases start at zero.
  static absl::StatusOr<ModelParams> GlorotUniform(const ModelShape& shape,
                                                   uint64_t seed);
  static absl::StatusOr<ModelParams> FromFlat(const ModelShape& shape,
                                              std::vector<double> flat);

  const ModelShape& shape() const { return shape_; }
  std::span<const double> flat() const { return flat_; }
  std::span<double> mutable_flat() { return flat_; }
  size_t size() const { return flat_.size(); }

  Eigen::Map<const RowMatrix> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<RowMatrix> mutable_weight(int layer);
  Eigen::Map<Eigen::VectorXd> mutable_bias(int layer);

  size_t weight_offset(int layer) const { return weight_offset_[layer]; }
  size_t bias_offset(int layer) const { return bias_offset_[layer]; }

  // Bitwise equality of shape and every parameter.
  friend bool operator==(const ModelParams& a, const ModelParams& b);

 private:
  explicit ModelParams(const ModelShape& shape);

  ModelShape shape_;
  std::vector<double> flat_;
  std::vector<size_t> weight_offset_;
  std::vector<size_t> bias_offset_;
};

// Dense local view of one subgraph. Row 0 is the root. The adjacency covers
// all graph edges among the subgraph's nodes plus self loops and is
// normalized to a row-stochastic mean.
struct SubgraphView {
  FeatureMatrix features;
  Eigen::MatrixXd adjacency;
  int label = -1;
};

SubgraphView MakeSubgraphView(const Graph& graph,
                              std::span<const NodeId> nodes);

struct ForwardResult {
  Eigen::RowVectorXd logits;
  // Per layer: the aggregated layer input (only the root row for the last
  // layer) and, for hidden layers, the pre-activation.
  std::vector<Eigen::MatrixXd> aggregated;
  std::vector<Eigen::MatrixXd> pre_activation;
};

// Logits at the root. GCN layers compute mean-aggregate then affine, with
// ReLU between layers; the MLP reads only the root row.
absl::StatusOr<ForwardResult> Forward(const ModelParams& params,
                                      const SubgraphView& view);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

// Softmax cross-entropy at the root and its exact gradient with respect to
// the flat parameter vector.
absl::StatusOr<LossAndGrad> ComputeLossAndGrad(const ModelParams& params,
                                               const SubgraphView& view);

// Same, writing the gradient into `grad` (length params.size()). Returns the
// loss.
absl::StatusOr<double> ComputeLossAndGradInto(const ModelParams& params,
                                              const SubgraphView& view,
                                              std::span<double> grad);

// Logits for every node using whole-graph mean aggregation (N x classes).
absl::StatusOr<Eigen::MatrixXd> FullGraphLogits(const ModelParams& params,
                                                const Graph& graph);

// Row-wise argmax; ties resolve to the lowest class id.
std::vector<int> ArgmaxRows(const Eigen::MatrixXd& logits);

// Fraction of `nodes` whose prediction equals the label. For single-label
// classification micro-averaged F1 equals accuracy.
absl::StatusOr<double> F1Micro(const std::vector<int>& predictions,
                               const std::vector<int>& labels,
                               const std::vector<NodeId>& nodes);

absl::StatusOr<double> EvaluateF1Micro(const ModelParams& params,
                                       const Graph& graph, Split split);

struct SplitScores {
  double val = 0.0;
  double test = 0.0;
};

// Val and test F1 from a single full-graph forward pass. A split without
// nodes scores 0.
absl::StatusOr<SplitScores> EvaluateSplits(const ModelParams& params,
                                           const Graph& graph);

}  // namespace dpgnn

#endif  // DPGNN_MODEL_H_
