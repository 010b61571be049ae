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

#include "dpgnn/model.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dpgnn/rng.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"

namespace dpgnn {
namespace {

// (H(v) + sum of H(u) over neighbors u) / (deg(v) + 1) for every node.
Eigen::MatrixXd MeanAggregate(const Graph& graph, const Eigen::MatrixXd& h) {
  Eigen::MatrixXd out(h.rows(), h.cols());
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    Eigen::RowVectorXd acc = h.row(v);
    for (NodeId u : graph.neighbors(v)) acc += h.row(u);
    out.row(v) = acc / static_cast<double>(graph.degree(v) + 1);
  }
  return out;
}

Eigen::RowVectorXd Softmax(const Eigen::RowVectorXd& logits) {
  const double max = logits.maxCoeff();
  Eigen::RowVectorXd p = (logits.array() - max).exp().matrix();
  return p / p.sum();
}

}  // namespace

std::string_view ArchitectureName(Architecture arch) {
  return arch == Architecture::kGcn ? "GCN" : "MLP";
}

absl::StatusOr<Architecture> ParseArchitecture(std::string_view name) {
  if (name == "GCN") return Architecture::kGcn;
  if (name == "MLP") return Architecture::kMlp;
  return MakeError(
      ErrorKind::kConfigInvalid,
      StrCat("unknown architecture '", name, "' (expected GCN or MLP)"));
}

int ModelShape::LayerInputDim(int layer) const {
  return layer == 0 ? input_dim : hidden_dim;
}

int ModelShape::LayerOutputDim(int layer) const {
  return layer == depth - 1 ? num_classes : hidden_dim;
}

int64_t ModelShape::NumParameters() const {
  int64_t total = 0;
  for (int l = 0; l < depth; ++l) {
    total += int64_t{LayerInputDim(l)} * LayerOutputDim(l) + LayerOutputDim(l);
  }
  return total;
}

absl::Status ValidateShape(const ModelShape& shape) {
  if (shape.depth != 1 && shape.depth != 2) {
    return MakeError(ErrorKind::kConfigInvalid,
                     StrCat("depth must be 1 or 2, got ", shape.depth));
  }
  if (shape.input_dim < 1 || shape.num_classes < 1) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "input_dim and num_classes must be positive");
  }
  if (shape.depth == 2 && shape.hidden_dim < 1) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "hidden width must be positive for depth 2");
  }
  return absl::OkStatus();
}

ModelParams::ModelParams(const ModelShape& shape) : shape_(shape) {
  size_t offset = 0;
  for (int l = 0; l < shape.depth; ++l) {
    weight_offset_.push_back(offset);
    offset +=
        static_cast<size_t>(shape.LayerInputDim(l)) * shape.LayerOutputDim(l);
    bias_offset_.push_back(offset);
    offset += shape.LayerOutputDim(l);
  }
  flat_.assign(offset, 0.0);
}

absl::StatusOr<ModelParams> ModelParams::Zeros(const ModelShape& shape) {
  DPGNN_RETURN_IF_ERROR(ValidateShape(shape));
  return ModelParams(shape);
}

absl::StatusOr<ModelParams> ModelParams::GlorotUniform(const ModelShape& shape,
                                                       uint64_t seed) {
  DPGNN_RETURN_IF_ERROR(ValidateShape(shape));
  ModelParams params(shape);
  RandomEngine rng = MakeEngine(seed);
  for (int l = 0; l < shape.depth; ++l) {
    const double limit =
        std::sqrt(6.0 / (shape.LayerInputDim(l) + shape.LayerOutputDim(l)));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::Map<RowMatrix> w = params.mutable_weight(l);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
  }
  return params;
}

absl::StatusOr<ModelParams> ModelParams::FromFlat(const ModelShape& shape,
                                                  std::vector<double> flat) {
  DPGNN_RETURN_IF_ERROR(ValidateShape(shape));
  ModelParams params(shape);
  if (flat.size() != params.flat_.size()) {
    return MakeError(ErrorKind::kShapeMismatch,
                     StrCat("flat vector has ", flat.size(),
                            " entries, shape needs ", params.flat_.size()));
  }
  params.flat_ = std::move(flat);
  return params;
}

Eigen::Map<const RowMatrix> ModelParams::weight(int layer) const {
  return {flat_.data() + weight_offset_[layer], shape_.LayerInputDim(layer),
          shape_.LayerOutputDim(layer)};
}

Eigen::Map<const Eigen::VectorXd> ModelParams::bias(int layer) const {
  return {flat_.data() + bias_offset_[layer], shape_.LayerOutputDim(layer)};
}

Eigen::Map<RowMatrix> ModelParams::mutable_weight(int layer) {
  return {flat_.data() + weight_offset_[layer], shape_.LayerInputDim(layer),
          shape_.LayerOutputDim(layer)};
}

Eigen::Map<Eigen::VectorXd> ModelParams::mutable_bias(int layer) {
  return {flat_.data() + bias_offset_[layer], shape_.LayerOutputDim(layer)};
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.shape_ == b.shape_ &&
         std::equal(a.flat_.begin(), a.flat_.end(), b.flat_.begin(),
                    b.flat_.end(), [](double x, double y) {
                      return std::bit_cast<uint64_t>(x) ==
                             std::bit_cast<uint64_t>(y);
                    });
}

SubgraphView MakeSubgraphView(const Graph& graph,
                              std::span<const NodeId> nodes) {
  const Eigen::Index k = static_cast<Eigen::Index>(nodes.size());
  SubgraphView view;
  view.features.resize(k, graph.num_features());
  view.adjacency = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    view.features.row(i) = graph.features().row(nodes[i]);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      if (graph.HasEdge(nodes[i], nodes[j])) {
        view.adjacency(i, j) = 1.0;
        view.adjacency(j, i) = 1.0;
      }
    }
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    view.adjacency.row(i) /= view.adjacency.row(i).sum();
  }
  if (k > 0) view.label = graph.label(nodes[0]);
  return view;
}

absl::StatusOr<ForwardResult> Forward(const ModelParams& params,
                                      const SubgraphView& view) {
  const ModelShape& shape = params.shape();
  if (view.features.cols() != shape.input_dim || view.features.rows() < 1) {
    return MakeError(
        ErrorKind::kShapeMismatch,
        StrCat("view has ", view.features.rows(), "x", view.features.cols(),
               " features, model expects width ", shape.input_dim));
  }
  const bool gcn = shape.arch == Architecture::kGcn;
  if (gcn && (view.adjacency.rows() != view.features.rows() ||
              view.adjacency.cols() != view.features.rows())) {
    return MakeError(ErrorKind::kShapeMismatch,
                     "adjacency does not match feature rows");
  }

  ForwardResult result;
  // MLP only ever sees the root row.
  Eigen::MatrixXd h = gcn ? Eigen::MatrixXd(view.features)
                          : Eigen::MatrixXd(view.features.topRows(1));
  for (int l = 0; l < shape.depth; ++l) {
    const bool last = l == shape.depth - 1;
    Eigen::MatrixXd agg;
    if (last) {
      agg = gcn ? Eigen::MatrixXd(view.adjacency.row(0) * h)
                : Eigen::MatrixXd(h.topRows(1));
    } else {
      agg = gcn ? Eigen::MatrixXd(view.adjacency * h) : h;
    }
    Eigen::MatrixXd z = agg * params.weight(l);
    z.rowwise() += params.bias(l).transpose();
    result.aggregated.push_back(std::move(agg));
    if (last) {
      result.logits = z.row(0);
    } else {
      h = z.cwiseMax(0.0);
      result.pre_activation.push_back(std::move(z));
    }
  }
  return result;
}

absl::StatusOr<double> ComputeLossAndGradInto(const ModelParams& params,
                                              const SubgraphView& view,
                                              std::span<double> grad) {
  const ModelShape& shape = params.shape();
  if (view.label < 0 || view.label >= shape.num_classes) {
    return MakeError(ErrorKind::kMissingLabel, StrCat("root label ", view.label,
                                                      " is not a valid class"));
  }
  if (grad.size() != params.size()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     "gradient buffer does not match parameter count");
  }
  DPGNN_ASSIGN_OR_RETURN(ForwardResult fwd, Forward(params, view));

  const Eigen::RowVectorXd& logits = fwd.logits;
  const double max = logits.maxCoeff();
  const double lse = max + std::log((logits.array() - max).exp().sum());
  const double loss = lse - logits(view.label);

  Eigen::RowVectorXd upstream = Softmax(logits);
  upstream(view.label) -= 1.0;

  const bool gcn = shape.arch == Architecture::kGcn;
  // d(loss)/d(layer input), rows matching the layer input.
  Eigen::MatrixXd d_input;
  for (int l = shape.depth - 1; l >= 0; --l) {
    const bool last = l == shape.depth - 1;
    Eigen::MatrixXd d_pre;
    if (last) {
      d_pre = upstream;
    } else {
      d_pre = d_input.cwiseProduct(
          (fwd.pre_activation[l].array() > 0.0).cast<double>().matrix());
    }
    const Eigen::MatrixXd& agg = fwd.aggregated[l];
    Eigen::Map<RowMatrix> d_weight(grad.data() + params.weight_offset(l),
                                   shape.LayerInputDim(l),
                                   shape.LayerOutputDim(l));
    Eigen::Map<Eigen::RowVectorXd> d_bias(grad.data() + params.bias_offset(l),
                                          shape.LayerOutputDim(l));
    d_weight.noalias() = agg.transpose() * d_pre;
    d_bias = d_pre.colwise().sum();
    if (l == 0) break;

    const Eigen::MatrixXd d_agg = d_pre * params.weight(l).transpose();
    if (!gcn) {
      d_input = d_agg;
    } else if (last) {
      d_input = view.adjacency.row(0).transpose() * d_agg;
    } else {
      d_input = view.adjacency.transpose() * d_agg;
    }
  }
  return loss;
}

absl::StatusOr<LossAndGrad> ComputeLossAndGrad(const ModelParams& params,
                                               const SubgraphView& view) {
  LossAndGrad out;
  out.grad.assign(params.size(), 0.0);
  DPGNN_ASSIGN_OR_RETURN(out.loss,
                         ComputeLossAndGradInto(params, view, out.grad));
  return out;
}

absl::StatusOr<Eigen::MatrixXd> FullGraphLogits(const ModelParams& params,
                                                const Graph& graph) {
  const ModelShape& shape = params.shape();
  if (graph.num_features() != shape.input_dim) {
    return MakeError(ErrorKind::kShapeMismatch,
                     StrCat("graph has ", graph.num_features(),
                            " features, model expects ", shape.input_dim));
  }
  const bool gcn = shape.arch == Architecture::kGcn;
  Eigen::MatrixXd h = graph.features();
  for (int l = 0; l < shape.depth; ++l) {
    Eigen::MatrixXd z;
    // Aggregating after the projection is cheaper when it narrows the rows.
    if (gcn && shape.LayerOutputDim(l) < shape.LayerInputDim(l)) {
      z = MeanAggregate(graph, h * params.weight(l));
    } else if (gcn) {
      z = MeanAggregate(graph, h) * params.weight(l);
    } else {
      z = h * params.weight(l);
    }
    z.rowwise() += params.bias(l).transpose();
    h = l == shape.depth - 1 ? std::move(z) : Eigen::MatrixXd(z.cwiseMax(0.0));
  }
  return h;
}

std::vector<int> ArgmaxRows(const Eigen::MatrixXd& logits) {
  std::vector<int> out(logits.rows());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index best;
    logits.row(r).maxCoeff(&best);
    out[r] = static_cast<int>(best);
  }
  return out;
}

absl::StatusOr<double> F1Micro(const std::vector<int>& predictions,
                               const std::vector<int>& labels,
                               const std::vector<NodeId>& nodes) {
  if (nodes.empty()) {
    return MakeError(ErrorKind::kEmptyMask, "no nodes to evaluate");
  }
  int64_t correct = 0;
  for (NodeId v : nodes) correct += predictions[v] == labels[v];
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

absl::StatusOr<double> EvaluateF1Micro(const ModelParams& params,
                                       const Graph& graph, Split split) {
  const std::vector<NodeId> nodes = graph.NodesIn(split);
  if (nodes.empty()) {
    return MakeError(ErrorKind::kEmptyMask,
                     StrCat("mask '", SplitName(split), "' is empty"));
  }
  DPGNN_ASSIGN_OR_RETURN(Eigen::MatrixXd logits,
                         FullGraphLogits(params, graph));
  return F1Micro(ArgmaxRows(logits), graph.labels(), nodes);
}

absl::StatusOr<SplitScores> EvaluateSplits(const ModelParams& params,
                                           const Graph& graph) {
  DPGNN_ASSIGN_OR_RETURN(Eigen::MatrixXd logits,
                         FullGraphLogits(params, graph));
  const std::vector<int> predictions = ArgmaxRows(logits);
  SplitScores scores;
  for (auto [split, out] : {std::pair{Split::kVal, &scores.val},
                            std::pair{Split::kTest, &scores.test}}) {
    const std::vector<NodeId> nodes = graph.NodesIn(split);
    if (nodes.empty()) continue;
    DPGNN_ASSIGN_OR_RETURN(*out, F1Micro(predictions, graph.labels(), nodes));
  }
  return scores;
}

}  // namespace dpgnn
