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

#ifndef DPGNN_PRIVACY_H_
#define DPGNN_PRIVACY_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgnn/rng.h"

namespace dpgnn {

// Clip norm C and noise multiplier lambda. Under feature-level neighbors the
// only affected sample of a batch can move the clipped sum by at most 2C, so
// the sensitivity is fixed at 2C and sigma = lambda * 2C.
class NoiseConfig {
 public:
  static absl::StatusOr<NoiseConfig> Create(double clip_norm,
                                            double noise_multiplier);

  double clip_norm() const { return clip_norm_; }
  double noise_multiplier() const { return noise_multiplier_; }
  double sensitivity() const { return 2.0 * clip_norm_; }
  double sigma() const { return noise_multiplier_ * sensitivity(); }

 private:
  NoiseConfig(double clip_norm, double noise_multiplier)
      : clip_norm_(clip_norm), noise_multiplier_(noise_multiplier) {}

  double clip_norm_;
  double noise_multiplier_;
};

// v * min(1, C / ||v||_2).
absl::StatusOr<std::vector<double>> ClipToNorm(std::span<const double> v,
                                               double clip_norm);
absl::Status ClipInPlace(std::span<double> v, double clip_norm);

// (sum + z) / batch_size with z_i ~ N(0, sigma^2) i.i.d., writing into `sum`.
// The noise vector is drawn once per call from `rng`.
absl::Status AddNoiseAndAverage(std::span<double> sum, int batch_size,
                                double sigma, RandomEngine& rng);

// Sums `grads` in order, then applies AddNoiseAndAverage with |B| =
// grads.size().
absl::StatusOr<std::vector<double>> NoisySum(
    const std::vector<std::vector<double>>& grads, double sigma,
    RandomEngine& rng);

// Renyi DP of the Gaussian mechanism: alpha * sensitivity^2 / (2 sigma^2).
absl::StatusOr<double> RdpOfGaussian(int alpha, double sensitivity,
                                     double sigma);

// RDP of the Gaussian mechanism applied to a uniformly subsampled batch
// (sampling without replacement, rate q) at integer order alpha >= 2:
//
//   1/(alpha-1) * log(1 + q^2 C(alpha,2) min{4(e^{g(2)} - 1), 2 e^{g(2)}}
//                     + 2 sum_{j=3}^{alpha} q^j C(alpha,j) e^{(j-1) g(j)})
//
// with g = RdpOfGaussian. Evaluated in log space and capped at g(alpha).
absl::StatusOr<double> AmplifiedRdp(double q, double sensitivity, double sigma,
                                    int alpha);

// Conversion of an (alpha, gamma)-RDP guarantee to (epsilon, delta)-DP:
//   gamma + log((alpha-1)/alpha) - (log delta + log alpha) / (alpha - 1),
// floored at 0.
absl::StatusOr<double> RdpToDp(double alpha, double gamma, double delta);

// Largest L-hop receptive field in a graph of maximum degree K:
// sum_{l=0}^{L} K^l.
double ReceptiveFieldBound(int max_degree, int layers);

// Sensitivity of the total gradient of an L-layer GNN trained without
// disjoint subgraphs: 2 C RF(K, L). Diagnostic only.
double NaiveSensitivityBound(int max_degree, int layers, double clip_norm);

}  // namespace dpgnn

#endif  // DPGNN_PRIVACY_H_
