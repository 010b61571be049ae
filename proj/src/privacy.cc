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

#include "dpgnn/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpgnn/status.h"
#include "dpgnn/strings.h"

namespace dpgnn {
namespace {

double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(1 + sum_i exp(terms_i)), accurate for both tiny and huge sums.
double Log1pSumExp(const std::vector<double>& terms) {
  double max = -std::numeric_limits<double>::infinity();
  for (double t : terms) max = std::max(max, t);
  if (max == -std::numeric_limits<double>::infinity()) return 0.0;
  if (max < 0.0) {
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t);
    return std::log1p(sum);
  }
  double sum = std::exp(-max);
  for (double t : terms) sum += std::exp(t - max);
  return max + std::log(sum);
}

double Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

}  // namespace

absl::StatusOr<NoiseConfig> NoiseConfig::Create(double clip_norm,
                                                double noise_multiplier) {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    return MakeError(ErrorKind::kConfigInvalid,
                     StrCat("clip norm must be positive, got ", clip_norm));
  }
  if (!(noise_multiplier > 0.0) || !std::isfinite(noise_multiplier)) {
    return MakeError(
        ErrorKind::kZeroSigma,
        StrCat("noise multiplier must be positive, got ", noise_multiplier));
  }
  return NoiseConfig(clip_norm, noise_multiplier);
}

absl::Status ClipInPlace(std::span<double> v, double clip_norm) {
  if (!(clip_norm > 0.0)) {
    return MakeError(ErrorKind::kConfigInvalid, "clip norm must be positive");
  }
  const double norm = Norm(v);
  if (!std::isfinite(norm)) {
    return MakeError(ErrorKind::kNonFiniteInput,
                     "cannot clip a vector with non-finite entries");
  }
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& x : v) x *= scale;
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ClipToNorm(std::span<const double> v,
                                               double clip_norm) {
  std::vector<double> out(v.begin(), v.end());
  DPGNN_RETURN_IF_ERROR(ClipInPlace(out, clip_norm));
  return out;
}

absl::Status AddNoiseAndAverage(std::span<double> sum, int batch_size,
                                double sigma, RandomEngine& rng) {
  if (batch_size < 1) {
    return MakeError(ErrorKind::kLengthMismatch, "batch must be non-empty");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return MakeError(ErrorKind::kConfigInvalid, "sigma must be >= 0");
  }
  std::normal_distribution<double> standard(0.0, 1.0);
  const double inv = 1.0 / static_cast<double>(batch_size);
  for (double& x : sum) x = (x + sigma * standard(rng)) * inv;
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> NoisySum(
    const std::vector<std::vector<double>>& grads, double sigma,
    RandomEngine& rng) {
  if (grads.empty()) {
    return MakeError(ErrorKind::kLengthMismatch, "no gradients to sum");
  }
  std::vector<double> sum(grads.front().size(), 0.0);
  for (const std::vector<double>& g : grads) {
    if (g.size() != sum.size()) {
      return MakeError(
          ErrorKind::kLengthMismatch,
          StrCat("gradient of length ", g.size(), ", expected ", sum.size()));
    }
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
  }
  DPGNN_RETURN_IF_ERROR(
      AddNoiseAndAverage(sum, static_cast<int>(grads.size()), sigma, rng));
  return sum;
}

absl::StatusOr<double> RdpOfGaussian(int alpha, double sensitivity,
                                     double sigma) {
  if (alpha < 2) {
    return MakeError(ErrorKind::kInvalidOrder,
                     StrCat("order must be >= 2, got ", alpha));
  }
  if (!(sigma > 0.0)) {
    return MakeError(ErrorKind::kZeroSigma,
                     StrCat("sigma must be positive, got ", sigma));
  }
  if (!(sensitivity >= 0.0)) {
    return MakeError(ErrorKind::kConfigInvalid, "sensitivity must be >= 0");
  }
  return alpha * sensitivity * sensitivity / (2.0 * sigma * sigma);
}

absl::StatusOr<double> AmplifiedRdp(double q, double sensitivity, double sigma,
                                    int alpha) {
  if (!(q > 0.0 && q <= 1.0)) {
    return MakeError(ErrorKind::kInvalidRate,
                     StrCat("sampling rate must be in (0, 1], got ", q));
  }
  DPGNN_ASSIGN_OR_RETURN(const double direct,
                         RdpOfGaussian(alpha, sensitivity, sigma));
  const double log_q = std::log(q);
  std::vector<double> terms;
  terms.reserve(alpha - 1);

  const double g2 = 2.0 * sensitivity * sensitivity / (2.0 * sigma * sigma);
  const double log_min2 =
      std::min(std::log(4.0) + std::log(std::expm1(g2)), std::log(2.0) + g2);
  terms.push_back(2.0 * log_q + LogBinomial(alpha, 2) + log_min2);
  for (int j = 3; j <= alpha; ++j) {
    const double gj = j * sensitivity * sensitivity / (2.0 * sigma * sigma);
    terms.push_back(std::log(2.0) + j * log_q + LogBinomial(alpha, j) +
                    (j - 1) * gj);
  }
  const double amplified = Log1pSumExp(terms) / (alpha - 1);
  return std::min(amplified, direct);
}

absl::StatusOr<double> RdpToDp(double alpha, double gamma, double delta) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    return MakeError(ErrorKind::kInvalidOrder,
                     StrCat("order must be > 1, got ", alpha));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return MakeError(ErrorKind::kInvalidDelta,
                     StrCat("delta must be in (0, 1), got ", delta));
  }
  if (!(gamma >= 0.0)) {
    return MakeError(ErrorKind::kConfigInvalid,
                     StrCat("RDP budget must be >= 0, got ", gamma));
  }
  const double eps = gamma + std::log((alpha - 1.0) / alpha) -
                     (std::log(delta) + std::log(alpha)) / (alpha - 1.0);
  return std::max(eps, 0.0);
}

double ReceptiveFieldBound(int max_degree, int layers) {
  if (max_degree == 0) return 1.0;
  if (max_degree == 1) return layers + 1.0;
  const double k = max_degree;
  return (std::pow(k, layers + 1) - 1.0) / (k - 1.0);
}

double NaiveSensitivityBound(int max_degree, int layers, double clip_norm) {
  return 2.0 * clip_norm * ReceptiveFieldBound(max_degree, layers);
}

}  // namespace dpgnn
