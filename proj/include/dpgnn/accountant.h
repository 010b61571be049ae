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

#ifndef DPGNN_ACCOUNTANT_H_
#define DPGNN_ACCOUNTANT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpgnn {

// Tracks the RDP budget spent at a grid of integer orders and converts it to
// (epsilon, delta)-DP on demand. Composition is additive per order.
class RdpAccountant {
 public:
  struct Epsilon {
    double epsilon = 0.0;
    int order = 0;
  };

  // Orders 2..64.
  static std::vector<int> DefaultOrders();

  static absl::StatusOr<RdpAccountant> Create(
      double delta, std::vector<int> orders = DefaultOrders());

  // Per-order RDP of one subsampled Gaussian step.
  absl::StatusOr<std::vector<double>> StepCost(double q, double sensitivity,
                                               double sigma) const;

  // spent[alpha] += AmplifiedRdp(q, sensitivity, sigma, alpha).
  absl::Status Accumulate(double q, double sensitivity, double sigma);
  absl::Status AccumulateCost(std::span<const double> cost);

  // min over orders of RdpToDp(alpha, spent[alpha], delta), with the argmin
  // order (smallest order on ties). Computed from the current state.
  Epsilon CurrentEpsilon() const;

  // Epsilon as it would be after adding `cost`, without modifying the state.
  absl::StatusOr<Epsilon> EpsilonAfter(std::span<const double> cost) const;

  const std::vector<int>& orders() const { return orders_; }
  const std::vector<double>& spent() const { return spent_; }
  double delta() const { return delta_; }
  int64_t steps() const { return steps_; }

  // {"orders": [...], "spent": [...], "delta": d, "steps": n}
  std::string ToJson() const;
  static absl::StatusOr<RdpAccountant> FromJson(std::string_view text);

 private:
  RdpAccountant(double delta, std::vector<int> orders);

  Epsilon EpsilonOf(std::span<const double> spent) const;

  double delta_;
  std::vector<int> orders_;
  std::vector<double> spent_;
  int64_t steps_ = 0;
};

}  // namespace dpgnn

#endif  // DPGNN_ACCOUNTANT_H_
