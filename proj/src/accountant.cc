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

#include "dpgnn/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpgnn/privacy.h"
#include "dpgnn/status.h"
#include "dpgnn/strings.h"
#include "json.hpp"

namespace dpgnn {

std::vector<int> RdpAccountant::DefaultOrders() {
  std::vector<int> orders;
  for (int alpha = 2; alpha <= 64; ++alpha) orders.push_back(alpha);
  return orders;
}

RdpAccountant::RdpAccountant(double delta, std::vector<int> orders)
    : delta_(delta), orders_(std::move(orders)), spent_(orders_.size(), 0.0) {}

absl::StatusOr<RdpAccountant> RdpAccountant::Create(double delta,
                                                    std::vector<int> orders) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return MakeError(ErrorKind::kInvalidDelta,
                     StrCat("delta must be in (0, 1), got ", delta));
  }
  if (orders.empty()) {
    return MakeError(ErrorKind::kInvalidOrder, "no orders to track");
  }
  for (int alpha : orders) {
    if (alpha < 2) {
      return MakeError(ErrorKind::kInvalidOrder,
                       StrCat("order must be >= 2, got ", alpha));
    }
  }
  return RdpAccountant(delta, std::move(orders));
}

absl::StatusOr<std::vector<double>> RdpAccountant::StepCost(
    double q, double sensitivity, double sigma) const {
  std::vector<double> cost;
  cost.reserve(orders_.size());
  for (int alpha : orders_) {
    DPGNN_ASSIGN_OR_RETURN(double gamma,
                           AmplifiedRdp(q, sensitivity, sigma, alpha));
    cost.push_back(gamma);
  }
  return cost;
}

absl::Status RdpAccountant::Accumulate(double q, double sensitivity,
                                       double sigma) {
  DPGNN_ASSIGN_OR_RETURN(std::vector<double> cost,
                         StepCost(q, sensitivity, sigma));
  return AccumulateCost(cost);
}

absl::Status RdpAccountant::AccumulateCost(std::span<const double> cost) {
  if (cost.size() != spent_.size()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     "cost vector does not match tracked orders");
  }
  for (double c : cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      return MakeError(ErrorKind::kNonFiniteInput,
                       "per-step RDP cost must be finite and >= 0");
    }
  }
  for (size_t i = 0; i < cost.size(); ++i) spent_[i] += cost[i];
  ++steps_;
  return absl::OkStatus();
}

RdpAccountant::Epsilon RdpAccountant::EpsilonOf(
    std::span<const double> spent) const {
  Epsilon best{std::numeric_limits<double>::infinity(), orders_.front()};
  for (size_t i = 0; i < orders_.size(); ++i) {
    // Inputs were validated on the way in, so conversion cannot fail.
    const double eps = RdpToDp(orders_[i], spent[i], delta_).value();
    if (eps < best.epsilon) best = {eps, orders_[i]};
  }
  return best;
}

RdpAccountant::Epsilon RdpAccountant::CurrentEpsilon() const {
  return EpsilonOf(spent_);
}

absl::StatusOr<RdpAccountant::Epsilon> RdpAccountant::EpsilonAfter(
    std::span<const double> cost) const {
  RdpAccountant next = *this;
  DPGNN_RETURN_IF_ERROR(next.AccumulateCost(cost));
  return next.CurrentEpsilon();
}

std::string RdpAccountant::ToJson() const {
  nlohmann::json doc = {{"orders", orders_},
                        {"spent", spent_},
                        {"delta", delta_},
                        {"steps", steps_}};
  return doc.dump();
}

absl::StatusOr<RdpAccountant> RdpAccountant::FromJson(std::string_view text) {
  nlohmann::json doc =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorKind::kMalformedInput,
                     "accountant state is not JSON");
  }
  try {
    DPGNN_ASSIGN_OR_RETURN(RdpAccountant acc,
                           Create(doc.at("delta").get<double>(),
                                  doc.at("orders").get<std::vector<int>>()));
    std::vector<double> spent = doc.at("spent").get<std::vector<double>>();
    if (spent.size() != acc.orders_.size()) {
      return MakeError(ErrorKind::kCountMismatch,
                       "spent and orders differ in length");
    }
    for (double s : spent) {
      if (!(s >= 0.0)) {
        return MakeError(ErrorKind::kMalformedInput, "negative spent budget");
      }
    }
    acc.spent_ = std::move(spent);
    acc.steps_ = doc.value("steps", int64_t{0});
    return acc;
  } catch (const nlohmann::json::exception& e) {
    return MakeError(ErrorKind::kMalformedInput,
                     StrCat("bad accountant field: ", e.what()));
  }
}

}  // namespace dpgnn
