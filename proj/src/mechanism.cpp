// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "revcover/mechanism.hpp"

#include <stdexcept>

namespace revcover {

std::string semantics_name(PaymentSemantics s) {
  switch (s) {
    case PaymentSemantics::kFirstPrice: return "first-price";
    case PaymentSemantics::kAllPay: return "all-pay";
    case PaymentSemantics::kSecondPrice: return "second-price";
    case PaymentSemantics::kGeneralizedFirstPrice: return "generalized-first-price";
  }
  return "?";
}

std::optional<PaymentSemantics> semantics_from_name(const std::string& name) {
  if (name == "first-price") return PaymentSemantics::kFirstPrice;
  if (name == "all-pay") return PaymentSemantics::kAllPay;
  if (name == "second-price") return PaymentSemantics::kSecondPrice;
  if (name == "generalized-first-price" || name == "gfp") {
    return PaymentSemantics::kGeneralizedFirstPrice;
  }
  return std::nullopt;
}

Mechanism::Mechanism(PaymentSemantics semantics, Environment env, ArrayXd reserves,
                     TieBreak tie_break, std::vector<std::vector<int>> groups)
    : semantics_(semantics),
      env_(std::move(env)),
      reserves_(std::move(reserves)),
      tie_(std::move(tie_break)),
      groups_(std::move(groups)) {
  const int n = env_.n_agents();
  if (reserves_.size() == 0) reserves_ = ArrayXd::Zero(n);
  if (reserves_.size() != n) throw std::invalid_argument("mechanism: reserve count mismatch");
  if (tie_.priority.empty()) tie_ = TieBreak::Default(n);
  if (static_cast<int>(tie_.priority.size()) != n) {
    throw std::invalid_argument("mechanism: tie-break priority size mismatch");
  }
  for (Index i = 0; i < reserves_.size(); ++i) {
    if (reserves_[i] < 0) throw std::invalid_argument("mechanism: negative reserve");
  }
  if (semantics_ == PaymentSemantics::kSecondPrice && env_.kind() != EnvKind::kSingleItem) {
    throw std::invalid_argument("second-price semantics requires a single-item environment");
  }
  if (semantics_ == PaymentSemantics::kGeneralizedFirstPrice &&
      env_.kind() != EnvKind::kPositions) {
    throw std::invalid_argument("generalized first price requires a positions environment");
  }
  if (semantics_ == PaymentSemantics::kAllPay && reserves_.maxCoeff() > 0) {
    // Reserves are not reliably implementable in all-pay; kept but flagged.
    all_pay_reserve_warning_ = true;
  }
  for (const auto& g : groups_) {
    // Duplicate groups must make co-service infeasible: an indicator of any
    // two group members must violate feasibility.
    for (size_t a = 0; a + 1 < g.size(); ++a) {
      for (size_t b = a + 1; b < g.size(); ++b) {
        ArrayXd pair = ArrayXd::Zero(n);
        pair[g[a]] = 1.0;
        pair[g[b]] = 1.0;
        if (env_.kind() == EnvKind::kPositions || env_.is_feasible(pair)) {
          throw std::invalid_argument(
              "duplicate group members must not be jointly servable");
        }
      }
    }
  }
}

Mechanism Mechanism::Make(PaymentSemantics semantics, Environment env, ArrayXd reserves,
                          TieBreak tie, std::vector<std::vector<int>> groups) {
  return Mechanism(semantics, std::move(env), std::move(reserves), std::move(tie),
                   std::move(groups));
}

Outcome Mechanism::outcome(const ArrayXd& bids) const {
  const int n = env_.n_agents();
  if (bids.size() != n) throw std::invalid_argument("outcome: bid count mismatch");
  for (Index i = 0; i < bids.size(); ++i) {
    if (bids[i] < 0) throw std::domain_error("outcome: negative bid");
  }

  // Bids below the reserve are withdrawn: they cannot win and pay nothing.
  ArrayXd live = bids;
  std::vector<bool> withdrawn(n, false);
  for (int i = 0; i < n; ++i) {
    if (bids[i] < reserves_[i]) {
      withdrawn[i] = true;
      live[i] = 0.0;
    }
  }
  // Run the allocation among live bidders only: withdrawn agents are removed
  // by forcing their bid to 0 and stripping any allocation afterwards.
  AllocationResult alloc = env_.max_weight_allocation(live, tie_);
  for (int i = 0; i < n; ++i) {
    if (withdrawn[i]) {
      alloc.x[i] = 0.0;
      alloc.served_mask &= ~(1u << i);
      if (!alloc.slot_of_agent.empty()) alloc.slot_of_agent[i] = -1;
    }
  }

  Outcome out;
  out.alloc = alloc;
  out.x = alloc.x;
  out.p = ArrayXd::Zero(n);
  switch (semantics_) {
    case PaymentSemantics::kFirstPrice:
      for (int i = 0; i < n; ++i) {
        if (!withdrawn[i] && alloc.x[i] > 0) out.p[i] = bids[i];
      }
      break;
    case PaymentSemantics::kAllPay:
      for (int i = 0; i < n; ++i) {
        if (!withdrawn[i]) out.p[i] = bids[i];
      }
      break;
    case PaymentSemantics::kSecondPrice: {
      for (int i = 0; i < n; ++i) {
        if (withdrawn[i] || alloc.x[i] <= 0) continue;
        double second = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j != i && !withdrawn[j]) second = std::max(second, bids[j]);
        }
        out.p[i] = std::max(second, reserves_[i]);
      }
      break;
    }
    case PaymentSemantics::kGeneralizedFirstPrice: {
      const auto& w = env_.position_weights();
      for (int i = 0; i < n; ++i) {
        const int slot = alloc.slot_of_agent.empty() ? -1 : alloc.slot_of_agent[i];
        if (!withdrawn[i] && slot >= 0) out.p[i] = w[slot] * bids[i];
      }
      break;
    }
  }
  return out;
}

double equivalent_bid(double interim_alloc, double interim_payment) {
  if (interim_alloc <= 0) {
    throw std::domain_error("equivalent bid undefined at zero interim allocation");
  }
  return interim_payment / interim_alloc;
}

}  // namespace revcover
