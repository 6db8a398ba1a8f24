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

#ifndef REVCOVER_MECHANISM_HPP_
#define REVCOVER_MECHANISM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "revcover/environment.hpp"

namespace revcover {

enum class PaymentSemantics { kFirstPrice, kAllPay, kSecondPrice, kGeneralizedFirstPrice };

std::string semantics_name(PaymentSemantics s);
std::optional<PaymentSemantics> semantics_from_name(const std::string& name);

struct Outcome {
  ArrayXd x;  // allocations
  ArrayXd p;  // payments
  AllocationResult alloc;
  double revenue() const { return p.sum(); }
};

// Payment semantics layered on an environment, with per-bidder bid-space
// reserves and optional duplicate groups.
class Mechanism {
 public:
  Mechanism(PaymentSemantics semantics, Environment env, ArrayXd reserves,
            TieBreak tie_break,
            std::vector<std::vector<int>> duplicate_groups = {});

  static Mechanism Make(PaymentSemantics semantics, Environment env,
                        ArrayXd reserves = {}, TieBreak tie = {},
                        std::vector<std::vector<int>> groups = {});

  PaymentSemantics semantics() const { return semantics_; }
  const Environment& env() const { return env_; }
  const ArrayXd& reserves() const { return reserves_; }
  const TieBreak& tie_break() const { return tie_; }
  const std::vector<std::vector<int>>& duplicate_groups() const { return groups_; }
  int n_agents() const { return env_.n_agents(); }
  bool all_pay_reserve_warning() const { return all_pay_reserve_warning_; }

  // Bids below the reserve are withdraw actions (no allocation, no payment,
  // including all-pay). Payments follow the semantics.
  Outcome outcome(const ArrayXd& bids) const;

 private:
  PaymentSemantics semantics_;
  Environment env_;
  ArrayXd reserves_;
  TieBreak tie_;
  std::vector<std::vector<int>> groups_;
  bool all_pay_reserve_warning_ = false;
};

// Price per unit of allocation of an action: beta = p~ / x~. Requires x~ > 0.
double equivalent_bid(double interim_alloc, double interim_payment);

}  // namespace revcover

#endif  // REVCOVER_MECHANISM_HPP_
