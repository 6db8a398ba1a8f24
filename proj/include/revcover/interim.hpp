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

#ifndef REVCOVER_INTERIM_HPP_
#define REVCOVER_INTERIM_HPP_

#include <cstdint>
#include <vector>

#include "revcover/mechanism.hpp"
#include "revcover/strategy.hpp"

namespace revcover {

// Interim allocation/payment of one agent: bid-indexed on the shared bid grid
// and value-indexed on the agent's value grid.
struct InterimRule {
  ArrayXd bid_grid;
  ArrayXd x_of_b;
  ArrayXd p_of_b;
  ArrayXd values;
  ArrayXd x_of_v;
  ArrayXd p_of_v;
  ArrayXd u_of_v;
};

struct InterimParams {
  Index bid_grid_points = 513;
  int mc_samples = 4000;
  std::uint64_t seed = 1;
};

// Interim rules induced by a strategy profile. Single-item and positions use
// exact products / order statistics of the competitor bid CDFs; matroids use
// seeded Monte Carlo over competitor value draws.
class InterimCalculator {
 public:
  InterimCalculator(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                    const StrategyProfile& profile, InterimParams params);

  const ArrayXd& bid_grid() const { return bid_grid_; }

  // Pr[agent j's realized bid <= t] (strict < t when inclusive = false),
  // counting the whole value distribution; withdrawn mass sits at its bid.
  double bid_cdf(int j, double t, bool inclusive = true) const;
  // Pr[agent j withdraws] = Pr[bid_j < reserve_j].
  double withdraw_prob(int j) const;

  // Exact interim allocation of agent i bidding b (grid-free evaluation).
  double x_at(int i, double b) const;
  double p_at(int i, double b) const;
  double utility_at(int i, double v, double b) const;

  InterimRule interim_rule(int i) const;

  // Effective bid with the deterministic sub-grid tie offset baked in.
  double effective_bid(int i, double b) const;
  double offset_unit() const { return offset_unit_; }

  // Matroid path only: realized expected revenue over the same common value
  // samples the thresholds came from.
  double matroid_mc_revenue() const { return mc_revenue_; }

 private:
  ArrayXd x_on_grid(int i) const;
  ArrayXd p_from_x(int i, const ArrayXd& x) const;
  void prepare_matroid_thresholds();

  const Mechanism& m_;
  const std::vector<ValueDistribution>& dists_;
  const StrategyProfile& profile_;
  InterimParams params_;
  ArrayXd bid_grid_;
  double offset_unit_ = 0.0;
  std::vector<int> ranks_;
  // matroid: per-agent sorted effective-bid thresholds from common samples
  std::vector<std::vector<double>> mc_thresholds_;
  double mc_revenue_ = 0.0;
  mutable std::vector<ArrayXd> x_grid_cache_;
  mutable std::vector<bool> x_grid_ready_;
};

}  // namespace revcover

#endif  // REVCOVER_INTERIM_HPP_
