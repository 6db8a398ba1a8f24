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

#ifndef REVCOVER_STRATEGY_HPP_
#define REVCOVER_STRATEGY_HPP_

#include <optional>
#include <vector>

#include "revcover/distribution.hpp"
#include "revcover/numeric.hpp"

namespace revcover {

// Mixed action as an explicit bid CDF, applied at every value of the agent.
struct MixedBidCdf {
  ArrayXd bids;  // ascending
  ArrayXd cdf;   // nondecreasing, 0 to 1
};

// Monotone bid function sampled on a quantile-spaced value grid.
struct AgentStrategy {
  ArrayXd quantiles;  // ascending in [0, q_max]
  ArrayXd values;     // quantile(q)
  ArrayXd bids;       // nondecreasing in value
  std::optional<MixedBidCdf> mixed;

  double bid_at(double v) const { return interp(values, bids, v); }
};

using StrategyProfile = std::vector<AgentStrategy>;

inline ArrayXd quantile_grid(const ValueDistribution& d, Index n_points) {
  return linspace(0.0, d.truncation_quantile(), n_points);
}

inline AgentStrategy make_strategy(const ValueDistribution& d, Index n_points) {
  AgentStrategy s;
  s.quantiles = quantile_grid(d, n_points);
  s.values.resize(n_points);
  for (Index k = 0; k < n_points; ++k) s.values[k] = d.quantile(s.quantiles[k]);
  s.bids = ArrayXd::Zero(n_points);
  return s;
}

// Shared bid grid over [0, b_max] with distinguished points (reserves) merged
// so "bid exactly the reserve" is representable.
inline ArrayXd make_bid_grid(double b_max, Index n_points,
                             const std::vector<double>& distinguished) {
  ArrayXd base = linspace(0.0, b_max, n_points);
  const double tol = 1e-12 * (1.0 + b_max);
  std::vector<double> extra;
  for (double t : distinguished) {
    if (t >= 0.0 && t <= b_max) extra.push_back(t);
  }
  return merge_points(base, extra, tol);
}

}  // namespace revcover

#endif  // REVCOVER_STRATEGY_HPP_
