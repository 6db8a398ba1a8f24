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

#ifndef REVCOVER_SOLVER_HPP_
#define REVCOVER_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "revcover/interim.hpp"

namespace revcover {

struct SolveParams {
  Index grid_values = 1024;
  Index grid_bids = 513;
  double damping = 0.5;
  int max_iters = 120;
  // Absolute regret target; <= 0 means 1e-3 times the largest mean value.
  double target_regret = 0.0;
  int mc_samples = 4000;
  std::uint64_t seed = 1;
};

struct SolveResult {
  StrategyProfile profile;
  double regret = 0.0;
  bool converged = false;
  int iterations = 0;
  double target = 0.0;
};

// Max over agents and grid values of (best deviation utility - utility of the
// profile's own action); the withdraw action floors deviations at zero.
double regret(const Mechanism& m, const std::vector<ValueDistribution>& dists,
              const StrategyProfile& profile, const InterimParams& params);

// Grid argmax of v x~(b) - p~(b), ties toward the lower bid, first-price
// semantics restricted to undominated bids b <= v, isotonically projected.
ArrayXd best_response(const InterimCalculator& calc, int agent, const ArrayXd& values,
                      PaymentSemantics semantics, double reserve);

// Max over grid values of |p(v) - (v x(v) - int_lo^v x dz)|.
double payment_identity_residual(const InterimRule& rule);

// Damped iterated best response with warm starting. Symmetric configurations
// start from the revenue-equivalence construction (exact up to grid error);
// asymmetric single-item first-price auctions without reserves start from a
// backward-shooting solve of the inverse-bid system (forward iteration is
// unstable there); anything else starts from the same construction as a
// heuristic. The best profile seen (by certified regret) is returned.
SolveResult solve_bne(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                      const SolveParams& params);

// Exposed for tests: the revenue-equivalence strategy construction.
StrategyProfile revenue_equivalence_profile(const Mechanism& m,
                                            const std::vector<ValueDistribution>& dists,
                                            Index grid_values);

// Exposed for tests: backward-shooting inverse-bid solve for asymmetric
// single-item first-price auctions with zero reserves and common support low
// end. Returns false when the configuration is outside its domain.
bool backward_shooting_first_price(const Mechanism& m,
                                   const std::vector<ValueDistribution>& dists,
                                   Index grid_values, StrategyProfile* out);

}  // namespace revcover

#endif  // REVCOVER_SOLVER_HPP_
