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

#ifndef REVCOVER_COVERING_HPP_
#define REVCOVER_COVERING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revcover/solver.hpp"
#include "revcover/threshold_curve.hpp"

namespace revcover {

enum class CoverMode { kPlain, kWithReserves };

struct MuWitness {
  std::string family;
  StrategyProfile profile;
  ArrayXd x_alt;
  ArrayXd window_lo;  // per-agent action allocation the T windows start from
  double sum_t = 0.0;
  double revenue = 0.0;
  double ratio = 0.0;
};

struct MuEstimate {
  double mu_hat = 0.0;
  bool unbounded = false;  // revenue ~ 0 with positive threshold mass
  int trials = 0;
  MuWitness witness;
};

struct MuParams {
  int trials = 1000;
  int hill_climb_steps = 200;
  Index grid_values = 257;
  Index grid_bids = 257;
  int mc_samples = 4000;
  int value_profiles_per_trial = 4;  // with-reserves participatory draws
  std::uint64_t seed = 7;
};

// Expected revenue of an arbitrary strategy profile: exact interim integrals
// for single-item/positions, common-sample Monte Carlo for matroids.
double profile_revenue(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                       const StrategyProfile& profile, const InterimParams& params);

// Best alternate allocation for given per-agent threshold gains. The sum of
// convex window integrals is maximized at a vertex of the feasible polytope:
// single item serves one agent, matroids serve a max-weight basis, positions
// assign slots.
ArrayXd maximize_alternate_allocation(const Environment& env,
                                      const std::vector<ThresholdCurve>& curves,
                                      const ArrayXd& window_lo, double* sum_t);

// mu-hat = max over sampled strategy profiles, action windows, and feasible
// alternate allocations of sum_i T_i[x~(a_i), x'_i] / Rev. A sampler can only
// lower-bound the true supremum. `fixed_profile` is always included as the
// first trial (the scenario's solved or configured profile).
MuEstimate revenue_covering_mu(const Mechanism& m,
                               const std::vector<ValueDistribution>& dists,
                               const MuParams& params, CoverMode mode,
                               const std::optional<StrategyProfile>& fixed_profile);

// Realized GFP check: revenue of the bid vector vs the worst slot-assignment
// sum of pointwise stair-threshold masses (exact, per realization).
struct GfpPointwise {
  double revenue = 0.0;
  double worst_stair_sum = 0.0;
};
GfpPointwise gfp_pointwise_covering(const Mechanism& m, const ArrayXd& bids);

}  // namespace revcover

#endif  // REVCOVER_COVERING_HPP_
