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

#ifndef REVCOVER_BENCHMARKS_HPP_
#define REVCOVER_BENCHMARKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "revcover/solver.hpp"

namespace revcover {

struct BenchParams {
  Index grid_per_agent = 512;    // tensor quadrature, single item n <= 3
  int mc_samples = 200000;       // Monte Carlo otherwise
  std::uint64_t seed = 11;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for grid quadrature
};

// E[max feasible sum of values among agents with v_i >= r_i]; exact grid
// integration for single-item with n <= 3, seeded Monte Carlo otherwise.
Estimate optimal_welfare(const Environment& env,
                         const std::vector<ValueDistribution>& dists,
                         const ArrayXd& reserves, const BenchParams& params);

// E[max feasible sum of positive virtual values]; the optimal revenue for
// regular distributions. Rejects non-regular inputs.
Estimate myerson_revenue(const Environment& env,
                         const std::vector<ValueDistribution>& dists,
                         const BenchParams& params);

struct Measurement {
  Estimate welfare;
  Estimate revenue;
  Estimate rev_plus;
  Estimate rev_minus;
  std::vector<double> agent_revenue;
};

// Seeded Monte Carlo over value draws (and mixed-strategy bid draws) of the
// profile's realized outcomes.
Measurement measure(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                    const StrategyProfile& profile, const BenchParams& params);

struct PoaRow {
  std::string scenario;
  std::string quantity;  // "welfare" or "revenue"
  double equilibrium = 0.0;
  double benchmark = 0.0;
  double ratio = 0.0;     // benchmark / equilibrium
  double bound = 0.0;     // paper bound for the scenario's mu
  bool ratio_defined = true;
  bool pass = true;
};

PoaRow poa_row(const std::string& scenario, const std::string& quantity,
               double equilibrium, double benchmark, double bound);

// Bounds (1 + mu) e/(e-1) and (k/(k-1) + mu) e/(e-1).
double welfare_poa_bound(double mu);
double duplicates_revenue_bound(double mu, int k);

struct DuplicatesCheck {
  double revenue = 0.0;
  double rev_plus = 0.0;
  double bound = 0.0;  // (k-1)/k rev_plus
  double slack_3se = 0.0;
  bool pass = true;
};

// Rev >= (k-1)/k REV+ - 3 SE for the smallest duplicate-group size k.
DuplicatesCheck duplicates_check(const Mechanism& m,
                                 const std::vector<ValueDistribution>& dists,
                                 const StrategyProfile& profile,
                                 const BenchParams& params);

}  // namespace revcover

#endif  // REVCOVER_BENCHMARKS_HPP_
