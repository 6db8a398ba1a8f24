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

#ifndef REVCOVER_ENVIRONMENT_HPP_
#define REVCOVER_ENVIRONMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revcover/numeric.hpp"

namespace revcover {

enum class EnvKind { kSingleItem, kMatroid, kPositions };

// Deterministic tie-breaking: agents earlier in `priority` win ties. The
// default prefers lower agent indices.
struct TieBreak {
  std::vector<int> priority;

  static TieBreak Default(int n) {
    TieBreak t;
    t.priority.resize(n);
    for (int i = 0; i < n; ++i) t.priority[i] = i;
    return t;
  }
  // rank[i]: position of agent i in the priority order (0 = most preferred).
  std::vector<int> ranks() const {
    std::vector<int> r(priority.size());
    for (size_t pos = 0; pos < priority.size(); ++pos) r[priority[pos]] = static_cast<int>(pos);
    return r;
  }
};

struct AllocationResult {
  std::uint32_t served_mask = 0;           // single-item / matroid
  std::vector<int> slot_of_agent;          // positions: slot index or -1
  ArrayXd x;                               // per-agent allocation
};

// Feasibility environment: single item, matroid (explicit family for small
// ground sets, partition, or uniform), or position weights.
class Environment {
 public:
  static Environment SingleItem(int n_agents);
  // family: bitmasks of the independent sets (downward closure is completed
  // automatically). Ground set size <= 16.
  static Environment ExplicitMatroid(int n_agents, std::vector<std::uint32_t> family);
  // part_of[i]: part id per agent; capacity per part.
  static Environment PartitionMatroid(std::vector<int> part_of, std::vector<int> capacity);
  static Environment UniformMatroid(int n_agents, int rank);
  // weights: alpha_1 >= ... >= alpha_m >= 0, strictly decreasing after dedup.
  static Environment Positions(int n_agents, std::vector<double> weights);

  EnvKind kind() const { return kind_; }
  int n_agents() const { return n_; }
  bool is_matroid() const { return kind_ == EnvKind::kMatroid; }
  int num_slots() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& position_weights() const { return weights_; }

  bool independent(std::uint32_t mask) const;
  int rank_of(std::uint32_t mask) const;

  // Greedy max-weight allocation (optimal for matroids); positions fill slots
  // in bid order. Negative bids are a domain error.
  AllocationResult max_weight_allocation(const ArrayXd& bids, const TieBreak& tie) const;

  // Minimal bid for agent i to be served against the other agents' bids
  // (entries of `bids` at positions != i; bids[i] ignored). Reported as the
  // infimum, ignoring tie-breaking.
  double threshold_bid(const ArrayXd& bids, int i, const TieBreak& tie) const;

  // Positions: per-slot threshold stairs against others' bids (slot j is held
  // by the j-th highest competing bid; 0 if vacant).
  std::vector<double> threshold_stairs(const ArrayXd& bids, int i, const TieBreak& tie) const;

  // Fractional feasibility per the environment's polytope; matroid rank
  // inequalities are checked by subset enumeration (n <= 16).
  bool is_feasible(const ArrayXd& x) const;

  std::string describe() const;

  // Test support: exhaustive max-weight independent set.
  double brute_force_max_weight(const ArrayXd& bids, std::uint32_t* best_mask) const;

 private:
  Environment() = default;

  EnvKind kind_ = EnvKind::kSingleItem;
  int n_ = 0;
  std::vector<double> weights_;            // positions
  std::vector<std::uint32_t> family_;      // explicit matroid, sorted
  std::vector<int> part_of_;               // partition matroid
  std::vector<int> capacity_;
  int uniform_rank_ = 0;
  enum class MatroidForm { kNone, kExplicit, kPartition, kUniform };
  MatroidForm matroid_form_ = MatroidForm::kNone;
};

}  // namespace revcover

#endif  // REVCOVER_ENVIRONMENT_HPP_
