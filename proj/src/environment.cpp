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

#include "revcover/environment.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace revcover {
namespace {

constexpr double kFeasTol = 1e-9;

// Sort agent indices by descending bid, ties by tie-break rank.
std::vector<int> bid_order(const ArrayXd& bids, const std::vector<int>& ranks,
                           const std::vector<int>& agents) {
  std::vector<int> order = agents;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (bids[a] != bids[b]) return bids[a] > bids[b];
    return ranks[a] < ranks[b];
  });
  return order;
}

}  // namespace

Environment Environment::SingleItem(int n_agents) {
  if (n_agents < 1) throw std::invalid_argument("env: need at least one agent");
  Environment e;
  e.kind_ = EnvKind::kSingleItem;
  e.n_ = n_agents;
  return e;
}

Environment Environment::ExplicitMatroid(int n_agents,
                                         std::vector<std::uint32_t> family) {
  if (n_agents < 1 || n_agents > 16) {
    throw std::invalid_argument("explicit matroid: ground set size must be in [1, 16]");
  }
  Environment e;
  e.kind_ = EnvKind::kMatroid;
  e.matroid_form_ = MatroidForm::kExplicit;
  e.n_ = n_agents;
  // Downward closure: include every subset of every listed set.
  std::set<std::uint32_t> closed;
  closed.insert(0u);
  for (std::uint32_t m : family) {
    if (m >= (1u << n_agents)) {
      throw std::invalid_argument("explicit matroid: set outside ground set");
    }
    // enumerate submasks
    std::uint32_t sub = m;
    while (true) {
      closed.insert(sub);
      if (sub == 0) break;
      sub = (sub - 1) & m;
    }
  }
  e.family_.assign(closed.begin(), closed.end());
  return e;
}

Environment Environment::PartitionMatroid(std::vector<int> part_of,
                                          std::vector<int> capacity) {
  Environment e;
  e.kind_ = EnvKind::kMatroid;
  e.matroid_form_ = MatroidForm::kPartition;
  e.n_ = static_cast<int>(part_of.size());
  if (e.n_ < 1) throw std::invalid_argument("partition matroid: empty");
  for (int p : part_of) {
    if (p < 0 || p >= static_cast<int>(capacity.size())) {
      throw std::invalid_argument("partition matroid: part id out of range");
    }
  }
  for (int c : capacity) {
    if (c < 0) throw std::invalid_argument("partition matroid: negative capacity");
  }
  e.part_of_ = std::move(part_of);
  e.capacity_ = std::move(capacity);
  return e;
}

Environment Environment::UniformMatroid(int n_agents, int rank) {
  if (n_agents < 1 || rank < 0) throw std::invalid_argument("uniform matroid: bad args");
  Environment e;
  e.kind_ = EnvKind::kMatroid;
  e.matroid_form_ = MatroidForm::kUniform;
  e.n_ = n_agents;
  e.uniform_rank_ = rank;
  return e;
}

Environment Environment::Positions(int n_agents, std::vector<double> weights) {
  Environment e;
  e.kind_ = EnvKind::kPositions;
  e.n_ = n_agents;
  // Deduplicate equal weights and drop zeros at the tail; alpha_{m+1} = 0.
  std::vector<double> w;
  for (double a : weights) {
    if (a < 0) throw std::invalid_argument("positions: negative weight");
    if (!w.empty() && a > w.back() + 1e-15) {
      throw std::invalid_argument("positions: weights must be nonincreasing");
    }
    if (w.empty() || a < w.back() - 1e-15) {
      if (a > 0) w.push_back(a);
    }
  }
  if (w.empty()) throw std::invalid_argument("positions: need a positive weight");
  e.weights_ = std::move(w);
  return e;
}

bool Environment::independent(std::uint32_t mask) const {
  switch (matroid_form_) {
    case MatroidForm::kExplicit:
      return std::binary_search(family_.begin(), family_.end(), mask);
    case MatroidForm::kPartition: {
      std::vector<int> used(capacity_.size(), 0);
      for (int i = 0; i < n_; ++i) {
        if (mask & (1u << i)) {
          if (++used[part_of_[i]] > capacity_[part_of_[i]]) return false;
        }
      }
      return true;
    }
    case MatroidForm::kUniform:
      return std::popcount(mask) <= uniform_rank_;
    case MatroidForm::kNone:
      break;
  }
  if (kind_ == EnvKind::kSingleItem) return std::popcount(mask) <= 1;
  throw std::logic_error("independence oracle undefined for this environment");
}

int Environment::rank_of(std::uint32_t mask) const {
  // Greedy closure: matroid rank is independent of insertion order.
  std::uint32_t current = 0;
  int rank = 0;
  for (int i = 0; i < n_; ++i) {
    const std::uint32_t bit = 1u << i;
    if ((mask & bit) && independent(current | bit)) {
      current |= bit;
      ++rank;
    }
  }
  return rank;
}

AllocationResult Environment::max_weight_allocation(const ArrayXd& bids,
                                                    const TieBreak& tie) const {
  if (bids.size() != n_) throw std::invalid_argument("allocation: bid count mismatch");
  for (Index i = 0; i < bids.size(); ++i) {
    if (bids[i] < 0) throw std::domain_error("allocation: negative bid");
  }
  const std::vector<int> ranks = tie.ranks();
  std::vector<int> agents(n_);
  std::iota(agents.begin(), agents.end(), 0);
  const std::vector<int> order = bid_order(bids, ranks, agents);

  AllocationResult out;
  out.x = ArrayXd::Zero(n_);
  out.slot_of_agent.assign(n_, -1);

  switch (kind_) {
    case EnvKind::kSingleItem: {
      const int winner = order.front();
      out.served_mask = 1u << winner;
      out.x[winner] = 1.0;
      break;
    }
    case EnvKind::kMatroid: {
      std::uint32_t current = 0;
      for (int i : order) {
        const std::uint32_t bit = 1u << i;
        if (independent(current | bit)) {
          current |= bit;
          out.x[i] = 1.0;
        }
      }
      out.served_mask = current;
      break;
    }
    case EnvKind::kPositions: {
      const int m = num_slots();
      for (int slot = 0; slot < m && slot < n_; ++slot) {
        const int agent = order[slot];
        out.slot_of_agent[agent] = slot;
        out.x[agent] = weights_[slot];
        out.served_mask |= 1u << agent;
      }
      break;
    }
  }
  return out;
}

double Environment::threshold_bid(const ArrayXd& bids, int i,
                                  const TieBreak& tie) const {
  const std::vector<int> ranks = tie.ranks();
  switch (kind_) {
    case EnvKind::kSingleItem: {
      double best = 0.0;
      for (Index j = 0; j < bids.size(); ++j) {
        if (j != i) best = std::max(best, bids[j]);
      }
      return best;
    }
    case EnvKind::kPositions: {
      const auto stairs = threshold_stairs(bids, i, tie);
      return stairs.back();
    }
    case EnvKind::kMatroid: {
      // Greedy basis of the others; i enters free if independent with it,
      // otherwise must outbid the cheapest element whose exchange keeps the
      // set independent (the replacement property).
      std::vector<int> others;
      for (int j = 0; j < n_; ++j) {
        if (j != i) others.push_back(j);
      }
      const std::vector<int> order = bid_order(bids, ranks, others);
      std::uint32_t current = 0;
      for (int j : order) {
        const std::uint32_t bit = 1u << j;
        if (independent(current | bit)) current |= bit;
      }
      const std::uint32_t bit_i = 1u << i;
      if (independent(current | bit_i)) return 0.0;
      double best = std::numeric_limits<double>::infinity();
      for (int j : order) {
        const std::uint32_t bit_j = 1u << j;
        if ((current & bit_j) && independent((current & ~bit_j) | bit_i)) {
          best = std::min(best, bids[j]);
        }
      }
      if (!std::isfinite(best)) {
        // i is a loop (never independent); treat as unreachable.
        return std::numeric_limits<double>::infinity();
      }
      return best;
    }
  }
  return 0.0;
}

std::vector<double> Environment::threshold_stairs(const ArrayXd& bids, int i,
                                                  const TieBreak& tie) const {
  if (kind_ != EnvKind::kPositions) {
    throw std::logic_error("threshold stairs only defined for positions");
  }
  std::vector<double> others;
  for (Index j = 0; j < bids.size(); ++j) {
    if (j != i) others.push_back(bids[j]);
  }
  std::sort(others.begin(), others.end(), std::greater<double>());
  std::vector<double> stairs(num_slots(), 0.0);
  for (int slot = 0; slot < num_slots(); ++slot) {
    stairs[slot] = slot < static_cast<int>(others.size()) ? others[slot] : 0.0;
  }
  return stairs;
}

bool Environment::is_feasible(const ArrayXd& x) const {
  if (x.size() != n_) return false;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < -kFeasTol || x[i] > 1.0 + kFeasTol) return false;
  }
  switch (kind_) {
    case EnvKind::kSingleItem:
      return x.sum() <= 1.0 + kFeasTol;
    case EnvKind::kPositions: {
      std::vector<double> sorted(x.data(), x.data() + x.size());
      std::sort(sorted.begin(), sorted.end(), std::greater<double>());
      for (size_t k = 0; k < sorted.size(); ++k) {
        const double cap = k < weights_.size() ? weights_[k] : 0.0;
        if (sorted[k] > cap + kFeasTol) return false;
      }
      return true;
    }
    case EnvKind::kMatroid: {
      if (n_ > 16) throw std::length_error("matroid feasibility: ground set > 16 unsupported");
      for (std::uint32_t mask = 1; mask < (1u << n_); ++mask) {
        double sum = 0.0;
        for (int i = 0; i < n_; ++i) {
          if (mask & (1u << i)) sum += x[i];
        }
        if (sum > rank_of(mask) + kFeasTol) return false;
      }
      return true;
    }
  }
  return false;
}

double Environment::brute_force_max_weight(const ArrayXd& bids,
                                           std::uint32_t* best_mask) const {
  if (kind_ == EnvKind::kPositions || n_ > 16) {
    throw std::logic_error("brute force max weight: matroid/single-item, n <= 16");
  }
  double best = -1.0;
  std::uint32_t arg = 0;
  for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
    if (!independent(mask)) continue;
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (mask & (1u << i)) sum += bids[i];
    }
    if (sum > best) {
      best = sum;
      arg = mask;
    }
  }
  if (best_mask != nullptr) *best_mask = arg;
  return best;
}

std::string Environment::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case EnvKind::kSingleItem:
      os << "single-item";
      break;
    case EnvKind::kPositions: {
      os << "positions";
      for (double w : weights_) os << " " << w;
      break;
    }
    case EnvKind::kMatroid:
      switch (matroid_form_) {
        case MatroidForm::kPartition: {
          os << "partition";
          for (int p : part_of_) os << " " << p;
          os << " /";
          for (int c : capacity_) os << " " << c;
          break;
        }
        case MatroidForm::kUniform:
          os << "uniform-matroid rank " << uniform_rank_;
          break;
        default:
          os << "explicit-matroid sets " << family_.size();
          break;
      }
      break;
  }
  return os.str();
}

}  // namespace revcover
