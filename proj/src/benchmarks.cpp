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

#include "revcover/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "revcover/rng.hpp"

namespace revcover {
namespace {

// Per-agent quantile cells (midpoint + mass) aligned to the distribution's
// breakpoints so integrands with kinks stay accurate.
struct Cells {
  ArrayXd mid_value;
  ArrayXd mass;
};

Cells quantile_cells(const ValueDistribution& d, Index n) {
  ArrayXd edges = linspace(0.0, d.truncation_quantile(), n + 1);
  edges = merge_points(edges, d.quantile_breakpoints(), 1e-12);
  Cells c;
  c.mid_value.resize(edges.size() - 1);
  c.mass.resize(edges.size() - 1);
  for (Index k = 0; k + 1 < edges.size(); ++k) {
    c.mid_value[k] = d.quantile(0.5 * (edges[k] + edges[k + 1]));
    c.mass[k] = edges[k + 1] - edges[k];
  }
  return c;
}

// Max feasible sum of weights (greedy; optimal for matroids and positions).
double best_feasible_sum(const Environment& env, const ArrayXd& weights) {
  const int n = env.n_agents();
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < n; ++i) {
    if (weights[i] > 0.0) order.push_back({weights[i], i});
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  switch (env.kind()) {
    case EnvKind::kSingleItem:
      return order.empty() ? 0.0 : order.front().first;
    case EnvKind::kMatroid: {
      std::uint32_t cur = 0;
      double total = 0.0;
      for (const auto& [wgt, i] : order) {
        const std::uint32_t bit = 1u << i;
        if (env.independent(cur | bit)) {
          cur |= bit;
          total += wgt;
        }
      }
      return total;
    }
    case EnvKind::kPositions: {
      const auto& w = env.position_weights();
      double total = 0.0;
      for (size_t k = 0; k < order.size() && k < w.size(); ++k) {
        total += w[k] * order[k].first;
      }
      return total;
    }
  }
  return 0.0;
}

Estimate integrate_or_sample(const Environment& env,
                             const std::vector<ValueDistribution>& dists,
                             const BenchParams& params,
                             const std::function<double(const ArrayXd&)>& payoff) {
  const int n = static_cast<int>(dists.size());
  Estimate out;
  if (env.kind() == EnvKind::kSingleItem && n <= 3) {
    std::vector<Cells> cells;
    for (const auto& d : dists) cells.push_back(quantile_cells(d, params.grid_per_agent));
    ArrayXd v(n);
    double acc = 0.0;
    if (n == 1) {
      for (Index a = 0; a < cells[0].mass.size(); ++a) {
        v[0] = cells[0].mid_value[a];
        acc += cells[0].mass[a] * payoff(v);
      }
    } else if (n == 2) {
      for (Index a = 0; a < cells[0].mass.size(); ++a) {
        v[0] = cells[0].mid_value[a];
        double inner = 0.0;
        for (Index b = 0; b < cells[1].mass.size(); ++b) {
          v[1] = cells[1].mid_value[b];
          inner += cells[1].mass[b] * payoff(v);
        }
        acc += cells[0].mass[a] * inner;
      }
    } else {
      for (Index a = 0; a < cells[0].mass.size(); ++a) {
        v[0] = cells[0].mid_value[a];
        for (Index b = 0; b < cells[1].mass.size(); ++b) {
          v[1] = cells[1].mid_value[b];
          double inner = 0.0;
          for (Index c = 0; c < cells[2].mass.size(); ++c) {
            v[2] = cells[2].mid_value[c];
            inner += cells[2].mass[c] * payoff(v);
          }
          acc += cells[0].mass[a] * cells[1].mass[b] * inner;
        }
      }
    }
    out.value = acc;
    out.std_error = 0.0;
    return out;
  }
  Rng rng(params.seed);
  ArrayXd v(n);
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < params.mc_samples; ++s) {
    for (int i = 0; i < n; ++i) {
      v[i] = dists[i].quantile(rng.uniform01() * dists[i].truncation_quantile());
    }
    const double y = payoff(v);
    sum += y;
    sum_sq += y * y;
  }
  const double mean = sum / params.mc_samples;
  const double var = std::max(0.0, sum_sq / params.mc_samples - mean * mean);
  out.value = mean;
  out.std_error = std::sqrt(var / params.mc_samples);
  return out;
}

}  // namespace

Estimate optimal_welfare(const Environment& env,
                         const std::vector<ValueDistribution>& dists,
                         const ArrayXd& reserves, const BenchParams& params) {
  const int n = static_cast<int>(dists.size());
  ArrayXd r = reserves.size() == n ? reserves : ArrayXd::Zero(n);
  return integrate_or_sample(env, dists, params, [&](const ArrayXd& v) {
    ArrayXd w(n);
    for (int i = 0; i < n; ++i) w[i] = v[i] >= r[i] ? v[i] : 0.0;
    return best_feasible_sum(env, w);
  });
}

Estimate myerson_revenue(const Environment& env,
                         const std::vector<ValueDistribution>& dists,
                         const BenchParams& params) {
  for (const auto& d : dists) {
    const auto rc = d.check_regular(1024);
    if (!rc.regular) {
      throw std::domain_error("myerson revenue requires regular distributions");
    }
  }
  const int n = static_cast<int>(dists.size());
  return integrate_or_sample(env, dists, params, [&](const ArrayXd& v) {
    ArrayXd w(n);
    for (int i = 0; i < n; ++i) w[i] = dists[i].virtual_value_pos(v[i]);
    return best_feasible_sum(env, w);
  });
}

Measurement measure(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                    const StrategyProfile& profile, const BenchParams& params) {
  const int n = m.n_agents();
  Rng rng(params.seed);
  Measurement out;
  out.agent_revenue.assign(n, 0.0);
  double w_sum = 0, w_sq = 0, r_sum = 0, r_sq = 0, rp_sum = 0, rp_sq = 0,
         rm_sum = 0, rm_sq = 0;
  ArrayXd v(n), bids(n);
  for (int s = 0; s < params.mc_samples; ++s) {
    for (int i = 0; i < n; ++i) {
      v[i] = dists[i].quantile(rng.uniform01() * dists[i].truncation_quantile());
      if (profile[i].mixed) {
        // invert the mixed bid CDF at a uniform draw
        const auto& mx = *profile[i].mixed;
        const double u = rng.uniform01();
        bids[i] = interp(mx.cdf, mx.bids, u);
      } else {
        bids[i] = std::max(profile[i].bid_at(v[i]), 0.0);
      }
    }
    const Outcome oc = m.outcome(bids);
    const double wel = (v * oc.x).sum();
    const double rev = oc.p.sum();
    double rp = 0.0, rm = 0.0;
    for (int i = 0; i < n; ++i) {
      if (oc.x[i] > 0.0) {
        const double phi = dists[i].virtual_value(v[i]);
        if (phi >= 0.0) rp += phi * oc.x[i];
        else rm += -phi * oc.x[i];
      }
      out.agent_revenue[i] += oc.p[i];
    }
    w_sum += wel; w_sq += wel * wel;
    r_sum += rev; r_sq += rev * rev;
    rp_sum += rp; rp_sq += rp * rp;
    rm_sum += rm; rm_sq += rm * rm;
  }
  const double S = params.mc_samples;
  auto fin = [&](double sum, double sq) {
    Estimate e;
    e.value = sum / S;
    e.std_error = std::sqrt(std::max(0.0, sq / S - e.value * e.value) / S);
    return e;
  };
  out.welfare = fin(w_sum, w_sq);
  out.revenue = fin(r_sum, r_sq);
  out.rev_plus = fin(rp_sum, rp_sq);
  out.rev_minus = fin(rm_sum, rm_sq);
  for (double& a : out.agent_revenue) a /= S;
  return out;
}

double welfare_poa_bound(double mu) {
  const double e = std::exp(1.0);
  return (1.0 + mu) * e / (e - 1.0);
}

double duplicates_revenue_bound(double mu, int k) {
  const double e = std::exp(1.0);
  return (static_cast<double>(k) / (k - 1) + mu) * e / (e - 1.0);
}

PoaRow poa_row(const std::string& scenario, const std::string& quantity,
               double equilibrium, double benchmark, double bound) {
  PoaRow row;
  row.scenario = scenario;
  row.quantity = quantity;
  row.equilibrium = equilibrium;
  row.benchmark = benchmark;
  row.bound = bound;
  if (equilibrium <= 1e-9 * (1.0 + std::abs(benchmark))) {
    row.ratio_defined = false;
    row.ratio = 0.0;
    row.pass = false;
    return row;
  }
  row.ratio = benchmark / equilibrium;
  row.pass = row.ratio <= bound + 0.05;
  return row;
}

DuplicatesCheck duplicates_check(const Mechanism& m,
                                 const std::vector<ValueDistribution>& dists,
                                 const StrategyProfile& profile,
                                 const BenchParams& params) {
  if (m.duplicate_groups().empty()) {
    throw std::invalid_argument("duplicates check needs duplicate groups");
  }
  int k = 0;
  for (const auto& g : m.duplicate_groups()) {
    for (int i : g) {
      if (!(dists[i].kind() == dists[g.front()].kind() &&
            dists[i].params() == dists[g.front()].params())) {
        throw std::invalid_argument("duplicate group members must share a distribution");
      }
    }
    k = k == 0 ? static_cast<int>(g.size()) : std::min<int>(k, g.size());
  }
  const Measurement meas = measure(m, dists, profile, params);
  DuplicatesCheck out;
  out.revenue = meas.revenue.value;
  out.rev_plus = meas.rev_plus.value;
  out.bound = (static_cast<double>(k - 1) / k) * meas.rev_plus.value;
  out.slack_3se = 3.0 * std::sqrt(meas.revenue.std_error * meas.revenue.std_error +
                                  meas.rev_plus.std_error * meas.rev_plus.std_error);
  out.pass = out.revenue >= out.bound - out.slack_3se;
  return out;
}

}  // namespace revcover
