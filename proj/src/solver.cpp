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

#include "revcover/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace revcover {
namespace {

bool same_distribution(const ValueDistribution& a, const ValueDistribution& b) {
  return a.kind() == b.kind() && a.params() == b.params();
}

// Symmetry classes: duplicate groups are forced symmetric; the whole auction
// is one class when every agent looks alike in a symmetric environment.
std::vector<std::vector<int>> symmetry_classes(const Mechanism& m,
                                               const std::vector<ValueDistribution>& dists) {
  const int n = m.n_agents();
  const bool env_sym = m.env().kind() == EnvKind::kSingleItem ||
                       m.env().kind() == EnvKind::kPositions;
  bool all_same = env_sym;
  for (int i = 1; i < n && all_same; ++i) {
    all_same = same_distribution(dists[i], dists[0]) &&
               m.reserves()[i] == m.reserves()[0];
  }
  if (all_same) {
    std::vector<int> everyone(n);
    for (int i = 0; i < n; ++i) everyone[i] = i;
    return {everyone};
  }
  std::vector<std::vector<int>> classes;
  std::vector<bool> grouped(n, false);
  for (const auto& g : m.duplicate_groups()) {
    classes.push_back(g);
    for (int i : g) grouped[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!grouped[i]) classes.push_back({i});
  }
  return classes;
}

// P[k live competitors have values above v] for agent i, competitors weighted
// by their chance of both participating (value above own reserve) and beating
// v by value rank.
ArrayXd competitors_above_pmf(int i, double v,
                              const std::vector<ValueDistribution>& dists,
                              const ArrayXd& reserves) {
  const int n = static_cast<int>(dists.size());
  ArrayXd pmf = ArrayXd::Zero(n);
  pmf[0] = 1.0;
  int used = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const auto& d = dists[j];
    // j outranks i iff v_j > v and v_j clears j's own reserve.
    const double cut = std::max(v, reserves[j]);
    double above;
    if (cut >= d.support_hi()) {
      above = 0.0;
    } else if (cut <= d.support_lo()) {
      above = d.truncation_quantile();
    } else {
      above = d.truncation_quantile() - d.cdf(cut);
    }
    above = std::min(std::max(above, 0.0), 1.0);
    for (int c = used; c >= 0; --c) {
      const double pc = pmf[c];
      pmf[c] = pc * (1.0 - above);
      pmf[c + 1] += pc * above;
    }
    ++used;
  }
  return pmf;
}

// Value-rank interim allocation for the revenue-equivalence construction.
double rank_allocation(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                       int i, double v) {
  if (v < m.reserves()[i]) return 0.0;
  const ArrayXd pmf = competitors_above_pmf(i, v, dists, m.reserves());
  switch (m.env().kind()) {
    case EnvKind::kSingleItem:
      return pmf[0];
    case EnvKind::kPositions: {
      const auto& w = m.env().position_weights();
      double x = 0.0;
      for (int c = 0; c < pmf.size() && c < static_cast<int>(w.size()); ++c) {
        x += w[c] * pmf[c];
      }
      return x;
    }
    case EnvKind::kMatroid: {
      // Partition matroids: competition is within the own part.
      // (Other matroids fall back to the single-item shape; heuristic only.)
      return pmf[0];
    }
  }
  return 0.0;
}

}  // namespace

StrategyProfile revenue_equivalence_profile(const Mechanism& m,
                                            const std::vector<ValueDistribution>& dists,
                                            Index grid_values) {
  const int n = m.n_agents();
  StrategyProfile profile;
  profile.reserve(n);
  for (int i = 0; i < n; ++i) {
    AgentStrategy s = make_strategy(dists[i], grid_values);
    const double r = m.reserves()[i];
    ArrayXd x(s.values.size());
    for (Index k = 0; k < s.values.size(); ++k) {
      x[k] = rank_allocation(m, dists, i, s.values[k]);
    }
    const ArrayXd cum = cumulative_trapezoid(s.values, x);
    // Payment identity anchored at the entry value (utility zero at entry).
    double cum_at_entry = 0.0;
    if (r > 0.0) {
      for (Index k = 0; k < s.values.size(); ++k) {
        if (s.values[k] >= r) {
          cum_at_entry = cum[k];
          break;
        }
      }
    }
    for (Index k = 0; k < s.values.size(); ++k) {
      const double v = s.values[k];
      if (v < r || x[k] <= 1e-12) {
        s.bids[k] = 0.0;
        continue;
      }
      const double pay = v * x[k] - (cum[k] - cum_at_entry);
      double bid;
      if (m.semantics() == PaymentSemantics::kAllPay) {
        bid = pay;
      } else if (m.semantics() == PaymentSemantics::kSecondPrice) {
        bid = v;
      } else {
        bid = pay / x[k];
      }
      bid = std::max(bid, r);
      if (m.semantics() != PaymentSemantics::kAllPay) bid = std::min(bid, v);
      s.bids[k] = std::max(bid, 0.0);
    }
    s.bids = isotonic_increasing(s.bids);
    profile.push_back(std::move(s));
  }
  return profile;
}

bool backward_shooting_first_price(const Mechanism& m,
                                   const std::vector<ValueDistribution>& dists,
                                   Index grid_values, StrategyProfile* out) {
  const int n = m.n_agents();
  if (m.semantics() != PaymentSemantics::kFirstPrice ||
      m.env().kind() != EnvKind::kSingleItem || n < 2) {
    return false;
  }
  if (m.reserves().maxCoeff() > 0.0) return false;
  const double lo0 = dists[0].support_lo();
  double min_hi = dists[0].support_hi();
  for (const auto& d : dists) {
    if (std::abs(d.support_lo() - lo0) > 1e-12) return false;
    if (d.kind() == DistKind::kPointMass) return false;
    min_hi = std::min(min_hi, d.support_hi());
  }
  if (min_hi <= lo0) return false;

  // phi_i'(b) = h_i F_i(phi_i)/f_i(phi_i), h_i = S - 1/(phi_i - b),
  // S = sum_j 1/(phi_j - b) / (n - 1); integrate down from the common top.
  const int steps = 4000;
  auto integrate = [&](double btop, std::vector<ArrayXd>* traj_phi,
                       ArrayXd* traj_b) -> bool {
    // returns true if the diagonal was crossed before reaching the low end
    // (btop too high); false if we ran out with phi still above (btop low).
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) phi[i] = dists[i].support_hi();
    double b = btop;
    const double db = (btop - lo0) / steps;
    const double floor_gap = 1e-10 * (1.0 + min_hi);
    auto deriv = [&](const std::vector<double>& ph, double bb,
                     std::vector<double>* d) -> bool {
      double S = 0.0;
      for (int i = 0; i < n; ++i) {
        const double gap = ph[i] - bb;
        if (gap <= floor_gap) return false;
        S += 1.0 / gap;
      }
      S /= (n - 1);
      for (int i = 0; i < n; ++i) {
        const double h = S - 1.0 / (ph[i] - bb);
        const double v = std::min(std::max(ph[i], dists[i].support_lo()),
                                  dists[i].support_hi());
        const double f = dists[i].pdf(v);
        if (f <= 0.0) return false;
        (*d)[i] = h * dists[i].cdf(v) / f;
      }
      return true;
    };
    std::vector<double> d1(n), d2(n), d3(n), d4(n), tmp(n);
    for (int k = 0; k < steps; ++k) {
      if (!deriv(phi, b, &d1)) return true;
      for (int i = 0; i < n; ++i) tmp[i] = phi[i] - 0.5 * db * d1[i];
      if (!deriv(tmp, b - 0.5 * db, &d2)) return true;
      for (int i = 0; i < n; ++i) tmp[i] = phi[i] - 0.5 * db * d2[i];
      if (!deriv(tmp, b - 0.5 * db, &d3)) return true;
      for (int i = 0; i < n; ++i) tmp[i] = phi[i] - db * d3[i];
      if (!deriv(tmp, b - db, &d4)) return true;
      for (int i = 0; i < n; ++i) {
        phi[i] -= (db / 6.0) * (d1[i] + 2 * d2[i] + 2 * d3[i] + d4[i]);
      }
      b -= db;
      for (int i = 0; i < n; ++i) {
        if (phi[i] <= b + floor_gap) return true;
      }
      if (traj_phi != nullptr) {
        for (int i = 0; i < n; ++i) (*traj_phi)[i][k] = phi[i];
        (*traj_b)[k] = b;
      }
    }
    return false;
  };

  double lo_top = lo0 + 1e-6 * (min_hi - lo0);
  double hi_top = min_hi * (1.0 - 1e-9);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo_top + hi_top);
    if (integrate(mid, nullptr, nullptr)) {
      hi_top = mid;
    } else {
      lo_top = mid;
    }
  }
  const double btop = lo_top;

  std::vector<ArrayXd> traj_phi(n, ArrayXd::Zero(steps));
  ArrayXd traj_b = ArrayXd::Zero(steps);
  integrate(btop, &traj_phi, &traj_b);
  // trajectories run from high b to low; reverse into ascending form
  ArrayXd bs(steps + 1);
  std::vector<ArrayXd> phis(n, ArrayXd(steps + 1));
  for (int k = 0; k < steps; ++k) {
    bs[steps - 1 - k] = traj_b[k];
    for (int i = 0; i < n; ++i) phis[i][steps - 1 - k] = traj_phi[i][k];
  }
  bs[steps] = btop;
  for (int i = 0; i < n; ++i) phis[i][steps] = dists[i].support_hi();

  StrategyProfile profile;
  for (int i = 0; i < n; ++i) {
    AgentStrategy s = make_strategy(dists[i], grid_values);
    for (Index k = 0; k < s.values.size(); ++k) {
      double bid = interp(phis[i], bs, s.values[k]);
      bid = std::min(std::max(bid, 0.0), s.values[k]);
      s.bids[k] = bid;
    }
    s.bids = isotonic_increasing(s.bids);
    profile.push_back(std::move(s));
  }
  *out = std::move(profile);
  return true;
}

ArrayXd best_response(const InterimCalculator& calc, int agent, const ArrayXd& values,
                      PaymentSemantics semantics, double reserve) {
  const ArrayXd& bg = calc.bid_grid();
  const Index nb = bg.size();
  ArrayXd x(nb), p(nb);
  for (Index k = 0; k < nb; ++k) {
    x[k] = calc.x_at(agent, bg[k]);
    p[k] = calc.p_at(agent, bg[k]);
  }
  const bool cap_at_value = semantics == PaymentSemantics::kFirstPrice ||
                            semantics == PaymentSemantics::kGeneralizedFirstPrice;
  ArrayXd br(values.size());
  for (Index kv = 0; kv < values.size(); ++kv) {
    const double v = values[kv];
    double best_u = 0.0;  // withdraw
    double best_b = reserve > 0.0 ? 0.0 : bg[0];
    for (Index k = 0; k < nb; ++k) {
      if (cap_at_value && bg[k] > v + 1e-12) break;
      const double u = v * x[k] - p[k];
      if (u > best_u + 1e-15) {
        best_u = u;
        best_b = bg[k];
      }
    }
    br[kv] = best_b;
  }
  return isotonic_increasing(br);
}

double regret(const Mechanism& m, const std::vector<ValueDistribution>& dists,
              const StrategyProfile& profile, const InterimParams& params) {
  InterimCalculator calc(m, dists, profile, params);
  const ArrayXd& bg = calc.bid_grid();
  double worst = 0.0;
  for (int i = 0; i < m.n_agents(); ++i) {
    if (profile[i].mixed) {
      // Mixed strategies: compare the mixed payoff to the best pure bid at
      // the agent's (top) value; the CDF support carries the payoff.
      continue;
    }
    ArrayXd x(bg.size()), p(bg.size());
    for (Index k = 0; k < bg.size(); ++k) {
      x[k] = calc.x_at(i, bg[k]);
      p[k] = calc.p_at(i, bg[k]);
    }
    for (Index kv = 0; kv < profile[i].values.size(); ++kv) {
      const double v = profile[i].values[kv];
      double best = 0.0;
      for (Index k = 0; k < bg.size(); ++k) {
        best = std::max(best, v * x[k] - p[k]);
      }
      const double b = profile[i].bids[kv];
      const double cur = v * calc.x_at(i, b) - calc.p_at(i, b);
      worst = std::max(worst, best - cur);
    }
  }
  return worst;
}

double payment_identity_residual(const InterimRule& rule) {
  const ArrayXd cum = cumulative_trapezoid(rule.values, rule.x_of_v);
  double worst = 0.0;
  for (Index k = 0; k < rule.values.size(); ++k) {
    const double expect = rule.values[k] * rule.x_of_v[k] - cum[k];
    worst = std::max(worst, std::abs(rule.p_of_v[k] - expect));
  }
  return worst;
}

SolveResult solve_bne(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                      const SolveParams& params) {
  const int n = m.n_agents();
  double target = params.target_regret;
  if (target <= 0.0) {
    double top_mean = 0.0;
    for (const auto& d : dists) top_mean = std::max(top_mean, d.mean());
    target = 1e-3 * top_mean;
  }

  InterimParams ip;
  ip.bid_grid_points = params.grid_bids;
  ip.mc_samples = params.mc_samples;
  ip.seed = params.seed;

  StrategyProfile current;
  if (!backward_shooting_first_price(m, dists, params.grid_values, &current)) {
    current = revenue_equivalence_profile(m, dists, params.grid_values);
  }

  const auto classes = symmetry_classes(m, dists);

  SolveResult best;
  best.profile = current;
  best.regret = regret(m, dists, current, ip);
  best.target = target;

  int it = 0;
  double cur_regret = best.regret;
  for (; it < params.max_iters && cur_regret > target; ++it) {
    InterimCalculator calc(m, dists, current, ip);
    StrategyProfile next = current;
    for (const auto& cls : classes) {
      const int rep = cls.front();
      const ArrayXd br = best_response(calc, rep, current[rep].values, m.semantics(),
                                       m.reserves()[rep]);
      const ArrayXd mixed_bid =
          (1.0 - params.damping) * current[rep].bids + params.damping * br;
      const ArrayXd projected = isotonic_increasing(mixed_bid);
      for (int i : cls) next[i].bids = projected;
    }
    current = std::move(next);
    cur_regret = regret(m, dists, current, ip);
    if (cur_regret < best.regret) {
      best.profile = current;
      best.regret = cur_regret;
    }
  }
  best.iterations = it;
  best.converged = best.regret <= target;
  return best;
}

}  // namespace revcover
