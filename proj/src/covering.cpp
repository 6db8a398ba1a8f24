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

#include "revcover/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "revcover/rng.hpp"

namespace revcover {
namespace {

constexpr double kTiny = 1e-12;

StrategyProfile constant_bid_profile(const std::vector<ValueDistribution>& dists,
                                     Index grid_values, const ArrayXd& levels,
                                     bool cap_at_value) {
  StrategyProfile prof;
  for (size_t i = 0; i < dists.size(); ++i) {
    AgentStrategy s = make_strategy(dists[i], grid_values);
    for (Index k = 0; k < s.bids.size(); ++k) {
      s.bids[k] = cap_at_value ? std::min(levels[i], s.values[k]) : levels[i];
    }
    prof.push_back(std::move(s));
  }
  return prof;
}

StrategyProfile truthful_profile(const std::vector<ValueDistribution>& dists,
                                 Index grid_values) {
  StrategyProfile prof;
  for (const auto& d : dists) {
    AgentStrategy s = make_strategy(d, grid_values);
    s.bids = s.values;
    prof.push_back(std::move(s));
  }
  return prof;
}

// Monotone piecewise-linear random strategy: bids interpolate random knot
// fractions of value at quantile-spaced knots.
StrategyProfile random_pl_profile(const std::vector<ValueDistribution>& dists,
                                  Index grid_values, Rng* rng) {
  StrategyProfile prof;
  const int knots = 5;
  for (const auto& d : dists) {
    AgentStrategy s = make_strategy(d, grid_values);
    ArrayXd kq = linspace(0.0, d.truncation_quantile(), knots);
    ArrayXd kv(knots), kb(knots);
    double frac = rng->uniform01();
    for (int k = 0; k < knots; ++k) {
      kv[k] = d.quantile(kq[k]);
      frac = std::min(1.0, std::max(0.0, frac + 0.5 * (rng->uniform01() - 0.4)));
      kb[k] = kv[k] * frac;
    }
    kb = isotonic_increasing(kb);
    for (Index k = 0; k < s.values.size(); ++k) {
      s.bids[k] = std::min(interp(kv, kb, s.values[k]), s.values[k]);
    }
    s.bids = isotonic_increasing(s.bids);
    prof.push_back(std::move(s));
  }
  return prof;
}

// Enumerate injective slot assignments maximizing sum of per-agent window
// integrals T_i[lo_i, alpha_slot].
double best_positions_assignment(const Environment& env,
                                 const std::vector<ThresholdCurve>& curves,
                                 const ArrayXd& window_lo, ArrayXd* x_alt) {
  const int n = static_cast<int>(curves.size());
  const auto& w = env.position_weights();
  const int m = static_cast<int>(w.size());
  std::vector<int> assign(m, -1);
  std::vector<bool> used(n, false);
  double best = 0.0;
  std::vector<int> best_assign(m, -1);
  std::function<void(int, double)> rec = [&](int slot, double acc) {
    if (slot == m) {
      if (acc > best) {
        best = acc;
        best_assign = assign;
      }
      return;
    }
    // leaving the slot empty is allowed (downward closure)
    assign[slot] = -1;
    rec(slot + 1, acc);
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double gain = curves[i].cumulative(window_lo[i], w[slot], true);
      used[i] = true;
      assign[slot] = i;
      rec(slot + 1, acc + gain);
      used[i] = false;
    }
    assign[slot] = -1;
  };
  rec(0, 0.0);
  *x_alt = ArrayXd::Zero(n);
  for (int slot = 0; slot < m; ++slot) {
    if (best_assign[slot] >= 0) (*x_alt)[best_assign[slot]] = w[slot];
  }
  return best;
}

}  // namespace

double profile_revenue(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                       const StrategyProfile& profile, const InterimParams& params) {
  InterimCalculator calc(m, dists, profile, params);
  if (m.env().is_matroid()) return calc.matroid_mc_revenue();
  double total = 0.0;
  for (int i = 0; i < m.n_agents(); ++i) {
    const auto& s = profile[i];
    ArrayXd pv(s.values.size());
    for (Index k = 0; k < s.values.size(); ++k) {
      pv[k] = calc.p_at(i, s.bids[k]);
    }
    total += trapezoid(s.quantiles, pv);
  }
  return total;
}

ArrayXd maximize_alternate_allocation(const Environment& env,
                                      const std::vector<ThresholdCurve>& curves,
                                      const ArrayXd& window_lo, double* sum_t) {
  const int n = static_cast<int>(curves.size());
  ArrayXd x_alt = ArrayXd::Zero(n);
  switch (env.kind()) {
    case EnvKind::kSingleItem: {
      double best = 0.0;
      int arg = -1;
      for (int i = 0; i < n; ++i) {
        const double gain = curves[i].cumulative(window_lo[i], 1.0, true);
        if (gain > best) {
          best = gain;
          arg = i;
        }
      }
      if (arg >= 0) x_alt[arg] = 1.0;
      *sum_t = best;
      return x_alt;
    }
    case EnvKind::kMatroid: {
      // Greedy max-weight basis with weights T_i[lo_i, 1].
      std::vector<std::pair<double, int>> order;
      for (int i = 0; i < n; ++i) {
        order.push_back({curves[i].cumulative(window_lo[i], 1.0, true), i});
      }
      std::sort(order.begin(), order.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      std::uint32_t current = 0;
      double total = 0.0;
      for (const auto& [gain, i] : order) {
        if (gain <= 0.0) break;
        const std::uint32_t bit = 1u << i;
        if (env.independent(current | bit)) {
          current |= bit;
          x_alt[i] = 1.0;
          total += gain;
        }
      }
      *sum_t = total;
      return x_alt;
    }
    case EnvKind::kPositions: {
      *sum_t = best_positions_assignment(env, curves, window_lo, &x_alt);
      return x_alt;
    }
  }
  *sum_t = 0.0;
  return x_alt;
}

namespace {

struct TrialEval {
  double ratio = 0.0;
  bool unbounded = false;
  bool valid = false;
  MuWitness witness;
};

TrialEval evaluate_profile(const Mechanism& m, const std::vector<ValueDistribution>& dists,
                           const StrategyProfile& profile, const MuParams& params,
                           CoverMode mode, Rng* rng, const std::string& family) {
  const int n = m.n_agents();
  InterimParams ip;
  ip.bid_grid_points = params.grid_bids;
  ip.mc_samples = params.mc_samples;
  ip.seed = params.seed;
  InterimCalculator calc(m, dists, profile, ip);

  std::vector<InterimRule> rules;
  std::vector<ThresholdCurve> curves;
  rules.reserve(n);
  for (int i = 0; i < n; ++i) {
    rules.push_back(calc.interim_rule(i));
    curves.emplace_back(rules.back());
  }
  double rev;
  if (m.env().is_matroid()) {
    rev = calc.matroid_mc_revenue();
  } else {
    rev = 0.0;
    for (int i = 0; i < n; ++i) {
      rev += trapezoid(profile[i].quantiles, rules[i].p_of_v);
    }
  }

  TrialEval out;
  auto consider = [&](const ArrayXd& lo, const std::vector<bool>& in_sum) {
    // Agents outside the sum get a degenerate window (lo = 1).
    ArrayXd window = lo;
    for (int i = 0; i < n; ++i) {
      if (!in_sum[i]) window[i] = 1.0;
    }
    double sum_t = 0.0;
    const ArrayXd x_alt = maximize_alternate_allocation(m.env(), curves, window, &sum_t);
    if (sum_t <= kTiny) return;
    double ratio;
    bool unb = false;
    if (rev <= kTiny) {
      ratio = std::numeric_limits<double>::infinity();
      unb = true;
    } else {
      ratio = sum_t / rev;
    }
    if (!out.valid || ratio > out.ratio) {
      out.valid = true;
      out.ratio = ratio;
      out.unbounded = unb;
      out.witness.family = family;
      out.witness.profile = profile;
      out.witness.x_alt = x_alt;
      out.witness.window_lo = window;
      out.witness.sum_t = sum_t;
      out.witness.revenue = rev;
      out.witness.ratio = ratio;
    }
  };

  if (mode == CoverMode::kPlain) {
    // The withdraw action maximizes every window.
    ArrayXd lo = ArrayXd::Zero(n);
    std::vector<bool> all(n, true);
    consider(lo, all);
  } else {
    // Participatory actions at sampled value profiles: the cheapest
    // participatory window per agent, summing over agents above reserve.
    for (int draw = 0; draw < params.value_profiles_per_trial; ++draw) {
      ArrayXd lo = ArrayXd::Zero(n);
      std::vector<bool> in_sum(n, false);
      for (int i = 0; i < n; ++i) {
        const double q = rng->uniform01() * dists[i].truncation_quantile();
        const double v = dists[i].quantile(q);
        if (v <= m.reserves()[i]) continue;  // excluded from the sum
        in_sum[i] = true;
        // smallest x~ among actions with beta <= v and x~ > 0; withdraw is
        // participatory only when no action is profitable.
        double best_x = std::numeric_limits<double>::infinity();
        bool any_profitable = false;
        const auto& rule = rules[i];
        for (Index k = 0; k < rule.bid_grid.size(); ++k) {
          const double x = rule.x_of_b[k];
          if (x <= 0.0) continue;
          const double beta = rule.p_of_b[k] / x;
          if (v * x - rule.p_of_b[k] > kTiny) any_profitable = true;
          if (beta <= v + 1e-12) best_x = std::min(best_x, x);
        }
        if (!std::isfinite(best_x)) best_x = any_profitable ? 1.0 : 0.0;
        if (!any_profitable) best_x = 0.0;  // withdraw treated as participatory
        lo[i] = best_x;
      }
      consider(lo, in_sum);
    }
  }
  return out;
}

}  // namespace

MuEstimate revenue_covering_mu(const Mechanism& m,
                               const std::vector<ValueDistribution>& dists,
                               const MuParams& params, CoverMode mode,
                               const std::optional<StrategyProfile>& fixed_profile) {
  Rng rng(params.seed);
  MuEstimate est;
  est.mu_hat = 0.0;

  auto absorb = [&](const TrialEval& t) {
    if (!t.valid) return;
    if (t.unbounded) {
      if (!est.unbounded) {
        est.unbounded = true;
        est.mu_hat = std::numeric_limits<double>::infinity();
        est.witness = t.witness;
      }
      return;
    }
    if (!est.unbounded && t.ratio > est.mu_hat) {
      est.mu_hat = t.ratio;
      est.witness = t.witness;
    }
  };

  StrategyProfile best_profile;
  double best_ratio = -1.0;

  auto run_trial = [&](const StrategyProfile& prof, const std::string& fam) {
    Rng trial_rng = rng.spawn(static_cast<std::uint64_t>(est.trials) + 101);
    const TrialEval t = evaluate_profile(m, dists, prof, params, mode, &trial_rng, fam);
    ++est.trials;
    absorb(t);
    if (t.valid && !t.unbounded && t.ratio > best_ratio) {
      best_ratio = t.ratio;
      best_profile = prof;
    }
  };

  if (fixed_profile) run_trial(*fixed_profile, "fixed");
  run_trial(truthful_profile(dists, params.grid_values), "truthful");

  while (est.trials < params.trials) {
    const int family = est.trials % 2;
    if (family == 0) {
      ArrayXd levels(m.n_agents());
      for (int i = 0; i < m.n_agents(); ++i) {
        levels[i] = rng.uniform(0.0, dists[i].support_hi());
      }
      run_trial(constant_bid_profile(dists, params.grid_values, levels,
                                     m.semantics() != PaymentSemantics::kAllPay),
                "constant");
    } else {
      run_trial(random_pl_profile(dists, params.grid_values, &rng), "piecewise");
    }
  }

  // Adversarial local search on the bids of the best profile found.
  if (best_ratio > 0.0 && !est.unbounded && params.hill_climb_steps > 0) {
    StrategyProfile cur = best_profile;
    double cur_ratio = best_ratio;
    for (int step = 0; step < params.hill_climb_steps; ++step) {
      StrategyProfile cand = cur;
      const int agent = rng.uniform_int(m.n_agents());
      auto& bids = cand[agent].bids;
      const Index kv = static_cast<Index>(rng.uniform_int(static_cast<int>(bids.size())));
      const double scale = 0.1 * (1.0 + dists[agent].support_hi());
      const double delta = scale * rng.normal() * 0.3;
      // shift the tail from kv on, keep monotone and undominated
      for (Index k = kv; k < bids.size(); ++k) {
        double b = bids[k] + delta;
        if (m.semantics() != PaymentSemantics::kAllPay) {
          b = std::min(b, cand[agent].values[k]);
        }
        bids[k] = std::max(b, 0.0);
      }
      bids = isotonic_increasing(bids);
      Rng trial_rng = rng.spawn(static_cast<std::uint64_t>(est.trials) + 7001);
      const TrialEval t =
          evaluate_profile(m, dists, cand, params, mode, &trial_rng, "hill-climb");
      ++est.trials;
      absorb(t);
      if (t.valid && !t.unbounded && t.ratio > cur_ratio) {
        cur_ratio = t.ratio;
        cur = std::move(cand);
      }
    }
  }
  return est;
}

GfpPointwise gfp_pointwise_covering(const Mechanism& m, const ArrayXd& bids) {
  if (m.semantics() != PaymentSemantics::kGeneralizedFirstPrice) {
    throw std::invalid_argument("pointwise covering check is a GFP diagnostic");
  }
  GfpPointwise out;
  out.revenue = m.outcome(bids).revenue();

  const auto& w = m.env().position_weights();
  const int n = m.n_agents();
  const int slots = static_cast<int>(w.size());
  // Stair mass for agent i taking slot j: sum_{k >= j} (alpha_k - alpha_k+1)
  // times the bid of the current occupant of slot k among the others.
  auto stair_mass = [&](int i, int j) {
    const auto stairs = m.env().threshold_stairs(bids, i, m.tie_break());
    double acc = 0.0;
    for (int k = j; k < slots; ++k) {
      const double next = k + 1 < slots ? w[k + 1] : 0.0;
      acc += (w[k] - next) * stairs[k];
    }
    return acc;
  };
  // Worst feasible x': injective assignment of agents to slots.
  std::vector<bool> used(n, false);
  double best = 0.0;
  std::function<void(int, double)> rec = [&](int slot, double acc) {
    if (slot == slots) {
      best = std::max(best, acc);
      return;
    }
    rec(slot + 1, acc);
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      rec(slot + 1, acc + stair_mass(i, slot));
      used[i] = false;
    }
  };
  rec(0, 0.0);
  out.worst_stair_sum = best;
  return out;
}

}  // namespace revcover
