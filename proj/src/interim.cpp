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

#include "revcover/interim.hpp"

#include <algorithm>
#include <cmath>

#include "revcover/rng.hpp"

namespace revcover {
namespace {

// Measure of {q : bids(q) <= t} (or < t) for a nondecreasing bid array over a
// quantile grid; linear interpolation inside strictly increasing cells, jumps
// across flat cells.
double strategy_bid_cdf(const ArrayXd& q, const ArrayXd& bids, double t,
                        bool inclusive) {
  const Index n = bids.size();
  const double eps = 0.0;
  auto le = [&](double b) { return inclusive ? (b <= t + eps) : (b < t - eps); };
  if (!le(bids[0])) return 0.0;
  if (le(bids[n - 1])) return q[n - 1];
  // binary search: last index with le(bids[k])
  Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    if (le(bids[mid])) lo = mid; else hi = mid;
  }
  const double db = bids[hi] - bids[lo];
  if (db <= 0.0) return q[lo];
  double w = (t - bids[lo]) / db;
  if (w < 0.0) w = 0.0;
  if (w > 1.0) w = 1.0;
  return q[lo] + w * (q[hi] - q[lo]);
}

}  // namespace

InterimCalculator::InterimCalculator(const Mechanism& m,
                                     const std::vector<ValueDistribution>& dists,
                                     const StrategyProfile& profile,
                                     InterimParams params)
    : m_(m), dists_(dists), profile_(profile), params_(params) {
  const int n = m_.n_agents();
  double b_max = 0.0;
  for (const auto& s : profile_) {
    if (s.bids.size() > 0) b_max = std::max(b_max, s.bids[s.bids.size() - 1]);
    if (s.mixed) b_max = std::max(b_max, s.mixed->bids[s.mixed->bids.size() - 1]);
  }
  for (const auto& d : dists_) b_max = std::max(b_max, d.support_hi());
  std::vector<double> marks;
  for (Index i = 0; i < m_.reserves().size(); ++i) marks.push_back(m_.reserves()[i]);
  bid_grid_ = make_bid_grid(b_max, params_.bid_grid_points, marks);
  offset_unit_ = (bid_grid_[1] - bid_grid_[0]) / (2.0 * n);
  ranks_ = m_.tie_break().ranks();
  x_grid_cache_.resize(n);
  x_grid_ready_.assign(n, false);
  if (m_.env().is_matroid()) prepare_matroid_thresholds();
}

double InterimCalculator::effective_bid(int i, double b) const {
  const int n = m_.n_agents();
  return b + (n - 1 - ranks_[i]) * offset_unit_;
}

double InterimCalculator::bid_cdf(int j, double t, bool inclusive) const {
  const auto& s = profile_[j];
  if (s.mixed) return interp(s.mixed->bids, s.mixed->cdf, t);
  return strategy_bid_cdf(s.quantiles, s.bids, t, inclusive);
}

double InterimCalculator::withdraw_prob(int j) const {
  const double r = m_.reserves()[j];
  if (r <= 0.0) return 0.0;
  return bid_cdf(j, r, /*inclusive=*/false);
}

double InterimCalculator::x_at(int i, double b) const {
  if (b < m_.reserves()[i]) return 0.0;
  const int n = m_.n_agents();
  const double ei = effective_bid(i, b);
  switch (m_.env().kind()) {
    case EnvKind::kSingleItem: {
      double prod = 1.0;
      for (int j = 0; j < n && prod > 0.0; ++j) {
        if (j == i) continue;
        const double t = ei - (n - 1 - ranks_[j]) * offset_unit_;
        prod *= std::max(bid_cdf(j, t), withdraw_prob(j));
      }
      return prod;
    }
    case EnvKind::kPositions: {
      // Probability of c live competitors above me, then slot c+1.
      const auto& w = m_.env().position_weights();
      std::vector<double> count(n, 0.0);
      count[0] = 1.0;
      int used = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double t = ei - (n - 1 - ranks_[j]) * offset_unit_;
        const double lose = std::max(bid_cdf(j, t), withdraw_prob(j));
        const double above = 1.0 - lose;
        for (int c = used; c >= 0; --c) {
          const double pc = count[c];
          count[c] = pc * lose;
          count[c + 1] += pc * above;
        }
        ++used;
      }
      double x = 0.0;
      for (int c = 0; c < n && c < static_cast<int>(w.size()); ++c) {
        x += w[c] * count[c];
      }
      return x;
    }
    case EnvKind::kMatroid: {
      const auto& th = mc_thresholds_[i];
      if (th.empty()) return 0.0;
      const auto it = std::lower_bound(th.begin(), th.end(), ei);
      return static_cast<double>(it - th.begin()) / static_cast<double>(th.size());
    }
  }
  return 0.0;
}

double InterimCalculator::p_at(int i, double b) const {
  const double r = m_.reserves()[i];
  switch (m_.semantics()) {
    case PaymentSemantics::kFirstPrice:
    case PaymentSemantics::kGeneralizedFirstPrice:
      return b < r ? 0.0 : b * x_at(i, b);
    case PaymentSemantics::kAllPay:
      return b < r ? 0.0 : b;
    case PaymentSemantics::kSecondPrice: {
      if (b < r) return 0.0;
      // E[threshold; threshold <= b] = b x(b) - integral of x up to b.
      const ArrayXd& bg = bid_grid_;
      double acc = 0.0;
      double prev_b = bg[0], prev_x = x_at(i, prev_b);
      for (Index k = 1; k < bg.size() && prev_b < b; ++k) {
        const double cur_b = std::min(bg[k], b);
        const double cur_x = x_at(i, cur_b);
        acc += 0.5 * (prev_x + cur_x) * (cur_b - prev_b);
        prev_b = cur_b;
        prev_x = cur_x;
      }
      return b * x_at(i, b) - acc;
    }
  }
  return 0.0;
}

double InterimCalculator::utility_at(int i, double v, double b) const {
  return v * x_at(i, b) - p_at(i, b);
}

ArrayXd InterimCalculator::x_on_grid(int i) const {
  if (!x_grid_ready_[i]) {
    ArrayXd x(bid_grid_.size());
    for (Index k = 0; k < bid_grid_.size(); ++k) x[k] = x_at(i, bid_grid_[k]);
    x_grid_cache_[i] = x;
    x_grid_ready_[i] = true;
  }
  return x_grid_cache_[i];
}

ArrayXd InterimCalculator::p_from_x(int i, const ArrayXd& x) const {
  const ArrayXd& bg = bid_grid_;
  const double r = m_.reserves()[i];
  ArrayXd p(bg.size());
  switch (m_.semantics()) {
    case PaymentSemantics::kFirstPrice:
    case PaymentSemantics::kGeneralizedFirstPrice:
      for (Index k = 0; k < bg.size(); ++k) p[k] = bg[k] < r ? 0.0 : bg[k] * x[k];
      break;
    case PaymentSemantics::kAllPay:
      for (Index k = 0; k < bg.size(); ++k) p[k] = bg[k] < r ? 0.0 : bg[k];
      break;
    case PaymentSemantics::kSecondPrice: {
      const ArrayXd cum = cumulative_trapezoid(bg, x);
      for (Index k = 0; k < bg.size(); ++k) {
        p[k] = bg[k] < r ? 0.0 : bg[k] * x[k] - cum[k];
      }
      break;
    }
  }
  return p;
}

InterimRule InterimCalculator::interim_rule(int i) const {
  InterimRule rule;
  rule.bid_grid = bid_grid_;
  rule.x_of_b = x_on_grid(i);
  rule.p_of_b = p_from_x(i, rule.x_of_b);
  const auto& s = profile_[i];
  rule.values = s.values;
  rule.x_of_v.resize(s.values.size());
  rule.p_of_v.resize(s.values.size());
  rule.u_of_v.resize(s.values.size());
  for (Index k = 0; k < s.values.size(); ++k) {
    const double b = s.bids[k];
    rule.x_of_v[k] = x_at(i, b);
    rule.p_of_v[k] = p_at(i, b);
    rule.u_of_v[k] = s.values[k] * rule.x_of_v[k] - rule.p_of_v[k];
  }
  return rule;
}

void InterimCalculator::prepare_matroid_thresholds() {
  const int n = m_.n_agents();
  mc_thresholds_.assign(n, {});
  Rng rng(params_.seed);
  ArrayXd ebids(n);
  ArrayXd raw(n);
  const TieBreak& tie = m_.tie_break();
  double rev_acc = 0.0;
  for (int s = 0; s < params_.mc_samples; ++s) {
    // Common value draw for all agents; thresholds per agent exclude itself.
    for (int j = 0; j < n; ++j) {
      const double q = rng.uniform01() * dists_[j].truncation_quantile();
      const double v = dists_[j].quantile(q);
      double b = profile_[j].bid_at(v);
      raw[j] = std::max(b, 0.0);
      if (b < m_.reserves()[j]) {
        ebids[j] = 0.0;  // withdrawn: zero-weight, displaced for free
      } else {
        ebids[j] = effective_bid(j, b);
      }
    }
    for (int i = 0; i < n; ++i) {
      mc_thresholds_[i].push_back(m_.env().threshold_bid(ebids, i, tie));
    }
    rev_acc += m_.outcome(raw).revenue();
  }
  mc_revenue_ = rev_acc / std::max(params_.mc_samples, 1);
  for (auto& th : mc_thresholds_) std::sort(th.begin(), th.end());
}

}  // namespace revcover
