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

#include "revcover/threshold_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace revcover {

ThresholdCurve::ThresholdCurve(const InterimRule& rule, Index z_points) {
  // Collect (x~, beta) pairs over the bid grid; x~ is nondecreasing in the
  // bid, so a suffix minimum over beta gives tau at each achievable level.
  struct Pt { double x, beta; };
  std::vector<Pt> pts;
  pts.reserve(rule.bid_grid.size());
  for (Index k = 0; k < rule.bid_grid.size(); ++k) {
    const double x = rule.x_of_b[k];
    if (x <= 0.0) continue;
    pts.push_back({x, rule.p_of_b[k] / x});
  }
  reachable_ = 0.0;
  for (const auto& pt : pts) reachable_ = std::max(reachable_, pt.x);
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });

  z_ = linspace(0.0, 1.0, z_points);
  tau_ = ArrayXd::Zero(z_points);
  if (pts.empty()) {
    prefix_ = ArrayXd::Zero(z_points);
    return;
  }
  // suffix minima of beta in x-order
  std::vector<double> sufmin(pts.size());
  double running = std::numeric_limits<double>::infinity();
  for (Index k = static_cast<Index>(pts.size()) - 1; k >= 0; --k) {
    running = std::min(running, pts[k].beta);
    sufmin[k] = running;
  }
  tau_top_ = pts.back().beta;
  for (Index k = 0; k < z_points; ++k) {
    const double z = z_[k];
    if (z > reachable_) {
      tau_[k] = tau_top_;  // only used by clamped windows
      continue;
    }
    // first point with x >= z
    const auto it = std::lower_bound(
        pts.begin(), pts.end(), z,
        [](const Pt& a, double zz) { return a.x < zz; });
    tau_[k] = sufmin[it - pts.begin()];
  }
  // tau is a minimum over a shrinking action set, nondecreasing by
  // construction; enforce against floating noise.
  for (Index k = 1; k < z_points; ++k) tau_[k] = std::max(tau_[k], tau_[k - 1]);
  prefix_ = cumulative_trapezoid(z_, tau_);
}

double ThresholdCurve::tau_at(double z) const { return interp(z_, tau_, z); }

double ThresholdCurve::cumulative(double x_lo, double x_hi, bool clamp,
                                  bool* clamped) const {
  if (clamped != nullptr) *clamped = false;
  if (x_hi <= x_lo) return 0.0;
  if (x_lo < -1e-9 || x_hi > 1.0 + 1e-9) {
    throw std::domain_error("cumulative threshold: window outside [0, 1]");
  }
  if (x_hi > reachable_ + 1e-9) {
    if (!clamp) {
      std::ostringstream os;
      os << "unreachable allocation window: requested " << x_hi
         << " but the best achievable interim allocation is " << reachable_;
      throw std::domain_error(os.str());
    }
    if (clamped != nullptr) *clamped = true;
  }
  const double a = interp(z_, prefix_, x_lo);
  const double b = interp(z_, prefix_, x_hi);
  return b - a;
}

namespace {

// integral over [lo, hi] of (v - u/z) dz = v (hi - lo) - u ln(hi / lo)
double indifference_integral(double v, double u, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (u <= 0.0) return v * (hi - lo);
  return v * (hi - lo) - u * std::log(hi / lo);
}

double t_hat(double v, double u_of_v, double x_lo, double x_hi) {
  if (v <= 0.0 || x_hi <= x_lo) return 0.0;
  const double start = std::max(x_lo, u_of_v / v);  // below this v - u/z < 0
  return std::max(0.0, indifference_integral(v, u_of_v, start, x_hi));
}

}  // namespace

CoveringMargin value_covering_margin(const ThresholdCurve& curve, double v,
                                     double x_of_v, double u_of_v, double x_alt) {
  CoveringMargin out;
  out.t = curve.cumulative(x_of_v, x_alt, /*clamp=*/true, &out.clamped);
  out.t_hat = t_hat(v, u_of_v, x_of_v, x_alt);
  out.margin = v * x_of_v + out.t - value_covering_fraction() * v * x_alt;
  return out;
}

CoveringMargin virtual_covering_margin(const ThresholdCurve& curve, double v,
                                       double phi_pos, double x_of_v, double u_of_v,
                                       double x_alt) {
  CoveringMargin out;
  if (phi_pos <= 0.0) {
    out.trivially_ok = true;
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  out.t = curve.cumulative(x_of_v, x_alt, /*clamp=*/true, &out.clamped);
  out.t_hat = t_hat(v, u_of_v, x_of_v, x_alt);
  out.margin = phi_pos * x_of_v + out.t - value_covering_fraction() * phi_pos * x_alt;
  return out;
}

}  // namespace revcover
