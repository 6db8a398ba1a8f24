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

#ifndef REVCOVER_THRESHOLD_CURVE_HPP_
#define REVCOVER_THRESHOLD_CURVE_HPP_

#include "revcover/interim.hpp"

namespace revcover {

// tau(z): cheapest equivalent bid beta = p~/x~ over actions with x~ >= z.
// Actions with x~ = 0 are excluded from the minimization. Quantiles above the
// best achievable allocation are unreachable.
class ThresholdCurve {
 public:
  // Built from an agent's bid-indexed interim rule.
  ThresholdCurve(const InterimRule& rule, Index z_points = 513);

  const ArrayXd& z() const { return z_; }
  const ArrayXd& tau() const { return tau_; }
  double max_reachable() const { return reachable_; }
  bool reachable(double z) const { return z <= reachable_ + 1e-9; }

  double tau_at(double z) const;

  // T[x_lo, x_hi] = integral of tau; zero when x_hi <= x_lo. Throws an
  // unreachable-allocation error when the window needs quantiles beyond the
  // best achievable allocation, unless clamp is set (then tau is held at the
  // mechanism's largest equivalent bid and *clamped is flagged).
  double cumulative(double x_lo, double x_hi, bool clamp = false,
                    bool* clamped = nullptr) const;

 private:
  ArrayXd z_;
  ArrayXd tau_;
  ArrayXd prefix_;  // running integral of tau over z
  double reachable_ = 0.0;
  double tau_top_ = 0.0;
};

// Signed value-covering margin at (v, x') plus the indifference-curve bound:
//   margin = v x(v) + T[x(v), x'] - (e-1)/e v x'
//   t_hat  = integral over [max(x, u/v), x'] of (v - u/z) when positive.
struct CoveringMargin {
  double margin = 0.0;
  double t = 0.0;       // T[x(v), x']
  double t_hat = 0.0;   // the proof's lower bound on T
  bool clamped = false; // x' needed clamped tau beyond the reachable range
  bool trivially_ok = false;  // virtual variant with phi+ = 0
};

CoveringMargin value_covering_margin(const ThresholdCurve& curve, double v,
                                     double x_of_v, double u_of_v, double x_alt);

// Same inequality with phi+ in place of v (virtual-value covering). The T-hat
// bound still uses the value-based indifference curve.
CoveringMargin virtual_covering_margin(const ThresholdCurve& curve, double v,
                                       double phi_pos, double x_of_v, double u_of_v,
                                       double x_alt);

}  // namespace revcover

#endif  // REVCOVER_THRESHOLD_CURVE_HPP_
