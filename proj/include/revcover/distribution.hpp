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

#ifndef REVCOVER_DISTRIBUTION_HPP_
#define REVCOVER_DISTRIBUTION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "revcover/numeric.hpp"

namespace revcover {

enum class DistKind {
  kUniform,
  kExponential,
  kEqualRevenue,
  kPointMass,
  kPiecewiseLinearCdf,
};

struct RegularityWitness {
  double v_lo = 0.0;
  double v_hi = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
};

struct RegularityCheck {
  bool regular = true;
  std::optional<RegularityWitness> witness;
};

// One agent's private-value distribution: CDF/PDF/quantile and the Myerson
// virtual-value machinery phi(v) = v - (1 - F(v)) / f(v).
//
// Unbounded kinds are truncated at quantile q_max; the CDF is kept
// un-renormalized, so F maps the stored support onto [F(lo), q_max].
class ValueDistribution {
 public:
  static ValueDistribution Uniform(double lo, double hi);
  static ValueDistribution Exponential(double rate);
  // Equal-revenue F(v) = 1 - lo/v on [lo, cap], the residual mass at the cap
  // spread over a steep linear CDF segment of width smoothing * (cap - lo).
  // smoothing == 0 keeps the atom at the cap (formula checks only).
  static ValueDistribution EqualRevenue(double lo, double cap,
                                        double smoothing = 1e-4);
  // Uniform sliver on [value - width, value]; stands in for a deterministic
  // value without introducing an atom.
  static ValueDistribution PointMass(double value, double width = 1e-4);
  // Knots (v_k, F_k), both nondecreasing, F front 0 and back 1.
  static ValueDistribution PiecewiseLinearCdf(std::vector<double> vs,
                                              std::vector<double> Fs);

  DistKind kind() const { return kind_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double truncation_quantile() const { return q_max_; }

  double cdf(double v) const;
  double pdf(double v) const;
  // (F, f) with a domain check naming the support.
  std::pair<double, double> evaluate(double v) const;
  // inf{v : F(v) >= q}; q in [0, q_max].
  double quantile(double q) const;

  double virtual_value(double v) const;
  double virtual_value_pos(double v) const;  // max(phi, 0)
  double virtual_value_neg(double v) const;  // min(phi, 0)

  // phi^{-1}(0) by bisection on the quantile grid; support endpoint when phi
  // is one-signed. Rejects non-regular distributions.
  double monopoly_reserve() const;

  RegularityCheck check_regular(int grid_points = 1024) const;

  double mean() const;

  // Quantiles where the CDF changes analytic form; integration grids align
  // cells to these so kinked integrands stay accurate.
  std::vector<double> quantile_breakpoints() const;

  // Serialization tag + numeric parameters, mirrored by the scenario config.
  std::string describe() const;
  const std::vector<double>& params() const { return params_; }

 private:
  ValueDistribution() = default;

  DistKind kind_ = DistKind::kUniform;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double q_max_ = 1.0;
  std::vector<double> params_;  // kind-specific, see factory functions
  // piecewise knots
  ArrayXd knot_v_;
  ArrayXd knot_F_;
};

}  // namespace revcover

#endif  // REVCOVER_DISTRIBUTION_HPP_
