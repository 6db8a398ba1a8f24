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

#include "revcover/distribution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace revcover {
namespace {

constexpr double kExponentialTruncationQuantile = 0.9999;

std::string support_message(double v, double lo, double hi) {
  std::ostringstream os;
  os << "value " << v << " outside support [" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

ValueDistribution ValueDistribution::Uniform(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("uniform: requires hi > lo");
  ValueDistribution d;
  d.kind_ = DistKind::kUniform;
  d.lo_ = lo;
  d.hi_ = hi;
  d.q_max_ = 1.0;
  d.params_ = {lo, hi};
  return d;
}

ValueDistribution ValueDistribution::Exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential: rate must be > 0");
  ValueDistribution d;
  d.kind_ = DistKind::kExponential;
  d.lo_ = 0.0;
  d.q_max_ = kExponentialTruncationQuantile;
  d.hi_ = -std::log1p(-d.q_max_) / rate;
  d.params_ = {rate};
  return d;
}

ValueDistribution ValueDistribution::EqualRevenue(double lo, double cap,
                                                  double smoothing) {
  if (!(lo > 0) || !(cap > lo)) {
    throw std::invalid_argument("equal-revenue: requires 0 < lo < cap");
  }
  if (smoothing < 0 || smoothing >= 0.5) {
    throw std::invalid_argument("equal-revenue: smoothing in [0, 0.5)");
  }
  ValueDistribution d;
  d.kind_ = DistKind::kEqualRevenue;
  d.lo_ = lo;
  d.hi_ = cap;
  d.q_max_ = 1.0;
  d.params_ = {lo, cap, smoothing};
  return d;
}

ValueDistribution ValueDistribution::PointMass(double value, double width) {
  if (!(value > 0) || !(width > 0) || width >= value) {
    throw std::invalid_argument("point-mass: requires 0 < width < value");
  }
  ValueDistribution d;
  d.kind_ = DistKind::kPointMass;
  d.lo_ = value - width;
  d.hi_ = value;
  d.q_max_ = 1.0;
  d.params_ = {value, width};
  return d;
}

ValueDistribution ValueDistribution::PiecewiseLinearCdf(std::vector<double> vs,
                                                        std::vector<double> Fs) {
  if (vs.size() != Fs.size() || vs.size() < 2) {
    throw std::invalid_argument("piecewise cdf: need matching knot arrays, >= 2");
  }
  if (std::abs(Fs.front()) > 1e-12 || std::abs(Fs.back() - 1.0) > 1e-12) {
    throw std::invalid_argument("piecewise cdf: F must run from 0 to 1");
  }
  for (size_t k = 0; k + 1 < vs.size(); ++k) {
    if (vs[k + 1] <= vs[k] || Fs[k + 1] < Fs[k]) {
      throw std::invalid_argument("piecewise cdf: knots must be increasing");
    }
  }
  ValueDistribution d;
  d.kind_ = DistKind::kPiecewiseLinearCdf;
  d.lo_ = vs.front();
  d.hi_ = vs.back();
  d.q_max_ = 1.0;
  d.knot_v_ = Eigen::Map<ArrayXd>(vs.data(), static_cast<Index>(vs.size()));
  d.knot_F_ = Eigen::Map<ArrayXd>(Fs.data(), static_cast<Index>(Fs.size()));
  d.params_.assign(vs.begin(), vs.end());
  d.params_.insert(d.params_.end(), Fs.begin(), Fs.end());
  return d;
}

double ValueDistribution::cdf(double v) const {
  if (v <= lo_) return kind_ == DistKind::kExponential ? 0.0 : 0.0;
  if (v >= hi_) return q_max_;
  switch (kind_) {
    case DistKind::kUniform:
      return (v - lo_) / (hi_ - lo_);
    case DistKind::kExponential:
      return -std::expm1(-params_[0] * v);
    case DistKind::kEqualRevenue: {
      const double lo = params_[0], cap = params_[1], eps = params_[2];
      const double knee = cap - eps * (cap - lo);
      if (v <= knee) return 1.0 - lo / v;
      const double f_knee = 1.0 - lo / knee;
      return f_knee + (1.0 - f_knee) * (v - knee) / (cap - knee);
    }
    case DistKind::kPointMass:
      return (v - lo_) / (hi_ - lo_);
    case DistKind::kPiecewiseLinearCdf:
      return interp(knot_v_, knot_F_, v);
  }
  return 0.0;
}

double ValueDistribution::pdf(double v) const {
  switch (kind_) {
    case DistKind::kUniform:
      return 1.0 / (hi_ - lo_);
    case DistKind::kExponential:
      return params_[0] * std::exp(-params_[0] * v);
    case DistKind::kEqualRevenue: {
      const double lo = params_[0], cap = params_[1], eps = params_[2];
      const double knee = cap - eps * (cap - lo);
      if (v <= knee) return lo / (v * v);
      if (eps == 0.0) return lo / (cap * cap);  // atom retained at the cap
      return (lo / knee) / (cap - knee);
    }
    case DistKind::kPointMass:
      return 1.0 / (hi_ - lo_);
    case DistKind::kPiecewiseLinearCdf: {
      // Exact per-segment slope; right-continuous at knots.
      Index k = upper_index(knot_v_, v);
      if (k < 0) k = 0;
      if (k >= knot_v_.size() - 1) k = knot_v_.size() - 2;
      return (knot_F_[k + 1] - knot_F_[k]) / (knot_v_[k + 1] - knot_v_[k]);
    }
  }
  return 0.0;
}

std::pair<double, double> ValueDistribution::evaluate(double v) const {
  const double slack = 1e-12 * (1.0 + std::abs(hi_));
  if (v < lo_ - slack || v > hi_ + slack) {
    throw std::domain_error(support_message(v, lo_, hi_));
  }
  const double vc = std::min(std::max(v, lo_), hi_);
  return {cdf(vc), pdf(vc)};
}

double ValueDistribution::quantile(double q) const {
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw std::domain_error("quantile: q outside [0, 1]");
  }
  q = std::min(std::max(q, 0.0), q_max_);
  switch (kind_) {
    case DistKind::kUniform:
      return lo_ + q * (hi_ - lo_);
    case DistKind::kExponential:
      return std::min(-std::log1p(-q) / params_[0], hi_);
    case DistKind::kEqualRevenue: {
      const double lo = params_[0], cap = params_[1], eps = params_[2];
      const double knee = cap - eps * (cap - lo);
      const double f_knee = 1.0 - lo / knee;
      if (q <= f_knee) return std::min(lo / (1.0 - q), knee);
      if (cap == knee) return cap;
      return knee + (q - f_knee) / (1.0 - f_knee) * (cap - knee);
    }
    case DistKind::kPointMass:
      return lo_ + q * (hi_ - lo_);
    case DistKind::kPiecewiseLinearCdf: {
      // inf{v : F(v) >= q}; flat CDF stretches resolve to their left edge.
      if (q <= knot_F_[0]) return knot_v_[0];
      for (Index k = 0; k + 1 < knot_F_.size(); ++k) {
        if (q <= knot_F_[k + 1]) {
          const double dF = knot_F_[k + 1] - knot_F_[k];
          if (dF <= 0.0) return knot_v_[k + 1];
          return knot_v_[k] + (q - knot_F_[k]) / dF * (knot_v_[k + 1] - knot_v_[k]);
        }
      }
      return knot_v_[knot_v_.size() - 1];
    }
  }
  return lo_;
}

double ValueDistribution::virtual_value(double v) const {
  const auto [F, f] = evaluate(v);
  if (f <= 0.0) throw std::domain_error("virtual value: density is zero");
  return v - (1.0 - F) / f;
}

double ValueDistribution::virtual_value_pos(double v) const {
  return std::max(virtual_value(v), 0.0);
}

double ValueDistribution::virtual_value_neg(double v) const {
  return std::min(virtual_value(v), 0.0);
}

RegularityCheck ValueDistribution::check_regular(int grid_points) const {
  if (grid_points < 2) throw std::invalid_argument("check_regular: grid_points >= 2");
  RegularityCheck out;
  const double slack = 1e-9;
  double prev_v = quantile(0.0);
  double prev_phi = virtual_value(prev_v);
  for (int k = 1; k < grid_points; ++k) {
    const double q = q_max_ * static_cast<double>(k) / (grid_points - 1);
    const double v = quantile(q);
    if (v <= prev_v) continue;
    const double phi = virtual_value(v);
    if (phi < prev_phi - slack) {
      out.regular = false;
      out.witness = RegularityWitness{prev_v, v, prev_phi, phi};
      return out;
    }
    prev_v = v;
    prev_phi = phi;
  }
  return out;
}

double ValueDistribution::monopoly_reserve() const {
  const RegularityCheck rc = check_regular(1024);
  if (!rc.regular) {
    std::ostringstream os;
    os << "monopoly reserve requires a regular distribution; phi decreases from "
       << rc.witness->phi_lo << " at v=" << rc.witness->v_lo << " to "
       << rc.witness->phi_hi << " at v=" << rc.witness->v_hi;
    throw std::domain_error(os.str());
  }
  const double phi_lo = virtual_value(quantile(0.0));
  const double phi_hi = virtual_value(quantile(q_max_));
  if (phi_lo >= 0.0) return support_lo();
  if (phi_hi <= 0.0) return support_hi();
  const double tol = 1e-9 * (1.0 + std::abs(hi_));
  return bisect([this](double v) { return virtual_value(v); }, support_lo(),
                support_hi(), tol);
}

double ValueDistribution::mean() const {
  // Quantile-space quadrature with cells aligned to breakpoints.
  const int n = 4096;
  ArrayXd q = linspace(0.0, q_max_, n);
  ArrayXd v(n);
  for (Index k = 0; k < n; ++k) v[k] = quantile(q[k]);
  return trapezoid(q, v);
}

std::vector<double> ValueDistribution::quantile_breakpoints() const {
  std::vector<double> out;
  switch (kind_) {
    case DistKind::kEqualRevenue: {
      const double lo = params_[0], cap = params_[1], eps = params_[2];
      const double knee = cap - eps * (cap - lo);
      out.push_back(1.0 - lo / knee);
      break;
    }
    case DistKind::kPiecewiseLinearCdf:
      for (Index k = 1; k + 1 < knot_F_.size(); ++k) out.push_back(knot_F_[k]);
      break;
    default:
      break;
  }
  return out;
}

std::string ValueDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case DistKind::kUniform:
      os << "uniform " << params_[0] << " " << params_[1];
      break;
    case DistKind::kExponential:
      os << "exponential " << params_[0];
      break;
    case DistKind::kEqualRevenue:
      os << "equal-revenue " << params_[0] << " " << params_[1] << " "
         << params_[2];
      break;
    case DistKind::kPointMass:
      os << "point-mass " << params_[0] << " " << params_[1];
      break;
    case DistKind::kPiecewiseLinearCdf: {
      os << "piecewise";
      for (Index k = 0; k < knot_v_.size(); ++k) {
        os << " " << knot_v_[k] << ":" << knot_F_[k];
      }
      break;
    }
  }
  return os.str();
}

}  // namespace revcover
