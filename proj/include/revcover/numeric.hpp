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

#ifndef REVCOVER_NUMERIC_HPP_
#define REVCOVER_NUMERIC_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace revcover {

using Eigen::ArrayXd;
using Eigen::Index;

// (e-1)/e from the runtime exponential constant.
inline double value_covering_fraction() {
  const double e = std::exp(1.0);
  return (e - 1.0) / e;
}

// Trapezoid integral of y over grid x (both ascending, same length).
inline double trapezoid(const ArrayXd& x, const ArrayXd& y) {
  double acc = 0.0;
  for (Index k = 0; k + 1 < x.size(); ++k) {
    acc += 0.5 * (y[k] + y[k + 1]) * (x[k + 1] - x[k]);
  }
  return acc;
}

// Running trapezoid integral; out[k] = integral of y over x[0..k].
inline ArrayXd cumulative_trapezoid(const ArrayXd& x, const ArrayXd& y) {
  ArrayXd out(x.size());
  out[0] = 0.0;
  for (Index k = 1; k < x.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (y[k - 1] + y[k]) * (x[k] - x[k - 1]);
  }
  return out;
}

// Largest index k with xs[k] <= t, or -1 if t < xs[0]. xs ascending.
inline Index upper_index(const ArrayXd& xs, double t) {
  const double* begin = xs.data();
  const double* end = begin + xs.size();
  return static_cast<Index>(std::upper_bound(begin, end, t) - begin) - 1;
}

// Piecewise-linear interpolation of (xs, ys) at t, clamped at the ends.
// xs must be nondecreasing; flat cells take the right value.
inline double interp(const ArrayXd& xs, const ArrayXd& ys, double t) {
  if (t <= xs[0]) return ys[0];
  const Index last = xs.size() - 1;
  if (t >= xs[last]) return ys[last];
  Index k = upper_index(xs, t);
  if (k >= last) return ys[last];
  const double dx = xs[k + 1] - xs[k];
  if (dx <= 0.0) return ys[k + 1];
  const double w = (t - xs[k]) / dx;
  return ys[k] + w * (ys[k + 1] - ys[k]);
}

// Monotone (nondecreasing) least-squares projection, pool adjacent violators.
inline ArrayXd isotonic_increasing(const ArrayXd& y) {
  const Index n = y.size();
  std::vector<double> level;
  std::vector<double> weight;
  std::vector<Index> count;
  level.reserve(n);
  for (Index k = 0; k < n; ++k) {
    level.push_back(y[k]);
    weight.push_back(1.0);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const double v2 = level.back(), w2 = weight.back();
      const Index c2 = count.back();
      level.pop_back(); weight.pop_back(); count.pop_back();
      const double v1 = level.back(), w1 = weight.back();
      const Index c1 = count.back();
      level.pop_back(); weight.pop_back(); count.pop_back();
      level.push_back((v1 * w1 + v2 * w2) / (w1 + w2));
      weight.push_back(w1 + w2);
      count.push_back(c1 + c2);
    }
  }
  ArrayXd out(n);
  Index pos = 0;
  for (size_t blk = 0; blk < level.size(); ++blk) {
    for (Index c = 0; c < count[blk]; ++c) out[pos++] = level[blk];
  }
  return out;
}

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must straddle zero.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline ArrayXd linspace(double lo, double hi, Index n) {
  ArrayXd out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (Index k = 0; k < n; ++k) out[k] = lo + step * static_cast<double>(k);
  out[n - 1] = hi;
  return out;
}

// Ascending merge of a base grid with extra points, deduplicated.
inline ArrayXd merge_points(const ArrayXd& base, const std::vector<double>& extra,
                            double tol) {
  std::vector<double> all(base.data(), base.data() + base.size());
  all.insert(all.end(), extra.begin(), extra.end());
  std::sort(all.begin(), all.end());
  std::vector<double> dedup;
  for (double v : all) {
    if (dedup.empty() || v - dedup.back() > tol) dedup.push_back(v);
  }
  return Eigen::Map<ArrayXd>(dedup.data(), static_cast<Index>(dedup.size()));
}

}  // namespace revcover

#endif  // REVCOVER_NUMERIC_HPP_
