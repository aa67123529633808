// Copyright 2026 The zeroplan Authors
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

#include "zeroplan/spline.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

CubicSpline fit_natural_spline(std::vector<SamplePoint> points) {
  if (points.size() < 2) {
    throw InvalidInputError("spline fit requires at least 2 points, got " +
                            std::to_string(points.size()));
  }
  std::sort(points.begin(), points.end(),
            [](const SamplePoint& lhs, const SamplePoint& rhs) {
              return lhs.x < rhs.x;
            });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].x == points[i - 1].x) {
      throw InvalidInputError("spline fit requires distinct x values; x = " +
                              std::to_string(points[i].x) + " repeats");
    }
  }

  const std::size_t n = points.size() - 1;  // segment count
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = points[i + 1].x - points[i].x;
  }

  // Second derivatives m[0..n] at the knots. Natural boundary conditions
  // pin m[0] = m[n] = 0; the interior values solve the standard tridiagonal
  // system, done here with the Thomas algorithm.
  std::vector<double> m(n + 1, 0.0);
  if (n >= 2) {
    const std::size_t unknowns = n - 1;
    std::vector<double> diag(unknowns), upper(unknowns), rhs(unknowns);
    for (std::size_t k = 0; k < unknowns; ++k) {
      const std::size_t i = k + 1;  // knot index
      diag[k] = 2.0 * (h[i - 1] + h[i]);
      upper[k] = h[i];
      const double slope_right = (points[i + 1].y - points[i].y) / h[i];
      const double slope_left = (points[i].y - points[i - 1].y) / h[i - 1];
      rhs[k] = 6.0 * (slope_right - slope_left);
    }
    // Forward sweep; the sub-diagonal entry for row k is h[k].
    for (std::size_t k = 1; k < unknowns; ++k) {
      const double w = h[k] / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    m[unknowns] = rhs[unknowns - 1] / diag[unknowns - 1];
    for (std::size_t k = unknowns - 1; k >= 1; --k) {
      m[k] = (rhs[k - 1] - upper[k - 1] * m[k + 1]) / diag[k - 1];
    }
  }

  CubicSpline spline;
  spline.xs_.resize(points.size());
  spline.ys_.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    spline.xs_[i] = points[i].x;
    spline.ys_[i] = points[i].y;
  }
  spline.segments_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    CubicSpline::Segment& s = spline.segments_[i];
    s.a = points[i].y;
    s.b = (points[i + 1].y - points[i].y) / h[i] -
          h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    s.c = m[i] / 2.0;
    s.d = (m[i + 1] - m[i]) / (6.0 * h[i]);
  }
  return spline;
}

std::size_t CubicSpline::segment_index(double x) const {
  // First knot strictly greater than x, minus one; the last segment covers
  // x == x_n.
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t idx = static_cast<std::size_t>(it - xs_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, segments_.size() - 1);
}

double CubicSpline::eval(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const std::size_t i = segment_index(x);
  const Segment& s = segments_[i];
  const double dx = x - xs_[i];
  return s.a + dx * (s.b + dx * (s.c + dx * s.d));
}

double CubicSpline::first_derivative(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  const std::size_t i = segment_index(x);
  const Segment& s = segments_[i];
  const double dx = x - xs_[i];
  return s.b + dx * (2.0 * s.c + 3.0 * s.d * dx);
}

double CubicSpline::second_derivative(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  const std::size_t i = segment_index(x);
  const Segment& s = segments_[i];
  const double dx = x - xs_[i];
  return 2.0 * s.c + 6.0 * s.d * dx;
}

double eval_spline(const CubicSpline& spline, double x) {
  return spline.eval(x);
}

}  // namespace zeroplan
