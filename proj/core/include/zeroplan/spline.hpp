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

#ifndef ZEROPLAN_SPLINE_HPP_
#define ZEROPLAN_SPLINE_HPP_

#include <cstddef>
#include <vector>

namespace zeroplan {

/// One measured data point: x is a batch size (treated as real), y is the
/// measured value (seconds per step or batches per second, caller's choice).
struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Natural cubic spline interpolant.
///
/// Piecewise cubics S_i(x) = a_i + b_i*dx + c_i*dx^2 + d_i*dx^3 with
/// dx = x - x_i, C2-continuous at interior knots and with zero second
/// derivative at both endpoints. Outside the knot range, evaluation clamps
/// to the endpoint knot's value instead of extrapolating the cubic.
class CubicSpline {
 public:
  struct Segment {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
  };

  /// Value of the spline at x, clamped to [y_first, y_last] outside the
  /// knot range.
  double eval(double x) const;

  /// First derivative of the containing segment's polynomial; x is clamped
  /// into the knot range first.
  double first_derivative(double x) const;

  /// Second derivative of the containing segment's polynomial; x is clamped
  /// into the knot range first.
  double second_derivative(double x) const;

  const std::vector<double>& knots() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  friend CubicSpline fit_natural_spline(std::vector<SamplePoint> points);

  // Index of the segment whose [x_i, x_{i+1}] interval contains x; assumes
  // x already clamped into the knot range.
  std::size_t segment_index(double x) const;

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<Segment> segments_;
};

/// Fits a natural cubic spline through the given points. Points are sorted
/// by x internally; fewer than two points or duplicate x values are
/// rejected with InvalidInputError.
CubicSpline fit_natural_spline(std::vector<SamplePoint> points);

/// Free-function form of CubicSpline::eval.
double eval_spline(const CubicSpline& spline, double x);

}  // namespace zeroplan

#endif  // ZEROPLAN_SPLINE_HPP_
