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

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "spline_reference.hpp"
#include "zeroplan/error.hpp"

namespace {

using zeroplan::CubicSpline;
using zeroplan::SamplePoint;
using zeroplan::fit_natural_spline;

std::vector<SamplePoint> random_points(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> gap(0.2, 5.0);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  std::vector<SamplePoint> points;
  double x = gap(rng);
  for (int i = 0; i < count; ++i) {
    points.push_back(SamplePoint{x, value(rng)});
    x += gap(rng);
  }
  return points;
}

}  // namespace

TEST_CASE("collinear data yields a linear spline") {
  const CubicSpline s = fit_natural_spline(
      {SamplePoint{0, 0}, SamplePoint{1, 1}, SamplePoint{2, 2}});
  for (const CubicSpline::Segment& seg : s.segments()) {
    CHECK(std::fabs(seg.c) <= 1e-9);
    CHECK(std::fabs(seg.d) <= 1e-9);
  }
  CHECK(s.eval(1.5) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("two points force a single linear segment") {
  const CubicSpline s =
      fit_natural_spline({SamplePoint{1, 2}, SamplePoint{3, 6}});
  REQUIRE(s.segments().size() == 1);
  CHECK(s.eval(2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cubic data matches the dense reference solver") {
  // y = x^3 sampled at 1..4; the natural spline is not x^3 itself (the true
  // second derivative is nonzero at the endpoints), so pin the value the
  // reference produces.
  const std::vector<double> xs = {1, 2, 3, 4};
  const std::vector<double> ys = {1, 8, 27, 64};
  std::vector<SamplePoint> points;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    points.push_back(SamplePoint{xs[i], ys[i]});
  }
  const CubicSpline s = fit_natural_spline(points);
  const zeroplan_test::ReferenceSpline reference(xs, ys);
  CHECK(s.eval(2.5) == doctest::Approx(reference.eval(2.5)).epsilon(1e-12));
  CHECK(s.eval(2.5) == doctest::Approx(15.25).epsilon(1e-12));
}

TEST_CASE("evaluation clamps outside the knot range") {
  const CubicSpline s =
      fit_natural_spline({SamplePoint{1, 5}, SamplePoint{2, 7}});
  CHECK(s.eval(0.5) == 5.0);
  CHECK(s.eval(3.0) == 7.0);

  const CubicSpline linear =
      fit_natural_spline({SamplePoint{0, 0}, SamplePoint{2, 2}});
  CHECK(linear.eval(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_natural_spline({SamplePoint{1, 1}}),
                  zeroplan::InvalidInputError);
  CHECK_THROWS_AS(fit_natural_spline({}), zeroplan::InvalidInputError);
  CHECK_THROWS_AS(
      fit_natural_spline({SamplePoint{1, 1}, SamplePoint{1, 2}}),
      zeroplan::InvalidInputError);
}

TEST_CASE("unsorted input is sorted internally") {
  const CubicSpline s = fit_natural_spline(
      {SamplePoint{2, 8}, SamplePoint{0, 0}, SamplePoint{1, 1}});
  CHECK(s.knots().front() == 0.0);
  CHECK(s.eval(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random splines: interpolation, smoothness, natural boundaries") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count_dist(3, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<SamplePoint> points = random_points(rng, count_dist(rng));
    const CubicSpline s = fit_natural_spline(points);

    for (const SamplePoint& p : points) {
      CHECK(std::fabs(s.eval(p.x) - p.y) <=
            1e-9 * std::max(1.0, std::fabs(p.y)));
    }

    const std::vector<double>& xs = s.knots();
    const std::vector<CubicSpline::Segment>& segs = s.segments();
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      const double h = xs[i + 1] - xs[i];
      const CubicSpline::Segment& left = segs[i];
      const CubicSpline::Segment& right = segs[i + 1];
      const double value_left =
          left.a + h * (left.b + h * (left.c + h * left.d));
      CHECK(std::fabs(value_left - right.a) <= 1e-9);
      const double d1_left = left.b + h * (2.0 * left.c + 3.0 * left.d * h);
      const double d1_right = right.b;
      CHECK(std::fabs(d1_left - d1_right) <=
            1e-6 * std::max(1.0, std::fabs(d1_right)));
      const double d2_left = 2.0 * left.c + 6.0 * left.d * h;
      const double d2_right = 2.0 * right.c;
      CHECK(std::fabs(d2_left - d2_right) <=
            1e-6 * std::max(1.0, std::fabs(d2_right)));
    }

    CHECK(std::fabs(s.second_derivative(xs.front())) <= 1e-6);
    CHECK(std::fabs(s.second_derivative(xs.back())) <= 1e-6);
  }
}

TEST_CASE("random splines agree with the dense reference solver") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count_dist(3, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::vector<SamplePoint> points = random_points(rng, count_dist(rng));
    std::vector<double> xs, ys;
    for (const SamplePoint& p : points) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    const CubicSpline s = fit_natural_spline(points);
    const zeroplan_test::ReferenceSpline reference(xs, ys);
    for (int q = 0; q < 20; ++q) {
      const double x = xs.front() + unit(rng) * (xs.back() - xs.front());
      const double expected = reference.eval(x);
      CHECK(std::fabs(s.eval(x) - expected) <=
            1e-7 * std::max(1.0, std::fabs(expected)));
    }
  }
}
