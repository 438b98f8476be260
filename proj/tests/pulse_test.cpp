// Copyright 2026 The Qudit Pulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qudit/pulse.hpp"

namespace qudit {
namespace {

// Max deviation of (p, q) between two pulses over a dense grid on [0, T].
double control_deviation(const PulseParams& a, const PulseParams& b, double T) {
  double dev = 0.0;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double t = T * i / (n - 1);
    const auto ca = eval_controls(a, t);
    const auto cb = eval_controls(b, t);
    dev = std::max({dev, (ca.p - cb.p).cwiseAbs().maxCoeff(), (ca.q - cb.q).cwiseAbs().maxCoeff()});
  }
  return dev;
}

TEST(Carriers, TwoQutritExample) {
  const QuditSystem s = transmon_system(2, 3);
  const CarrierSet c = carrier_frequencies(s);
  ASSERT_EQ(c.lab.size(), 2u);
  EXPECT_NEAR(to_ghz(c.lab[0][0]), 4.914, 1e-12);
  EXPECT_NEAR(to_ghz(c.lab[0][1]), 4.584, 1e-12);
  EXPECT_NEAR(to_ghz(c.lab[1][0]), 5.114, 1e-12);
  EXPECT_NEAR(to_ghz(c.lab[1][1]), 4.784, 1e-12);
  EXPECT_NEAR(to_ghz(rotating_frame_frequency(s)), 4.849, 1e-12);
  const double want[] = {0.065, -0.265, 0.265, -0.065};
  for (int k = 0; k < 2; ++k) {
    ASSERT_EQ(c.rot[k].size(), 4u);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(to_ghz(c.rot[k][j]), want[j], 1e-12);
  }
}

TEST(Carriers, SingleQudit) {
  QuditSystem q = transmon_system(1, 2);
  EXPECT_DOUBLE_EQ(rotating_frame_frequency(q), q.omega[0]);
  EXPECT_EQ(carrier_frequencies(q).rot[0], std::vector<double>{0.0});
  q = transmon_system(1, 4);
  EXPECT_NEAR(rotating_frame_frequency(q), q.omega[0] + q.xi[0], 1e-12);
  EXPECT_EQ(carrier_frequencies(q).rot[0].size(), 3u);
}

TEST(Splines, Count) {
  EXPECT_EQ(num_bsplines(70), 9);
  EXPECT_EQ(num_bsplines(76), 10);
  EXPECT_EQ(num_bsplines(15), 4);
  EXPECT_EQ(num_bsplines(50), 7);
  EXPECT_EQ(num_bsplines(1), 3);
  EXPECT_THROW(num_bsplines(0), InvalidArgument);
}

TEST(Splines, AlphaBound) {
  EXPECT_NEAR(to_mhz(alpha_bound(1)), 14.142, 1e-3);
  EXPECT_NEAR(to_mhz(alpha_bound(2)), 7.071, 1e-3);
  EXPECT_NEAR(to_mhz(alpha_bound(7)), 2.020, 1e-3);
  EXPECT_THROW(alpha_bound(0), InvalidArgument);
}

TEST(Splines, PartitionOfUnityAndRange) {
  const QuadraticBSplines b(9, 70.0);
  for (int i = 0; i <= 700; ++i) {
    const RVector v = b.values(0.1 * i);
    EXPECT_NEAR(v.sum(), 1.0, 1e-12);
    EXPECT_GE(v.minCoeff(), 0.0);
    EXPECT_LE(v.maxCoeff(), 1.0);
  }
}

TEST(Splines, PeakAndSupport) {
  const int nb = 9;
  const double T = 70.0;
  const QuadraticBSplines b(nb, T);
  const double dt = b.knot_spacing();
  for (int k = 1; k < nb - 1; ++k) {
    const double center = (k - 0.5) * dt;
    EXPECT_NEAR(b.values(center)[k], 0.75, 1e-14);
  }
  // Spline 4 lives on [2.0 dt, 5.0 dt].
  EXPECT_EQ(b.values(1.99 * dt)[4], 0.0);
  EXPECT_EQ(b.values(5.01 * dt)[4], 0.0);
  EXPECT_GT(b.values(2.01 * dt)[4], 0.0);
  EXPECT_THROW(b.values(-1e-9), InvalidArgument);
  EXPECT_THROW(b.values(T + 1e-6), InvalidArgument);
  EXPECT_THROW(QuadraticBSplines(2, 10.0), InvalidArgument);
}

TEST(Splines, ContinuousAcrossKnots) {
  const QuadraticBSplines b(7, 50.0);
  const double dt = b.knot_spacing();
  for (int k = 1; k < 5; ++k) {
    const RVector left = b.values(k * dt - 1e-10);
    const RVector right = b.values(k * dt + 1e-10);
    EXPECT_LT((left - right).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Controls, ZeroAndConstant) {
  const QuditSystem s = transmon_system(1, 2);
  PulseParams p = make_pulse(s, 50.0);
  const auto z = eval_controls(p, 13.0);
  EXPECT_EQ(z.p[0], 0.0);
  EXPECT_EQ(z.q[0], 0.0);

  const double A = 0.5 * p.alpha_max;
  for (int b = 1; b < p.num_splines - 1; ++b) p.alpha[p.index(0, 0, b, 0)] = A;
  const double dt = 50.0 / (p.num_splines - 2);
  for (double t = 2 * dt; t <= 50.0 - 2 * dt; t += 0.37) {
    const auto c = eval_controls(p, t);
    EXPECT_NEAR(c.p[0], A, 1e-14);
    EXPECT_NEAR(c.q[0], 0.0, 1e-16);
  }
}

TEST(Controls, Linearity) {
  const QuditSystem s = transmon_system(2, 3);
  const PulseParams shape = make_pulse(s, 40.0);
  PulseParams a = shape, b = shape, sum = shape;
  a.alpha = random_guess(shape, 1.0, 1);
  b.alpha = random_guess(shape, 1.0, 2);
  sum.alpha = a.alpha + b.alpha;
  for (double t : {0.0, 3.3, 17.0, 40.0}) {
    const auto ca = eval_controls(a, t), cb = eval_controls(b, t), cs = eval_controls(sum, t);
    EXPECT_LT((ca.p + cb.p - cs.p).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((ca.q + cb.q - cs.q).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Controls, CarrierPhase) {
  QuditSystem s = transmon_system(1, 3);
  PulseParams p = make_pulse(s, 30.0);
  const int b = 2;
  p.alpha[p.index(0, 1, b, 1)] = 0.01;  // imaginary part on carrier 1
  const double t = 12.0;
  const double S = basis_values(p.num_splines, p.T, t)[b];
  const double W = p.carriers[0][1];
  const auto c = eval_controls(p, t);
  EXPECT_NEAR(c.p[0], -0.01 * S * std::sin(W * t), 1e-16);
  EXPECT_NEAR(c.q[0], 0.01 * S * std::cos(W * t), 1e-16);
}

TEST(LabFrame, ZeroRotationAndBound) {
  const QuditSystem s = transmon_system(1, 4);
  PulseParams p = make_pulse(s, 60.0);
  p.alpha = random_guess(p, 1.0, 7);
  const double t = 21.0;
  const auto c = eval_controls(p, t);
  EXPECT_NEAR(lab_frame_control(p, 0.0, t)[0], 2 * c.p[0], 1e-15);

  for (Eigen::Index i = 0; i < p.alpha.size(); ++i)
    if (!p.is_pinned(i)) p.alpha[i] = p.alpha_max;
  const double bound = 2 * std::sqrt(2.0) * p.num_carriers() * p.alpha_max;
  EXPECT_NEAR(to_mhz(bound), 40.0, 1e-9);
  for (int i = 0; i <= 6000; ++i)
    EXPECT_LE(std::abs(lab_frame_control(p, s.omega_rot, 0.01 * i)[0]), bound * (1 + 1e-12));
}

TEST(RandomGuess, BoundsPinningDeterminism) {
  const QuditSystem s = transmon_system(1, 3);
  const PulseParams shape = make_pulse(s, 50.0);
  EXPECT_EQ(random_guess(shape, 0.0, 3).cwiseAbs().maxCoeff(), 0.0);
  const RVector a = random_guess(shape, 0.1, 3);
  EXPECT_EQ(a, random_guess(shape, 0.1, 3));
  EXPECT_NE(a, random_guess(shape, 0.1, 4));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    EXPECT_LE(std::abs(a[i]), 0.1 * shape.alpha_max);
    if (shape.is_pinned(i)) EXPECT_EQ(a[i], 0.0);
  }
}

TEST(PulseParams, LayoutAndValidate) {
  const QuditSystem s = transmon_system(2, 3);
  PulseParams p = make_pulse(s, 70.0);
  EXPECT_EQ(p.num_controls(), 2);
  EXPECT_EQ(p.num_carriers(), 4);
  EXPECT_EQ(p.num_splines, 9);
  EXPECT_EQ(p.size(), 2 * 4 * 9 * 2);
  EXPECT_EQ(p.index(1, 2, 3, 1), ((1 * 4 + 2) * 9 + 3) * 2 + 1);
  EXPECT_TRUE(p.is_pinned(p.index(0, 1, 0, 1)));
  EXPECT_TRUE(p.is_pinned(p.index(1, 3, 8, 0)));
  EXPECT_FALSE(p.is_pinned(p.index(1, 3, 7, 0)));
  EXPECT_NO_THROW(p.validate());
  p.alpha[p.index(0, 0, 0, 0)] = 1e-6;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.alpha.setZero();
  p.alpha[5] = 2 * p.alpha_max;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Refit, IdempotentAtSameDuration) {
  const QuditSystem s = transmon_system(1, 3);
  PulseParams p = make_pulse(s, 63.0);
  p.alpha = random_guess(p, 1.0, 11);
  const PulseParams r = refit(p, p.T);
  EXPECT_LT(control_deviation(p, r, p.T), 1e-8 * p.alpha_max);
}

TEST(Refit, ZeroStaysZero) {
  const QuditSystem s = transmon_system(1, 2);
  const PulseParams p = make_pulse(s, 40.0);
  for (double T : {10.0, 37.5, 80.0}) EXPECT_EQ(refit(p, T).alpha.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Refit, ExtendThenTruncateRoundTrip) {
  const QuditSystem s = transmon_system(1, 4);
  PulseParams p = make_pulse(s, 60.0);
  p.alpha = random_guess(p, 1.0, 5);
  // A pulse that ends at zero value and slope is exactly representable
  // after extension on the same knot grid.
  for (int k = 0; k < p.num_controls(); ++k)
    for (int j = 0; j < p.num_carriers(); ++j)
      for (int c = 0; c < 2; ++c) p.alpha[p.index(k, j, p.num_splines - 2, c)] = 0.0;
  const PulseParams ext = refit(p, 80.0);
  EXPECT_EQ(ext.num_splines, 10);
  const PulseParams back = refit(ext, 60.0);
  EXPECT_LT(control_deviation(p, back, 60.0), 1e-6 * p.alpha_max);
  // Extension is zero past the old end.
  for (double t = 60.5; t <= 80.0; t += 0.5) EXPECT_LT(std::abs(eval_controls(ext, t).p[0]), 1e-10 * p.alpha_max);
}

TEST(Refit, TruncationKeepsPrefix) {
  const QuditSystem s = transmon_system(1, 2);
  PulseParams p = make_pulse(s, 80.0);
  p.alpha = random_guess(p, 0.5, 9);
  const PulseParams r = refit(p, 76.0);
  EXPECT_EQ(r.num_splines, 10);
  EXPECT_NO_THROW(r.validate());
  // Least squares on a different grid: close but not exact in the interior.
  const auto a = eval_controls(p, 30.0), b = eval_controls(r, 30.0);
  EXPECT_LT(std::abs(a.p[0] - b.p[0]), 0.2 * p.alpha_max);
}

TEST(Refit, RandomRefitsRespectBoundsAndPinning) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> Tdist(5.0, 200.0);
  std::uniform_int_distribution<int> ddist(2, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const QuditSystem s = transmon_system(1, ddist(rng));
    PulseParams p = make_pulse(s, Tdist(rng));
    p.alpha = random_guess(p, 1.0, rng());
    const PulseParams r = refit(p, Tdist(rng));
    ASSERT_NO_THROW(r.validate()) << "trial " << trial;
  }
}

TEST(Refit, RejectsBadDuration) {
  const PulseParams p = make_pulse(transmon_system(1, 2), 20.0);
  EXPECT_THROW(refit(p, 0.0), InvalidArgument);
  EXPECT_THROW(refit(p, -3.0), InvalidArgument);
}

}  // namespace
}  // namespace qudit
