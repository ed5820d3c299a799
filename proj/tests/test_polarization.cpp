#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nosignal/grid.hpp"
#include "nosignal/polarization.hpp"
#include "printed_forms.hpp"

using namespace nosignal;

TEST(PolarAmplitudes, AlignedSinglet) {
  const auto amps = polar_joint_amplitudes({0.0, 0.0});
  EXPECT_NEAR(std::abs(amps[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(amps[1] - Complex(-1.0 / std::sqrt(2.0), 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(amps[3]), 0.0, 1e-15);
}

TEST(PolarAmplitudes, ProductStateHasUniformModuli) {
  const auto amps = polar_joint_amplitudes({kPi / 4, 0.0});
  for (const auto& z : amps) EXPECT_NEAR(std::abs(z), 0.5, 1e-15);
}

TEST(PolarAmplitudes, ReproduceReferenceFormsExactly) {
  for (double a : linspace(0.0, kTwoPi, 37)) {
    for (double t : linspace(0.0, kTwoPi, 41)) {
      const auto ours = polar_joint_amplitudes({a, t});
      const auto ref = printed::polar_amplitudes(a, t);
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(ours[k] - ref[k]), 0.0, 1e-14) << a << " " << t << " " << k;
    }
  }
}

TEST(PolarAmplitudes, PrintedVhFormIsNotNormalizedAgainstItsProbability) {
  // The reference VH amplitude has cos(alpha) in both terms; its square
  // is cos^2(alpha)/2 instead of (1 + cos2a cos2t)/4.
  const double a = kPi / 8, t = kPi / 5;
  const double printed_sq = std::norm(printed::polar_vh_as_printed(a, t));
  const double prob = polar_joint_probabilities({a, t}).p01;
  EXPECT_NEAR(printed_sq, std::cos(a) * std::cos(a) / 2, 1e-15);
  EXPECT_GT(std::abs(printed_sq - prob), 1e-2);
  EXPECT_NEAR(std::norm(polar_joint_amplitudes({a, t})[2]), prob, 1e-15);
}

TEST(PolarProbabilities, ReferenceValues) {
  const auto aligned = polar_joint_probabilities({0.0, 0.0});
  EXPECT_NEAR(aligned.p11, 0.0, 1e-15);
  EXPECT_NEAR(aligned.p10, 0.5, 1e-15);
  EXPECT_NEAR(aligned.p01, 0.5, 1e-15);
  EXPECT_NEAR(aligned.p00, 0.0, 1e-15);

  for (double t : linspace(0.0, kPi, 13)) {
    const auto flat = polar_joint_probabilities({kPi / 4, t});
    for (double p : flat.as_array()) EXPECT_NEAR(p, 0.25, 1e-15);
  }

  const auto mid = polar_joint_probabilities({kPi / 8, kPi / 8});
  EXPECT_NEAR(mid.p11, 1.0 / 8, 1e-15);
  EXPECT_NEAR(mid.p10, 3.0 / 8, 1e-15);
}

TEST(PolarProbabilities, ConsistentWithAmplitudesAndSymmetric) {
  for (double a : linspace(0.0, kTwoPi, 100)) {
    for (double t : linspace(0.0, kTwoPi, 100)) {
      const PolarizationConfig cfg{a, t};
      const auto p = polar_joint_probabilities(cfg);
      const auto q = distribution_from_amplitudes(polar_joint_amplitudes(cfg));
      const auto pa = p.as_array(), qa = q.as_array();
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(pa[k], qa[k], 1e-12);
      EXPECT_NEAR(p.p11, p.p00, 1e-12);
      EXPECT_NEAR(p.p10, p.p01, 1e-12);
      EXPECT_NEAR(p.total(), 1.0, 1e-12);
    }
  }
}

TEST(PolarMarginals, FlatForEverySetting) {
  for (auto [a, t] : std::vector<std::pair<double, double>>{{0.0, 1.234}, {kPi / 8, 0.0}, {kPi / 4, kPi / 3}}) {
    const auto m = polar_bob_marginals({a, t});
    EXPECT_NEAR(m.pB1, 0.5, 1e-15);
    EXPECT_NEAR(m.pB0, 0.5, 1e-15);
  }
  double worst = 0.0;
  for (double a : linspace(0.0, kTwoPi, 100))
    for (double t : linspace(0.0, kTwoPi, 100)) worst = std::max(worst, std::abs(polar_bob_marginals({a, t}).pB1 - 0.5));
  EXPECT_LE(worst, 1e-12);
}

TEST(PolarProbabilities, QuadraticSmallAngleLaw) {
  // least-squares fit of P_HH(t) = c2 t^2 + c4 t^4 on [0, 0.1]
  double s44 = 0, s46 = 0, s66 = 0, s4y = 0, s6y = 0;
  for (double t : linspace(0.0, 0.1, 101)) {
    const double y = polar_joint_probabilities({0.0, t}).p11;
    const double t2 = t * t, t4 = t2 * t2, t6 = t4 * t2, t8 = t4 * t4;
    s44 += t4;
    s46 += t6;
    s66 += t8;
    s4y += t2 * y;
    s6y += t4 * y;
  }
  const double det = s44 * s66 - s46 * s46;
  const double c2 = (s4y * s66 - s6y * s46) / det;
  EXPECT_NEAR(c2, 0.5, 1e-6);
  for (double t : {0.01, 0.02, 0.05, 0.1}) {
    const double residual = polar_joint_probabilities({0.0, t}).p11 - t * t / 2;
    EXPECT_LE(std::abs(residual), t * t * t * t / 3 + 1e-17);
  }
}

TEST(PolarSweep, StandardCurvesAndSinglePoint) {
  const std::vector<double> alphas{0.0};
  const std::vector<double> thetas{0.0, kPi / 4, kPi / 2};
  const auto rows = polar_sweep(alphas, thetas);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[1].joint.p10, 0.25, 1e-15);
  EXPECT_NEAR(rows[2].joint.p10, 0.0, 1e-15);
  EXPECT_NEAR(rows[2].joint.p11, 0.5, 1e-15);

  const std::vector<double> a1{kPi / 8}, t1{0.7};
  const auto one = polar_sweep(a1, t1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].joint.as_array(), polar_joint_probabilities({kPi / 8, 0.7}).as_array());
}

TEST(PolarSweep, CanonicalKeysAndErrors) {
  const std::vector<double> a{-kPi / 2}, t{kTwoPi};
  const auto rows = polar_sweep(a, t);
  EXPECT_NEAR(rows[0].alpha, 3 * kPi / 2, 1e-15);
  EXPECT_EQ(rows[0].theta, 0.0);
  const std::vector<double> empty;
  EXPECT_THROW(polar_sweep(empty, t), InvalidArgument);
  EXPECT_THROW(polar_sweep(a, empty), InvalidArgument);
  EXPECT_THROW((PolarizationConfig{std::nan(""), 0.0}), InvalidArgument);
}
