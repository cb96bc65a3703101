#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nldirac/constants.hpp"
#include "nldirac/errors.hpp"
#include "nldirac/spectral.hpp"

using namespace nld;
constexpr double kPi = std::numbers::pi;

TEST(Constants, SphereVolumes) {
  EXPECT_NEAR(sphere_volume(1), 2 * kPi, 1e-14);
  EXPECT_NEAR(sphere_volume(2), 4 * kPi, 1e-13);
  EXPECT_NEAR(sphere_volume(3), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4 * kPi / 3, 1e-13);
}

TEST(Constants, GammaCrit) {
  EXPECT_NEAR(gamma_crit(2), kPi, 1e-13);
  EXPECT_NEAR(gamma_crit(3), (1.0 / 6) * 3.375 * 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(gamma_crit(3), 11.1033, 1e-4);
  for (int m = 2; m <= 6; ++m)
    EXPECT_NEAR(gamma_crit(m), std::pow(lambda_min_sphere(m), m) / (2.0 * m), 1e-10 * gamma_crit(m));
  EXPECT_THROW(gamma_crit(1), InvalidArgument);
}

TEST(Constants, NuWindow) {
  EXPECT_NEAR(nu_window(2, 4 * kPi * kPi), 1 / std::sqrt(kPi), 1e-14);
  EXPECT_NEAR(nu_window(2, 4 * kPi * kPi), 0.5642, 1e-4);
  EXPECT_NEAR(nu_window(3, std::pow(2 * kPi, 3)), 1.5 * std::cbrt(1 / (4 * kPi)), 1e-14);
  for (int m = 2; m <= 5; ++m) EXPECT_NEAR(nu_window(m, sphere_volume(m)), 0.5 * m, 1e-14);
  EXPECT_THROW(nu_window(2, 0.0), InvalidArgument);
}

TEST(Constants, OmegaIdentity) {
  for (int m = 2; m <= 4; ++m)
    EXPECT_NEAR(sphere_volume_by_quadrature(m), sphere_volume(m), 1e-8) << "m=" << m;
}

TEST(Constants, CriticalExponent) {
  EXPECT_DOUBLE_EQ(critical_exponent(2), 4.0);
  EXPECT_DOUBLE_EQ(critical_exponent(3), 3.0);
}

TEST(Constants, SphereSpectrumTable) {
  // S^2: +-(j+1) with multiplicity 2(j+1)
  const auto s2 = sphere_positive_spectrum(2, 4);
  for (int j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(s2[j].value, j + 1.0);
    EXPECT_EQ(s2[j].multiplicity, 2 * (j + 1));
  }
  const auto s3 = sphere_positive_spectrum(3, 3);
  EXPECT_EQ(s3[0].multiplicity, 2);
  EXPECT_EQ(s3[1].multiplicity, 6);
  EXPECT_EQ(s3[2].multiplicity, 12);
}

TEST(Constants, SphereWeylRatio) {
  // d+(L)/L^m on S^m tends to (N/2)|B^m| Vol(S^m)/(2 pi)^m
  for (int m = 2; m <= 3; ++m) {
    const double N = std::pow(2.0, m / 2);
    const double c = 0.5 * N * unit_ball_volume(m) * sphere_volume(m) / std::pow(2 * kPi, m);
    const double L = 400.5;
    const double ratio = static_cast<double>(sphere_count(m, L)) / std::pow(L, m);
    EXPECT_NEAR(ratio / c, 1.0, 2e-2) << "m=" << m;
  }
}

TEST(Constants, TorusWeylConstant) {
  const EigenTable t = assemble(2, 40);
  EXPECT_NEAR(weyl_counts(t, 30).c_m_vol, unit_ball_volume(2), 1e-14);
}
