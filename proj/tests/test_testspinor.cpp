#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nldirac/errors.hpp"
#include "nldirac/testspinor.hpp"
#include "support.hpp"

using namespace nld;
constexpr double kPi = std::numbers::pi;

TEST(Euclidean, ModulusAnchors) {
  const auto rep = build_rep(2);
  const auto p0 = default_psi0(rep);
  const double origin[2] = {0, 0};
  EXPECT_NEAR(euclidean_solution(rep, origin, p0).norm(), std::sqrt(2.0), 1e-15);
  const double unit[2] = {0.6, 0.8};
  EXPECT_NEAR(euclidean_solution(rep, unit, p0).norm(), 1.0, 1e-15);
}

TEST(Euclidean, ModulusFormula) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int m = 2; m <= 4; ++m) {
    const auto rep = build_rep(m);
    const auto p0 = default_psi0(rep);
    EXPECT_NEAR(p0.norm(), std::pow(m, 0.5 * (m - 1)), 1e-14);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x(m);
      double r2 = 0;
      for (auto& v : x) r2 += (v = u(gen)) * v;
      const double mu = 1 / (1 + r2);
      const double expected = std::pow(m, 0.5 * (m - 1)) * std::pow(mu, 0.5 * (m - 1));
      EXPECT_NEAR(euclidean_solution(rep, x, p0).norm() / expected, 1.0, 1e-13);
    }
  }
}

TEST(Euclidean, DiracIdentityWithFactorM) {
  // D psi = m mu psi for this normalization; second-order decay of the stencil residual
  for (int m : {2, 3}) {
    const auto rep = build_rep(m);
    const auto p0 = default_psi0(rep);
    const double r1 = dirac_fd_residual(rep, p0, 0.02, m);
    const double r2 = dirac_fd_residual(rep, p0, 0.01, m);
    const double r3 = dirac_fd_residual(rep, p0, 0.005, m);
    EXPECT_GE(std::log2(r1 / r2), 1.9);
    EXPECT_GE(std::log2(r2 / r3), 1.9);
  }
}

TEST(Euclidean, HalfFactorLeavesResidual) {
  // with coefficient m/2 the residual tends to |(m/2) mu psi|, not 0
  const auto rep = build_rep(2);
  const auto p0 = default_psi0(rep);
  const double a = dirac_fd_residual(rep, p0, 0.01, 1.0);
  const double b = dirac_fd_residual(rep, p0, 0.005, 1.0);
  EXPECT_NEAR(a / b, 1.0, 1e-3);
  EXPECT_GT(b, 0.1);
}

TEST(Cutoff, Profile) {
  const double d = 0.5;
  EXPECT_EQ(cutoff(0.2, d), 1.0);
  EXPECT_EQ(cutoff(0.5, d), 1.0);
  EXPECT_EQ(cutoff(1.0, d), 0.0);
  EXPECT_EQ(cutoff(3.0, d), 0.0);
  EXPECT_NEAR(cutoff(0.75, d), 0.5, 1e-15);
  // C^2 at both ends
  const double h = 1e-4;
  for (double r : {d, 2 * d}) {
    const double d1 = (cutoff(r + h, d) - cutoff(r - h, d)) / (2 * h);
    const double d2 = (cutoff(r + h, d) - 2 * cutoff(r, d) + cutoff(r - h, d)) / (h * h);
    EXPECT_NEAR(d1, 0.0, 1e-6);
    EXPECT_NEAR(d2, 0.0, 1e-2);
  }
}

TEST(TestSpinor, SupNormSupportAndPointwise) {
  const EigenTable t = assemble(2, 63, 128);
  TestSpinorParams p;
  p.eps = 0.1;
  const TestSpinor ts = build_test_spinor(t, p);
  EXPECT_NEAR(ts.sup_norm, std::pow(p.eps, -0.5) * std::sqrt(2.0), 1e-12);
  const auto& g = t.grid();
  for (std::size_t pt = 0; pt < g.point_count(); ++pt) {
    double r2 = 0;
    for (int j = 0; j < 2; ++j) {
      double x = g.coordinate(pt, j);
      x -= 2 * kPi * std::round(x / (2 * kPi));
      r2 += x * x;
    }
    const double r = std::sqrt(r2);
    const double mod = ts.values.segment(2 * pt, 2).norm();
    if (r >= 2 * p.delta) {
      EXPECT_EQ(mod, 0.0);
    } else if (cutoff(r, p.delta) > 0) {
      const double mu = 1 / (1 + r2 / (p.eps * p.eps));
      const double expected = cutoff(r, p.delta) * std::pow(p.eps, -0.5) * std::sqrt(2.0 * mu);
      EXPECT_NEAR(mod / expected, 1.0, 1e-10);
    }
  }
}

TEST(TestSpinor, Errors) {
  const EigenTable t = assemble(2, 15, 32);
  TestSpinorParams p;
  p.delta = 1.6;
  EXPECT_THROW(build_test_spinor(t, p), ChartOverflow);
  p.delta = 0.5;
  p.eps = 0.6;
  EXPECT_THROW(build_test_spinor(t, p), InvalidArgument);
  p.eps = 0.1;
  EXPECT_TRUE(build_test_spinor(t, p).under_resolved);
  const EigenTable fine = assemble(2, 255, 512);
  EXPECT_FALSE(build_test_spinor(fine, p).under_resolved);
}

TEST(TestSpinor, CenterIsTranslation) {
  const EigenTable t = assemble(2, 31, 64);
  TestSpinorParams p;
  p.eps = 0.2;
  const TestSpinor a = build_test_spinor(t, p);
  const double h = 2 * kPi / 64;
  p.center = {5 * h, -3 * h};
  const TestSpinor b = build_test_spinor(t, p);
  for (std::size_t i = 0; i < t.modes(); ++i) {
    const auto k = t.grid().k(i);
    const cplx phase = std::polar(1.0, -(k[0] * 5 * h - k[1] * 3 * h));
    EXPECT_LT((b.field.mode(i) - phase * a.field.mode(i)).norm(), 1e-12);
  }
}

TEST(TestSpinor, EnergyReportModerateEps) {
  const EigenTable t = assemble(2, 127, 256);
  const auto sp = split(t, 0.5);
  TestSpinorParams p;
  p.eps = 0.1;
  const auto r = energy_report(t, sp, build_test_spinor(t, p), p.eps);
  EXPECT_LT(r.free_energy, kPi);
  EXPECT_GT(r.free_energy, kPi - 0.05);
  // |phi|_4^4 tends to 4 omega_1 int r/(1+r^2)^2 = 4 pi
  EXPECT_NEAR(r.l2star, 4 * kPi, 0.2);
  EXPECT_NEAR(r.free_energy, r.dirac_energy - r.l2star / 4, 1e-12);
  EXPECT_GT(r.dual_phi, 0);
  EXPECT_GT(r.dual_residual, 0);
}

TEST(AsymptoticFit, ExactModels) {
  std::vector<std::pair<double, double>> lin, lg, pw;
  for (double e : default_eps_sweep()) {
    lin.emplace_back(e, e);
    lg.emplace_back(e, e * std::abs(std::log(e)));
    pw.emplace_back(e, 3.0 * std::pow(e, 1.5));
  }
  const auto f1 = asymptotic_fit(lin);
  EXPECT_NEAR(f1.a, 1.0, 1e-6);
  EXPECT_EQ(f1.b, 0.0);
  const auto f2 = asymptotic_fit(lg);
  EXPECT_NEAR(f2.a, 1.0, 1e-6);
  EXPECT_EQ(f2.b, 1.0);
  EXPECT_NEAR(f2.c, 1.0, 1e-6);
  const auto f3 = asymptotic_fit(pw);
  EXPECT_NEAR(f3.a, 1.5, 1e-6);
  EXPECT_NEAR(f3.c, 3.0, 1e-6);
  EXPECT_GT(f3.residual_alt, f3.residual);
}

TEST(AsymptoticFit, Errors) {
  std::vector<std::pair<double, double>> s;
  for (double e : default_eps_sweep()) s.emplace_back(e, e);
  s[3].second = -1;
  EXPECT_THROW(asymptotic_fit(s), DomainError);
  s.resize(4);
  EXPECT_THROW(asymptotic_fit(s), InvalidArgument);
}
