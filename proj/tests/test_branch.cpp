#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nldirac/branch.hpp"
#include "nldirac/constants.hpp"
#include "nldirac/errors.hpp"
#include "support.hpp"

using namespace nld;
using nld::testing::find_mode;

namespace {

constexpr double kPi = std::numbers::pi;

const EigenTable& torus8() {
  static const EigenTable t = assemble(2, 8);
  return t;
}

const Nonlinearity& bnd() {
  static const Nonlinearity nl = Nonlinearity::zero(2);
  return nl;
}

DescentOptions unguarded() {
  DescentOptions o;
  o.guard = false;
  return o;
}

// brute force: each eigenvalue sqrt(|k|^2) of D carries multiplicity N per lattice point
long long brute_window(int K, double lambda, double nu) {
  long long n = 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const double s = std::sqrt(double(a * a + b * b));
      for (double e : {s, -s}) {
        if (s == 0 && e < 0) continue;
        if (e > lambda && e < lambda + nu) n += (s == 0 ? 2 : 1);
      }
    }
  return n;
}

}  // namespace

TEST(Branch, LevelName) {
  BranchPoint p;
  EXPECT_EQ(level_name(p), "least");
  p.level = Level::Second;
  p.k = 1;
  EXPECT_EQ(level_name(p), "second1");
}

TEST(Branch, PlaneWaveResidual) {
  // |s|^2 = 1 - lambda solves D psi - lambda psi = |psi|^2 psi
  const SpinorField psi =
      plane_wave(torus8(), find_mode(torus8(), {1, 0}), +1, std::sqrt(0.5));
  EXPECT_LT(residual_check(torus8(), bnd(), psi, 0.5), 1e-12);
  const SpinorField other =
      plane_wave(torus8(), find_mode(torus8(), {1, 1}), +1, std::sqrt(std::sqrt(2.0) - 0.3));
  EXPECT_LT(residual_check(torus8(), bnd(), other, 0.3), 1e-12);
  EXPECT_EQ(residual_check(torus8(), bnd(), torus8().zeros(), 0.5), 0.0);
  // wrong amplitude leaves a residual
  const SpinorField bad = plane_wave(torus8(), find_mode(torus8(), {1, 0}), +1, 0.5);
  EXPECT_GT(residual_check(torus8(), bnd(), bad, 0.5), 0.1);
}

TEST(Branch, PositiveEigenvalues) {
  const auto ev = positive_eigenvalues(torus8());
  ASSERT_GE(ev.size(), 4u);
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(ev[2], 2.0, 1e-14);
  EXPECT_NEAR(ev[3], std::sqrt(5.0), 1e-14);
}

TEST(Branch, MultiplicityCounts) {
  const double nu = nu_window(2, 4 * kPi * kPi);
  EXPECT_NEAR(nu, 1 / std::sqrt(kPi), 1e-14);
  EXPECT_EQ(multiplicity_count(torus8(), 0.5, nu), 4);
  EXPECT_EQ(multiplicity_count(torus8(), 0.0, nu), 0);
  EXPECT_EQ(multiplicity_count(torus8(), 0.99, nu), 8);
  for (double lam : {-1.3, 0.5, 1.7, 3.1, 4.99})
    EXPECT_EQ(multiplicity_count(torus8(), lam, nu), brute_window(8, lam, nu)) << lam;
  EXPECT_THROW(multiplicity_count(torus8(), 7.9, nu), TruncationUnsafe);
}

TEST(Branch, MultiplicityGrowth) {
  const auto t = assemble(2, 48);
  const double nu = 1 / std::sqrt(kPi);
  const long long l5 = multiplicity_count(t, 5, nu), l10 = multiplicity_count(t, 10, nu),
                  l20 = multiplicity_count(t, 20, nu);
  EXPECT_GT(l20, l5);
  EXPECT_EQ(l5, brute_window(48, 5, nu));
  EXPECT_EQ(l10, brute_window(48, 10, nu));
  EXPECT_EQ(l20, brute_window(48, 20, nu));
}

TEST(Branch, DefaultSigma) {
  EXPECT_NEAR(default_sigma(split(torus8(), 1.0)), 0.5 / (std::sqrt(2.0) - 1), 1e-12);
  EXPECT_THROW(default_sigma(split(torus8(), 0.5)), InvalidArgument);
}

TEST(Branch, DefaultStarts) {
  const auto sp = split(torus8(), 0.5);
  const auto st = default_starts(sp);
  ASSERT_FALSE(st.empty());
  EXPECT_EQ(st.back().name, "planewave");
  for (const auto& s : st) EXPECT_GT(sp.norm(sp.project(s.direction, Part::Plus)), 0) << s.name;
}

TEST(Branch, LeastEnergyAnchor) {
  const auto sp = split(torus8(), 0.5);
  const BranchPoint p = minimize_M(sp, bnd());
  EXPECT_LE(p.energy, kPi * kPi / 4 + 1e-6);
  EXPECT_GT(p.energy, 0);
  EXPECT_LT(p.residual_l2, 1e-8);
  EXPECT_TRUE(p.below_gamma_crit);
  EXPECT_FALSE(p.kernel_point);
  EXPECT_TRUE(p.unique);
  EXPECT_NEAR(L_lambda(sp, bnd(), p.psi, 0.5), p.energy, 1e-10);
  // same energy from any phase of the minimizer
  EXPECT_NEAR(M_lambda(sp, bnd(), cplx(0, 1) * p.phi), p.energy, 1e-9);
}

TEST(Branch, PlaneWaveIsCritical) {
  const auto sp = split(torus8(), 0.5);
  const SpinorField pw = plane_wave(torus8(), find_mode(torus8(), {1, 0}), +1);
  const BranchPoint p = minimize_M(sp, bnd(), {{"planewave", pw}});
  EXPECT_NEAR(p.energy, kPi * kPi / 4, 1e-10);
  EXPECT_EQ(p.iterations, 0);
  EXPECT_LT(p.residual_l2, 1e-10);
}

TEST(Branch, MonotoneAndLimit) {
  const double e6 = minimize_M(split(torus8(), 0.6), bnd()).energy;
  const double e7 = minimize_M(split(torus8(), 0.7), bnd()).energy;
  const BranchPoint p9 = minimize_M(split(torus8(), 0.9), bnd());
  EXPECT_GE(e6, e7 - 1e-6);
  EXPECT_GE(e7, p9.energy - 1e-6);
  // plane-wave bound pi^2 (1 - lambda)^2
  EXPECT_LE(p9.energy, kPi * kPi * 0.01 + 1e-9);
  EXPECT_GT(p9.energy, 0);
}

TEST(Branch, GuardViolation) {
  // at K = 8 the lambda = 0.1 minimizer sits above gamma_crit
  const auto sp = split(torus8(), 0.1);
  const BranchPoint p = minimize_M(sp, bnd(), unguarded());
  ASSERT_GE(p.energy, gamma_crit(2));
  EXPECT_FALSE(p.below_gamma_crit);
  EXPECT_THROW(minimize_M(sp, bnd()), GuardViolation);
}

TEST(Branch, KernelPoint) {
  const auto sp = split(torus8(), 1.0);
  const BranchPoint p = minimize_M(sp, bnd());
  EXPECT_TRUE(p.kernel_point);
  EXPECT_LT(p.energy, kPi);
  EXPECT_GT(p.energy, 0);
  EXPECT_LT(p.residual_l2, 1e-8);
  // below the plane wave with the kernel removed
  const SpinorField pw = plane_wave(torus8(), find_mode(torus8(), {1, 1}), +1);
  const BranchPoint q = minimize_M(sp, bnd(), {{"planewave", pw}});
  EXPECT_LT(p.energy, q.energy);
  // second level at lambda_k reduces to the least level
  const BranchPoint s = second_solution(sp, bnd(), 1.0, 1);
  EXPECT_NEAR(s.energy, p.energy, 1e-6);
  EXPECT_EQ(s.level, Level::Second);
  EXPECT_EQ(s.k, 1);
}

TEST(Branch, SecondAboveLeast) {
  const auto sp1 = split(torus8(), 1.0);
  const BranchPoint s = second_solution(sp1, bnd(), 0.95, 1);
  const BranchPoint c = minimize_M(split(torus8(), 0.95), bnd());
  EXPECT_GT(s.energy, c.energy);
  EXPECT_LT(s.residual_l2, 1e-8);
  EXPECT_THROW(second_solution(split(torus8(), 0.5), bnd(), 0.4, 1), InvalidArgument);
}

TEST(Branch, SweepDeterministic) {
  SweepConfig c;
  c.K = 6;
  c.lambdas = {0.5, 0.7, 0.9, 1.2};
  c.descent = unguarded();
  c.threads = 1;
  const SweepTable a = branch_sweep(c, bnd());
  c.threads = 3;
  const SweepTable b = branch_sweep(c, bnd());
  ASSERT_EQ(a.rows.size(), b.rows.size());
  ASSERT_EQ(a.rows.size(), 4u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].point.lambda, b.rows[i].point.lambda);
    EXPECT_EQ(a.rows[i].point.energy, b.rows[i].point.energy);
    EXPECT_EQ(a.rows[i].point.flags, b.rows[i].point.flags);
  }
  EXPECT_TRUE(a.monotone);
  EXPECT_EQ(a.rows[0].interval, a.rows[2].interval);
  EXPECT_NE(a.rows[0].interval, a.rows[3].interval);
}

TEST(Branch, NormalizePlusRejectsNegative) {
  const auto sp = split(torus8(), 0.5);
  const SpinorField neg = plane_wave(torus8(), find_mode(torus8(), {1, 0}), -1);
  EXPECT_THROW(normalize_plus(sp, neg), InvalidArgument);
}
