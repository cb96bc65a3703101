#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "nldirac/errors.hpp"
#include "nldirac/spectral.hpp"

using namespace nld;
constexpr double kPi = std::numbers::pi;

namespace {

SpinorField random_field(const EigenTable& t, std::uint64_t seed, double decay = 0.3) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  SpinorField f = t.zeros();
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double a = std::exp(-decay * std::sqrt(double(t.grid().k_sq(i))));
    for (int r = 0; r < f.rank(); ++r) f.mode(i)[r] = a * cplx(nd(gen), nd(gen));
  }
  return f;
}

// brute-force: number of lattice points with 0 < |k| <= L
long long lattice_count(int L) {
  long long c = 0;
  for (int a = -L; a <= L; ++a)
    for (int b = -L; b <= L; ++b)
      if (a * a + b * b <= L * L && (a || b)) ++c;
  return c;
}

}  // namespace

TEST(Spectral, AssembleValidation) {
  EXPECT_THROW(assemble(2, 0), InvalidArgument);
  EXPECT_THROW(TorusGrid(2, 4, 9), InvalidArgument);
  EXPECT_THROW(TorusGrid(2, 4, 8), InvalidArgument);
  EXPECT_NO_THROW(TorusGrid(2, 4, 10));
}

TEST(Spectral, SpectrumTwoByTwoBlocks) {
  const auto t = assemble(2, 2);
  // oracle: eigenvalues of [[0, i k1 - k2],[-i k1 - k2, 0]]-type blocks are +-|k|, counted by squared norm
  std::map<long long, long long> oracle;
  const std::complex<double> I(0, 1);
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      Eigen::Matrix2cd e1, e2;
      e1 << 0, 1, -1, 0;
      e2 << 0, I, I, 0;
      Eigen::Matrix2cd s = I * (double(a) * e1 + double(b) * e2);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(s);
      for (int j = 0; j < 2; ++j) ++oracle[std::llround(es.eigenvalues()[j] * 1e6)];
    }
  std::map<long long, long long> got;
  long long total = 0;
  for (const auto& e : t.spectrum()) {
    got[std::llround(e.value * 1e6)] += e.multiplicity;
    total += e.multiplicity;
  }
  EXPECT_EQ(got, oracle);
  EXPECT_EQ(total, 2 * 25);
  const std::vector<std::pair<double, long long>> expect{
      {-2 * std::sqrt(2.0), 4}, {-std::sqrt(5.0), 8}, {-2, 4}, {-std::sqrt(2.0), 4}, {-1, 4}, {0, 2},
      {1, 4}, {std::sqrt(2.0), 4}, {2, 4}, {std::sqrt(5.0), 8}, {2 * std::sqrt(2.0), 4}};
  ASSERT_EQ(t.spectrum().size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_NEAR(t.spectrum()[i].value, expect[i].first, 1e-15);
    EXPECT_EQ(t.spectrum()[i].multiplicity, expect[i].second);
  }
}

TEST(Spectral, ModeOrderingAndEigenResiduals) {
  const auto t = assemble(2, 3);
  const auto& g = t.grid();
  for (std::size_t i = 1; i < g.mode_count(); ++i) EXPECT_LE(g.k_sq(i - 1), g.k_sq(i));
  EXPECT_EQ(g.k_sq(0), 0);
  for (std::size_t i = 0; i < g.mode_count(); ++i) {
    const auto b = t.block(i);
    const auto s = t.symbol(i);
    EXPECT_LT((b.basis.adjoint() * b.basis - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-14);
    for (int j = 0; j < 2; ++j)
      EXPECT_LT((s * b.basis.col(j) - b.eigenvalues[j] * b.basis.col(j)).norm(), 1e-12);
    // plane wave: D acting on the full field
    if (g.k_sq(i) > 0) {
      const auto pw = plane_wave(t, i, +1);
      const auto dpw = apply_dirac(t, pw);
      EXPECT_LT((dpw.coeffs() - std::sqrt(double(g.k_sq(i))) * pw.coeffs()).norm(), 1e-13);
    }
  }
}

TEST(Spectral, ConstantSpinorIsHarmonic) {
  const auto t = assemble(3, 2);
  SpinorField f = t.zeros();
  f.mode(0) << cplx(1, 2), cplx(-0.5, 0);
  EXPECT_EQ(apply_dirac(t, f).coeffs().norm(), 0.0);
}

TEST(Spectral, DiracSymmetricAndLinear) {
  const auto t = assemble(2, 6);
  const auto a = random_field(t, 1), b = random_field(t, 2);
  const cplx lhs = l2_pairing(t, apply_dirac(t, a), b);
  const cplx rhs = l2_pairing(t, a, apply_dirac(t, b));
  EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
  const auto lin = apply_dirac(t, cplx(2, -1) * a + b);
  const auto sep = cplx(2, -1) * apply_dirac(t, a) + apply_dirac(t, b);
  EXPECT_LT((lin.coeffs() - sep.coeffs()).norm(), 1e-12 * sep.coeffs().norm());
}

TEST(Spectral, RoundTripTransform) {
  const auto t = assemble(2, 5);
  const auto f = random_field(t, 4);
  const auto g = t.collocation().from_grid(t.collocation().to_grid(f));
  EXPECT_LT((f.coeffs() - g.coeffs()).norm(), 1e-12 * f.coeffs().norm());
  const auto t3 = assemble(3, 3);
  const auto f3 = random_field(t3, 5);
  const auto g3 = t3.collocation().from_grid(t3.collocation().to_grid(f3));
  EXPECT_LT((f3.coeffs() - g3.coeffs()).norm(), 1e-12 * f3.coeffs().norm());
}

TEST(Spectral, GridValuesMatchDirectSum) {
  const auto t = assemble(2, 2, 8);
  const auto f = random_field(t, 9);
  const auto v = t.collocation().to_grid(f);
  const auto& g = t.grid();
  for (std::size_t p : {std::size_t{0}, std::size_t{13}, std::size_t{63}}) {
    for (int a = 0; a < 2; ++a) {
      cplx s = 0;
      for (std::size_t i = 0; i < g.mode_count(); ++i) {
        const auto k = g.k(i);
        s += f.mode(i)[a] * std::exp(cplx(0, k[0] * g.coordinate(p, 0) + k[1] * g.coordinate(p, 1)));
      }
      EXPECT_LT(std::abs(s - v[p * 2 + a]), 1e-13);
    }
  }
}

TEST(Spectral, SplitKernelDimensions) {
  const auto t = assemble(2, 4);
  const auto s05 = split(t, 0.5);
  EXPECT_EQ(s05.dim(Part::Zero), 0u);
  EXPECT_FALSE(s05.has_kernel());
  EXPECT_EQ(s05.part(0, 0), Part::Minus);
  const auto s0 = split(t, 0.0);
  EXPECT_EQ(s0.dim(Part::Zero), 2u);
  const auto s1 = split(t, 1.0);
  EXPECT_EQ(s1.dim(Part::Zero), 4u);
  EXPECT_EQ(s1.dim(Part::Plus) + s1.dim(Part::Zero) + s1.dim(Part::Minus), 2 * t.modes());
  EXPECT_THROW(split(t, 0.5, 0.6), AmbiguousSplit);
}

TEST(Spectral, ProjectorAlgebra) {
  const auto t = assemble(2, 5);
  const auto s = split(t, 1.0);
  const auto f = random_field(t, 11);
  const auto p = s.project(f, Part::Plus), z = s.project(f, Part::Zero), m = s.project(f, Part::Minus);
  EXPECT_LT((p + z + m - f).coeffs().norm(), 1e-12 * f.coeffs().norm());
  EXPECT_LT(s.project(p, Part::Minus).coeffs().norm(), 1e-12 * f.coeffs().norm());
  EXPECT_LT((s.project(p, Part::Plus) - p).coeffs().norm(), 1e-12 * f.coeffs().norm());
  EXPECT_LT((s.project(z, Part::Zero) - z).coeffs().norm(), 1e-12 * f.coeffs().norm());
  const double n2 = s.inner(f, f);
  EXPECT_NEAR(n2, s.inner(p, p) + s.inner(z, z) + s.inner(m, m), 1e-12 * n2);
  EXPECT_NEAR(s.norm(z), l2_norm(t, z), 1e-12 * l2_norm(t, z));
}

TEST(Spectral, NormAndDualExamples) {
  const auto t = assemble(2, 3);
  const auto s = split(t, 0.5);
  // unit L2 eigenspinor with D psi = psi
  auto pw = plane_wave(t, 1, +1);
  pw *= 1.0 / l2_norm(t, pw);
  EXPECT_NEAR(norm_lambda(s, pw) * norm_lambda(s, pw), 0.5, 1e-14);
  EXPECT_NEAR(dual_norm(s, pw), std::sqrt(2.0), 1e-14);
  const auto s1 = split(t, 1.0);
  EXPECT_NEAR(dual_norm(s1, pw), 1.0, 1e-14);
}

TEST(Spectral, DualityPairing) {
  const auto t = assemble(2, 4);
  const auto s = split(t, 0.3);
  for (int n = 0; n < 1000; ++n) {
    const auto r = random_field(t, 100 + n, 0.1), f = random_field(t, 5000 + n, 0.2);
    EXPECT_LE(std::abs(l2_inner(t, r, f)), dual_norm(s, r) * norm_lambda(s, f) * (1 + 1e-12));
  }
  const auto r = random_field(t, 7);
  const auto aligned = s.riesz(r);
  EXPECT_NEAR(l2_inner(t, r, aligned), dual_norm(s, r) * norm_lambda(s, aligned),
              1e-12 * l2_inner(t, r, aligned));
}

TEST(Spectral, LpNorms) {
  const auto t = assemble(2, 3);
  SpinorField c = t.zeros();
  c.mode(0)[0] = 1.0;
  EXPECT_NEAR(lp_norm(t, c, 4.0), std::pow(4 * kPi * kPi, 0.25), 1e-13);
  EXPECT_NEAR(lp_norm(t, c, 4.0), 2.5066282746310002, 1e-12);
  EXPECT_EQ(lp_norm(t, t.zeros(), 3.0), 0.0);
  EXPECT_THROW(lp_norm(t, c, 0.5), DomainError);
  auto pw = plane_wave(t, 3, -1, 0.7);
  for (double p : {2.0, 3.0, 4.0, 5.5})
    EXPECT_NEAR(lp_norm(t, pw, p), 0.7 * std::pow(t.grid().volume(), 1 / p), 1e-13);
  // exact trapezoidal integration of |psi|^4 for trigonometric polynomials
  const auto f = random_field(t, 12);
  const auto fine = assemble(2, 3, 64);
  SpinorField ff(fine.modes(), 2);
  ff.coeffs() = f.coeffs();
  EXPECT_NEAR(lp_norm(t, f, 4.0), lp_norm(fine, ff, 4.0), 1e-12 * lp_norm(t, f, 4.0));
}

TEST(Spectral, WeylCounts) {
  const auto t = assemble(2, 48);
  const auto w10 = weyl_counts(t, 10);
  EXPECT_EQ(w10.d_plus, 316);
  EXPECT_EQ(w10.d_plus, lattice_count(10));
  EXPECT_EQ(w10.d_minus, w10.d_plus);
  EXPECT_EQ(w10.n_count, 2 * 316 + 2);
  EXPECT_NEAR(w10.c_m_vol, kPi, 1e-15);
  const auto w40 = weyl_counts(t, 40);
  EXPECT_EQ(w40.d_plus, lattice_count(40));
  EXPECT_LT(std::abs(w40.ratio - kPi) / kPi, 0.02);
  const auto w24 = weyl_counts(t, 24);
  EXPECT_LT(std::abs(w24.ratio - kPi) / kPi, 0.05);
  EXPECT_THROW(weyl_counts(t, 48.5), TruncationUnsafe);
}
