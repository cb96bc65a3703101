#include <gtest/gtest.h>

#include <array>
#include <random>

#include "nldirac/clifford.hpp"
#include "nldirac/errors.hpp"

using namespace nld;
using Mat = Eigen::MatrixXcd;

namespace {

// independent check of the defining relations for an arbitrary list of matrices
double relation_defect(const std::vector<Mat>& g) {
  const auto n = g.front().rows();
  const Mat id = Mat::Identity(n, n);
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, (g[i].adjoint() + g[i]).norm());
    for (std::size_t j = 0; j < g.size(); ++j) {
      Mat ac = g[i] * g[j] + g[j] * g[i];
      if (i == j) ac += 2 * id;
      worst = std::max(worst, ac.norm());
    }
  }
  return worst;
}

}  // namespace

TEST(Clifford, RejectsDimensionBelowTwo) {
  EXPECT_THROW(build_rep(1), InvalidArgument);
  EXPECT_THROW(build_rep(0), InvalidArgument);
}

TEST(Clifford, BaseWitnessForTwoDimensions) {
  const auto rep = build_rep(2);
  ASSERT_EQ(rep.N, 2);
  Mat e1(2, 2), e2(2, 2);
  e1 << 0, 1, -1, 0;
  e2 << 0, std::complex<double>(0, 1), std::complex<double>(0, 1), 0;
  EXPECT_EQ((rep.gamma[0] - e1).norm(), 0.0);
  EXPECT_EQ((rep.gamma[1] - e2).norm(), 0.0);
}

TEST(Clifford, PauliWitnessSatisfiesRelations) {
  const std::complex<double> i(0, 1);
  Mat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  EXPECT_LT(relation_defect({i * s1, i * s2, i * s3}), 1e-15);
  const auto rep = build_rep(3);
  EXPECT_EQ(rep.N, 2);
  EXPECT_LT(relation_defect(rep.gamma), 1e-15);
}

TEST(Clifford, RankAndRelationsUpToSix) {
  const std::array<int, 5> ranks{2, 2, 4, 4, 8};
  for (int m = 2; m <= 6; ++m) {
    const auto rep = build_rep(m);
    EXPECT_EQ(rep.N, ranks[m - 2]);
    EXPECT_EQ(static_cast<int>(rep.gamma.size()), m);
    EXPECT_LT(relation_defect(rep.gamma), 1e-13) << "m=" << m;
    const auto r = check_rep(rep, 1000);
    EXPECT_LT(r.worst(), 1e-12) << "m=" << m;
  }
}

TEST(Clifford, MultiplicationExamples) {
  const auto rep = build_rep(2);
  const std::array<double, 2> x{1.0, 0.0};
  Eigen::VectorXcd s(2);
  s << 1, 0;
  const auto xs = clifford_mul(rep, x, s);
  EXPECT_EQ(xs[0], std::complex<double>(0, 0));
  EXPECT_EQ(xs[1], std::complex<double>(-1, 0));
  const auto y = one_minus_x_mul(rep, x, s);
  EXPECT_EQ(y[0], std::complex<double>(1, 0));
  EXPECT_EQ(y[1], std::complex<double>(1, 0));
  EXPECT_DOUBLE_EQ(y.squaredNorm(), 2.0);
  const std::array<double, 2> zero{0.0, 0.0};
  EXPECT_EQ(clifford_mul(rep, zero, s).norm(), 0.0);
}

TEST(Clifford, IsometryAndShapeErrors) {
  const auto rep = build_rep(4);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 200; ++n) {
    std::vector<double> x(4);
    for (auto& v : x) v = nd(gen);
    Eigen::VectorXcd s(4);
    for (int a = 0; a < 4; ++a) s[a] = {nd(gen), nd(gen)};
    double x2 = 0;
    for (double v : x) x2 += v * v;
    EXPECT_NEAR(clifford_mul(rep, x, s).squaredNorm(), x2 * s.squaredNorm(),
                1e-12 * x2 * s.squaredNorm());
  }
  const std::vector<double> bad(3, 1.0);
  EXPECT_THROW(clifford_mul(rep, bad, Eigen::VectorXcd::Ones(4)), ShapeError);
  EXPECT_THROW(clifford_mul(rep, std::vector<double>(4, 1.0), Eigen::VectorXcd::Ones(2)),
               ShapeError);
}
