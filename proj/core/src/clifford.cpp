#include "nldirac/clifford.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "nldirac/errors.hpp"

namespace nld {

namespace {

using Mat = Eigen::MatrixXcd;
const std::complex<double> I1{0.0, 1.0};

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<Mat> even_rep(int m) {
  Mat e1(2, 2), e2(2, 2);
  e1 << 0, 1, -1, 0;
  e2 << 0, I1, I1, 0;
  std::vector<Mat> g{e1, e2};
  Mat s3(2, 2), is1(2, 2), is2(2, 2);
  s3 << 1, 0, 0, -1;
  is1 << 0, I1, I1, 0;
  is2 << 0, 1, -1, 0;
  for (int d = 2; d < m; d += 2) {
    const Mat id = Mat::Identity(g.front().rows(), g.front().cols());
    std::vector<Mat> next;
    next.reserve(g.size() + 2);
    for (const auto& e : g) next.push_back(kron(e, s3));
    next.push_back(kron(id, is1));
    next.push_back(kron(id, is2));
    g = std::move(next);
  }
  return g;
}

void check_shape(const CliffordRep& rep, std::span<const double> x, const Eigen::VectorXcd& s) {
  if (static_cast<int>(x.size()) != rep.m || s.size() != rep.N)
    throw ShapeError("clifford: expected x of length " + std::to_string(rep.m) +
                     " and s of length " + std::to_string(rep.N));
}

}  // namespace

CliffordRep build_rep(int m) {
  if (m < 2) throw InvalidArgument("clifford: invalid dimension " + std::to_string(m));
  CliffordRep rep;
  rep.m = m;
  rep.gamma = even_rep(m - (m % 2));
  if (m % 2 == 1) {
    // odd case: append the volume element, rescaled to square to -I
    Mat w = Mat::Identity(rep.gamma.front().rows(), rep.gamma.front().cols());
    for (const auto& e : rep.gamma) w = w * e;
    const Mat sq = w * w;
    if (sq.isApprox(-Mat::Identity(w.rows(), w.cols()))) {
      rep.gamma.push_back(w);
    } else {
      rep.gamma.push_back(I1 * w);
    }
  }
  rep.N = static_cast<int>(rep.gamma.front().rows());
  return rep;
}

Eigen::VectorXcd clifford_mul(const CliffordRep& rep, std::span<const double> x,
                              const Eigen::VectorXcd& s) {
  check_shape(rep, x, s);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rep.N);
  for (int j = 0; j < rep.m; ++j)
    if (x[j] != 0.0) out.noalias() += x[j] * (rep.gamma[j] * s);
  return out;
}

Eigen::VectorXcd one_minus_x_mul(const CliffordRep& rep, std::span<const double> x,
                                 const Eigen::VectorXcd& s) {
  return s - clifford_mul(rep, x, s);
}

double CliffordResiduals::worst() const {
  return std::max({anticommutator, skew, unitarity, norm_identity});
}

CliffordResiduals check_rep(const CliffordRep& rep, int samples, std::uint64_t seed) {
  CliffordResiduals r;
  const Mat id = Mat::Identity(rep.N, rep.N);
  for (int i = 0; i < rep.m; ++i) {
    const Mat& a = rep.gamma[i];
    r.skew = std::max(r.skew, (a.adjoint() + a).cwiseAbs().maxCoeff());
    r.unitarity = std::max(r.unitarity, (a.adjoint() * a - id).cwiseAbs().maxCoeff());
    for (int j = 0; j < rep.m; ++j) {
      Mat ac = a * rep.gamma[j] + rep.gamma[j] * a;
      if (i == j) ac += 2.0 * id;
      r.anticommutator = std::max(r.anticommutator, ac.cwiseAbs().maxCoeff());
    }
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(rep.m);
  for (int n = 0; n < samples; ++n) {
    for (auto& v : x) v = nd(gen);
    Eigen::VectorXcd s(rep.N);
    for (int a = 0; a < rep.N; ++a) s[a] = {nd(gen), nd(gen)};
    double x2 = 0;
    for (double v : x) x2 += v * v;
    const double lhs = one_minus_x_mul(rep, x, s).squaredNorm();
    const double rhs = (1.0 + x2) * s.squaredNorm();
    r.norm_identity = std::max(r.norm_identity, std::abs(lhs - rhs) / rhs);
  }
  return r;
}

}  // namespace nld
