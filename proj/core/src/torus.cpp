#include "nldirac/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "nldirac/errors.hpp"

namespace nld {

namespace {

bool smooth_number(int n) {
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

int TorusGrid::default_grid(int K) {
  int n = 4 * K + 2;
  while (n % 2 != 0 || !smooth_number(n)) ++n;
  return n;
}

TorusGrid::TorusGrid(int m, int K, int n_grid) : m_(m), K_(K) {
  if (m < 2) throw InvalidArgument("torus: invalid dimension " + std::to_string(m));
  if (K < 1) throw InvalidArgument("torus: invalid cutoff K=" + std::to_string(K));
  n_ = n_grid > 0 ? n_grid : default_grid(K);
  if (n_ % 2 != 0 || n_ < 2 * K + 2)
    throw InvalidArgument("torus: n_grid must be even and >= 2K+2, got " + std::to_string(n_));
  volume_ = std::pow(2.0 * std::numbers::pi, m);
  points_ = 1;
  for (int j = 0; j < m; ++j) points_ *= static_cast<std::size_t>(n_);
  cell_ = volume_ / static_cast<double>(points_);

  const int side = 2 * K + 1;
  std::size_t count = 1;
  for (int j = 0; j < m; ++j) count *= static_cast<std::size_t>(side);
  std::vector<int> raw(count * m);
  std::vector<int> sq(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t r = idx;
    int s = 0;
    for (int j = m - 1; j >= 0; --j) {
      const int kj = static_cast<int>(r % side) - K;
      r /= side;
      raw[idx * m + j] = kj;
      s += kj * kj;
    }
    sq[idx] = s;
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sq[a] != sq[b]) return sq[a] < sq[b];
    return std::lexicographical_compare(raw.begin() + a * m, raw.begin() + (a + 1) * m,
                                        raw.begin() + b * m, raw.begin() + (b + 1) * m);
  });
  k_.resize(count * m);
  ksq_.resize(count);
  offset_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t src = order[i];
    ksq_[i] = sq[src];
    std::size_t off = 0;
    for (int j = 0; j < m; ++j) {
      const int kj = raw[src * m + j];
      k_[i * m + j] = kj;
      off = off * n_ + static_cast<std::size_t>((kj + n_) % n_);
    }
    offset_[i] = off;
  }
}

double TorusGrid::coordinate(std::size_t point, int axis) const {
  std::size_t r = point;
  for (int j = m_ - 1; j > axis; --j) r /= n_;
  return 2.0 * std::numbers::pi * static_cast<double>(r % n_) / n_;
}

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  if (!same_shape(o)) throw ShapeError("field: shape mismatch");
  c_ += o.c_;
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& o) {
  if (!same_shape(o)) throw ShapeError("field: shape mismatch");
  c_ -= o.c_;
  return *this;
}

SpinorField& SpinorField::axpy(cplx a, const SpinorField& x) {
  if (!same_shape(x)) throw ShapeError("field: shape mismatch");
  c_ += a * x.c_;
  return *this;
}

EigenTable::Impl::Impl(int m, int K, int n_grid) : rep(build_rep(m)), grid(m, K, n_grid) {
  const int N = rep.N;
  igamma.resize(static_cast<std::size_t>(m) * N * N);
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c)
        igamma[(static_cast<std::size_t>(j) * N + r) * N + c] = cplx{0, 1} * rep.gamma[j](r, c);

  std::map<int, long long> shells;
  for (std::size_t i = 0; i < grid.mode_count(); ++i) ++shells[grid.k_sq(i)];
  std::vector<SpectrumEntry> pos;
  for (const auto& [ksq, count] : shells) {
    if (ksq == 0) continue;
    pos.push_back({std::sqrt(static_cast<double>(ksq)), count * (N / 2)});
  }
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    spectrum.push_back({-it->value, it->multiplicity});
  spectrum.push_back({0.0, shells[0] * N});
  spectrum.insert(spectrum.end(), pos.begin(), pos.end());
  colloc = std::make_unique<Collocation>(grid, N);
}

EigenTable::EigenTable(int m, int K, int n_grid) : impl_(std::make_shared<Impl>(m, K, n_grid)) {}

EigenTable assemble(int m, int K, int n_grid) { return EigenTable(m, K, n_grid); }

Eigen::MatrixXcd EigenTable::symbol(std::size_t mode) const {
  const auto k = grid().k(mode);
  const int N = rank();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < grid().dim(); ++j)
    if (k[j] != 0) s += cplx{0, static_cast<double>(k[j])} * rep().gamma[j];
  return s;
}

ModeBlock EigenTable::block(std::size_t mode) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symbol(mode));
  ModeBlock b;
  b.eigenvalues = es.eigenvalues();
  b.basis = es.eigenvectors();
  // snap to the exact values +-|k|
  const double r = std::sqrt(static_cast<double>(grid().k_sq(mode)));
  for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
    b.eigenvalues[i] = r == 0.0 ? 0.0 : (b.eigenvalues[i] < 0 ? -r : r);
  return b;
}

void EigenTable::apply_mode(std::size_t mode, const cplx* in, cplx* out, double a_plus,
                            double a_minus) const {
  const int N = rank();
  const int ksq = impl_->grid.k_sq(mode);
  const double avg = 0.5 * (a_plus + a_minus);
  const double dif = 0.5 * (a_plus - a_minus);
  if (ksq == 0 || dif == 0.0) {
    const double a = ksq == 0 ? a_plus : avg;
    for (int r = 0; r < N; ++r) out[r] = a * in[r];
    return;
  }
  // sign operator S = i k.gamma / |k|; P+- = (1 +- S)/2
  const auto k = impl_->grid.k(mode);
  const double coef = dif / std::sqrt(static_cast<double>(ksq));
  cplx tmp[16];
  cplx* acc = N <= 16 ? tmp : nullptr;
  std::vector<cplx> big;
  if (!acc) {
    big.resize(N);
    acc = big.data();
  }
  for (int r = 0; r < N; ++r) acc[r] = avg * in[r];
  for (int j = 0; j < impl_->grid.dim(); ++j) {
    if (k[j] == 0) continue;
    const cplx* g = impl_->igamma.data() + static_cast<std::size_t>(j) * N * N;
    const double kc = coef * k[j];
    for (int r = 0; r < N; ++r) {
      cplx s = 0;
      for (int c = 0; c < N; ++c) s += g[r * N + c] * in[c];
      acc[r] += kc * s;
    }
  }
  for (int r = 0; r < N; ++r) out[r] = acc[r];
}

}  // namespace nld
