#include "nldirac/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nldirac/errors.hpp"

namespace nld {

double SpectralSplit::default_tol(double lambda) { return 1e-9 * std::max(1.0, std::abs(lambda)); }

SpectralSplit::SpectralSplit(EigenTable table, double lambda, double tol)
    : table_(std::move(table)), lambda_(lambda), tol_(tol > 0 ? tol : default_tol(lambda)) {
  int near = 0;
  for (const auto& e : table_.spectrum())
    if (std::abs(e.value - lambda_) < tol_) ++near;
  if (near > 1)
    throw AmbiguousSplit("split: lambda=" + std::to_string(lambda_) +
                         " lies within tol of several eigenvalues");
  const std::size_t n = table_.modes();
  const auto half = static_cast<std::size_t>(table_.rank() / 2);
  w_.resize(2 * n);
  part_.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int slot = 0; slot < 2; ++slot) {
      const double sigma = eigenvalue(i, slot);
      const double d = sigma - lambda_;
      signed char p = std::abs(d) < tol_ ? 0 : (d > 0 ? 1 : -1);
      part_[2 * i + slot] = p;
      w_[2 * i + slot] = p == 0 ? 1.0 : std::sqrt(std::abs(d));
    }
    if (table_.grid().k_sq(i) == 0) {
      dims_[part_[2 * i] + 1] += static_cast<std::size_t>(table_.rank());
    } else {
      dims_[part_[2 * i] + 1] += half;
      dims_[part_[2 * i + 1] + 1] += half;
    }
  }
}

double SpectralSplit::eigenvalue(std::size_t mode, int slot) const {
  const double r = std::sqrt(static_cast<double>(table_.grid().k_sq(mode)));
  return slot == 0 ? r : -r;
}

std::size_t SpectralSplit::dim(Part p) const { return dims_[static_cast<int>(p) + 1]; }

SpinorField SpectralSplit::project(const SpinorField& f, Part p) const {
  return map(f, [p](Part q, double) { return q == p ? 1.0 : 0.0; });
}

SpinorField SpectralSplit::project_fiber(const SpinorField& f) const {
  return map(f, [](Part q, double) { return q == Part::Plus ? 0.0 : 1.0; });
}

SpinorField SpectralSplit::scale(const SpinorField& f, double power) const {
  if (power == -2.0) return map(f, [](Part, double w) { return 1.0 / (w * w); });
  return map(f, [power](Part, double w) { return std::pow(w, power); });
}

double SpectralSplit::inner(const SpinorField& a, const SpinorField& b) const {
  return l2_inner(table_, scale(a, 2.0), b);
}

double SpectralSplit::norm(const SpinorField& f) const { return std::sqrt(inner(f, f)); }

double SpectralSplit::dual_norm(const SpinorField& r) const {
  return std::sqrt(l2_inner(table_, riesz(r), r));
}

double SpectralSplit::quadratic(const SpinorField& f) const {
  const SpinorField g =
      map(f, [](Part q, double w) { return q == Part::Zero ? 0.0 : static_cast<double>(q) * w * w; });
  return l2_inner(table_, g, f);
}

SpectralSplit split(const EigenTable& table, double lambda, double tol) {
  return SpectralSplit(table, lambda, tol);
}

SpinorField apply_shifted(const EigenTable& table, const SpinorField& f, double lambda) {
  if (f.modes() != table.modes() || f.rank() != table.rank())
    throw ShapeError("apply_dirac: field does not match table");
  SpinorField out(f.modes(), f.rank());
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double r = std::sqrt(static_cast<double>(table.grid().k_sq(i)));
    table.apply_mode(i, f.mode_data(i), out.mode_data(i), r - lambda, -r - lambda);
  }
  return out;
}

SpinorField apply_dirac(const EigenTable& table, const SpinorField& f) {
  return apply_shifted(table, f, 0.0);
}

cplx l2_pairing(const EigenTable& table, const SpinorField& a, const SpinorField& b) {
  if (!a.same_shape(b)) throw ShapeError("l2: shape mismatch");
  return table.grid().volume() * a.coeffs().dot(b.coeffs());
}

double l2_inner(const EigenTable& table, const SpinorField& a, const SpinorField& b) {
  return l2_pairing(table, a, b).real();
}

double l2_norm(const EigenTable& table, const SpinorField& f) {
  return std::sqrt(table.grid().volume()) * f.coeffs().norm();
}

double norm_lambda(const SpectralSplit& s, const SpinorField& f) { return s.norm(f); }
double dual_norm(const SpectralSplit& s, const SpinorField& r) { return s.dual_norm(r); }

double lp_power_values(const GridValues& v, int rank, double cell_volume, double p) {
  if (p < 1.0) throw DomainError("lp_norm: p must be >= 1, got " + std::to_string(p));
  const Eigen::Index pts = v.size() / rank;
  double acc = 0;
  for (Eigen::Index j = 0; j < pts; ++j) {
    double s2 = 0;
    for (int a = 0; a < rank; ++a) s2 += std::norm(v[j * rank + a]);
    acc += p == 2.0 ? s2 : (p == 4.0 ? s2 * s2 : std::pow(s2, 0.5 * p));
  }
  return acc * cell_volume;
}

double lp_norm_values(const GridValues& v, int rank, double cell_volume, double p) {
  return std::pow(lp_power_values(v, rank, cell_volume, p), 1.0 / p);
}

double lp_norm(const EigenTable& table, const SpinorField& f, double p) {
  if (p < 1.0) throw DomainError("lp_norm: p must be >= 1, got " + std::to_string(p));
  return lp_norm_values(table.collocation().to_grid(f), table.rank(), table.grid().cell_volume(), p);
}

WeylCounts weyl_counts(const EigenTable& table, double Lambda) {
  if (Lambda > table.grid().cutoff())
    throw TruncationUnsafe("weyl: Lambda=" + std::to_string(Lambda) + " exceeds cutoff K=" +
                           std::to_string(table.grid().cutoff()));
  WeylCounts w;
  for (const auto& e : table.spectrum()) {
    if (std::abs(e.value) > Lambda) continue;
    if (e.value > 0) w.d_plus += e.multiplicity;
    if (e.value < 0) w.d_minus += e.multiplicity;
    if (e.value == 0) w.n_count += e.multiplicity;
  }
  w.n_count += w.d_plus + w.d_minus;
  const int m = table.grid().dim();
  w.ratio = static_cast<double>(w.d_plus) / std::pow(Lambda, m);
  const double ball = std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  w.c_m_vol = 0.5 * table.rank() * ball;
  return w;
}

SpinorField plane_wave(const EigenTable& table, std::size_t mode, int sign, cplx amplitude) {
  SpinorField f = table.zeros();
  const ModeBlock b = table.block(mode);
  Eigen::Index col = sign > 0 ? b.eigenvalues.size() - 1 : 0;
  if (table.grid().k_sq(mode) != 0) {
    // first eigenvector of the requested branch
    for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
      if ((sign > 0) == (b.eigenvalues[i] > 0)) {
        col = i;
        break;
      }
  }
  f.mode(mode) = amplitude * b.basis.col(col);
  return f;
}

}  // namespace nld
