#include "nldirac/functional.hpp"

#include <cmath>

#include "nldirac/errors.hpp"

namespace nld {

double PointwiseProfile::integral(const GridValues& v) const {
  const Eigen::Index pts = v.size() / rank;
  double acc = 0;
  for (Eigen::Index x = 0; x < pts; ++x) {
    const double s = v.segment(x * rank, rank).norm();
    acc += nl->G(s);
  }
  return acc * cell;
}

GridValues PointwiseProfile::first(const GridValues& v) const {
  GridValues out(v.size());
  const Eigen::Index pts = v.size() / rank;
  for (Eigen::Index x = 0; x < pts; ++x) {
    auto seg = v.segment(x * rank, rank);
    const double s = seg.norm();
    out.segment(x * rank, rank) = (s > 0 ? nl->g(s) : 0.0) * seg;
  }
  return out;
}

GridValues PointwiseProfile::second(const GridValues& v, const GridValues& h) const {
  GridValues out(v.size());
  const Eigen::Index pts = v.size() / rank;
  for (Eigen::Index x = 0; x < pts; ++x) {
    auto u = v.segment(x * rank, rank);
    auto d = h.segment(x * rank, rank);
    const double s = u.norm();
    if (s == 0) {
      out.segment(x * rank, rank).setZero();
      continue;
    }
    const double re = u.dot(d).real();
    out.segment(x * rank, rank) = nl->g(s) * d + (nl->dg(s) / s * re) * u;
  }
  return out;
}

Functional::Functional(SpectralSplit split, Nonlinearity nl)
    : split_(std::move(split)), nl_(std::move(nl)), lambda_(split_.lambda()) {}

Functional::Functional(SpectralSplit split, Nonlinearity nl, double lambda)
    : split_(std::move(split)), nl_(std::move(nl)), lambda_(lambda) {}

PointwiseProfile Functional::profile() const {
  return {&nl_, table().rank(), table().grid().cell_volume()};
}

double Functional::K(const GridValues& v) const { return profile().integral(v); }

SpinorField Functional::K_gradient(const GridValues& v) const {
  return table().collocation().from_grid(profile().first(v));
}

SpinorField Functional::K_hessian(const GridValues& v, const SpinorField& h) const {
  const auto& c = table().collocation();
  return c.from_grid(profile().second(v, c.to_grid(h)));
}

double Functional::quadratic(const SpinorField& psi) const {
  return 0.5 * l2_inner(table(), apply_shifted(table(), psi, lambda_), psi);
}

double Functional::value(const SpinorField& psi) const { return value(psi, values(psi)); }

double Functional::value(const SpinorField& psi, const GridValues& v) const {
  return quadratic(psi) - K(v);
}

SpinorField Functional::l2_gradient(const SpinorField& psi) const {
  return l2_gradient(psi, values(psi));
}

SpinorField Functional::l2_gradient(const SpinorField& psi, const GridValues& v) const {
  SpinorField r = apply_shifted(table(), psi, lambda_);
  r -= K_gradient(v);
  return r;
}

double L_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& psi,
                double lambda) {
  return Functional(split, nl, lambda).value(psi);
}

SpinorField grad_L(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& psi,
                   double lambda) {
  return Functional(split, nl, lambda).gradient(psi);
}

// ---------------------------------------------------------------------------

KernelProjector::KernelProjector(const SpectralSplit& split, Nonlinearity profile)
    : table_(split.table()), nl_(std::move(profile)) {
  const auto& grid = table_.grid();
  const int N = table_.rank();
  for (std::size_t i = 0; i < table_.modes(); ++i) {
    for (int slot = 0; slot < 2; ++slot) {
      if (split.part(i, slot) != Part::Zero) continue;
      if (grid.k_sq(i) == 0 && slot == 1) continue;
      if (grid.k_sq(i) == 0) {
        // whole fiber of the zero mode
        for (int c = 0; c < N; ++c) {
          modes_.push_back(i);
          spinors_.push_back(Eigen::VectorXcd::Unit(N, c));
        }
        continue;
      }
      const ModeBlock b = table_.block(i);
      const int half = N / 2;
      const int start = slot == 0 ? half : 0;
      for (int c = start; c < start + half; ++c) {
        modes_.push_back(i);
        spinors_.push_back(b.basis.col(c));
      }
    }
  }
  const auto& col = table_.collocation();
  values_.resize(static_cast<Eigen::Index>(grid.point_count()) * N,
                 static_cast<Eigen::Index>(modes_.size()));
  for (std::size_t a = 0; a < modes_.size(); ++a) {
    SpinorField e = table_.zeros();
    e.mode(modes_[a]) = spinors_[a];
    values_.col(static_cast<Eigen::Index>(a)) = col.to_grid(e);
  }
}

SpinorField KernelProjector::field(const Eigen::VectorXd& z) const {
  SpinorField f = table_.zeros();
  for (std::size_t a = 0; a < modes_.size(); ++a)
    f.mode(modes_[a]) += cplx(z[2 * a], z[2 * a + 1]) * spinors_[a];
  return f;
}

Eigen::VectorXd KernelProjector::gradient(const GridValues& u, double* scale) const {
  const PointwiseProfile pp{&nl_, table_.rank(), table_.grid().cell_volume()};
  const GridValues n = pp.first(u);
  const Eigen::VectorXcd z = values_.adjoint() * n * pp.cell;
  Eigen::VectorXd g(2 * z.size());
  for (Eigen::Index a = 0; a < z.size(); ++a) {
    // d/dz of int G(|psi - phi|) along b_a and i b_a
    g[2 * a] = -z[a].real();
    g[2 * a + 1] = -z[a].imag();
  }
  if (scale) *scale = std::sqrt(n.squaredNorm() * pp.cell * table_.grid().volume());
  return g;
}

Eigen::MatrixXd KernelProjector::hessian(const GridValues& u) const {
  const PointwiseProfile pp{&nl_, table_.rank(), table_.grid().cell_volume()};
  const Eigen::Index d = static_cast<Eigen::Index>(modes_.size());
  Eigen::MatrixXd H(2 * d, 2 * d);
  for (Eigen::Index j = 0; j < 2 * d; ++j) {
    GridValues e = values_.col(j / 2);
    if (j % 2) e *= cplx(0, 1);
    const Eigen::VectorXcd z = values_.adjoint() * pp.second(u, e) * pp.cell;
    for (Eigen::Index a = 0; a < d; ++a) {
      H(2 * a, j) = z[a].real();
      H(2 * a + 1, j) = z[a].imag();
    }
  }
  return 0.5 * (H + H.transpose());
}

KernelProjector::Result KernelProjector::solve(const SpinorField& psi,
                                               const GridValues& psi_values) const {
  Result res;
  if (trivial()) {
    res.T = table_.zeros();
    res.u = psi_values;
    return res;
  }
  const PointwiseProfile pp{&nl_, table_.rank(), table_.grid().cell_volume()};
  const Eigen::Index d = static_cast<Eigen::Index>(modes_.size());
  // L2 projection as the initial guess
  Eigen::VectorXd z(2 * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const cplx c = spinors_[a].dot(psi.mode(modes_[a]));
    z[2 * a] = c.real();
    z[2 * a + 1] = c.imag();
  }
  auto residual = [&](const Eigen::VectorXd& zz) -> GridValues {
    Eigen::VectorXcd cz(d);
    for (Eigen::Index a = 0; a < d; ++a) cz[a] = cplx(zz[2 * a], zz[2 * a + 1]);
    return psi_values - values_ * cz;
  };
  GridValues u = residual(z);
  double phi = pp.integral(u);
  double scale = 0;
  Eigen::VectorXd g = gradient(u, &scale);
  const double target = 1e-13 * std::max(1.0, scale);
  int it = 0;
  for (; it < 200 && g.norm() > target; ++it) {
    const Eigen::MatrixXd H = hessian(u);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Eigen::VectorXd step = -ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(g) >= 0) step = -g;
    double a = 1;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
      const Eigen::VectorXd zt = z + a * step;
      GridValues ut = residual(zt);
      const double pt = pp.integral(ut);
      const Eigen::VectorXd gt = gradient(ut);
      if (pt <= phi + 1e-4 * a * step.dot(g) ||
          (pt <= phi + 1e-14 * std::abs(phi) && gt.norm() < g.norm())) {
        z = zt;
        u = std::move(ut);
        phi = pt;
        g = gt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  res.optimality = g.norm() / std::max(1.0, scale);
  if (res.optimality > 1e-10)
    throw SolverFailure("kernel projection did not converge (optimality " +
                        std::to_string(res.optimality) + ")");
  res.iterations = it;
  res.T = field(z);
  res.u = std::move(u);
  return res;
}

SpinorField KernelProjector::operator()(const SpinorField& psi) const {
  return solve(psi, table_.collocation().to_grid(psi)).T;
}

SpinorField KernelProjector::derivative(const GridValues& u, const SpinorField& h) const {
  if (trivial()) return table_.zeros();
  const PointwiseProfile pp{&nl_, table_.rank(), table_.grid().cell_volume()};
  const Eigen::Index d = static_cast<Eigen::Index>(modes_.size());
  const GridValues hv = table_.collocation().to_grid(h);
  const Eigen::VectorXcd z = values_.adjoint() * pp.second(u, hv) * pp.cell;
  Eigen::VectorXd rhs(2 * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    rhs[2 * a] = z[a].real();
    rhs[2 * a + 1] = z[a].imag();
  }
  const Eigen::VectorXd y = hessian(u).ldlt().solve(rhs);
  return field(y);
}

// ---------------------------------------------------------------------------

TildeFunctional::TildeFunctional(SpectralSplit split, Nonlinearity nl)
    : split_(std::move(split)), nl_(nl), T_(split_, std::move(nl)) {}

PointwiseProfile TildeFunctional::profile() const {
  return {&nl_, table().rank(), table().grid().cell_volume()};
}

KernelProjector::Result TildeFunctional::project(const SpinorField& psi) const {
  return T_.solve(psi, table().collocation().to_grid(psi));
}

double TildeFunctional::F(const SpinorField& psi) const {
  return profile().integral(project(psi).u);
}

SpinorField TildeFunctional::F_gradient(const SpinorField& psi) const {
  return F_gradient(project(psi));
}

SpinorField TildeFunctional::F_gradient(const KernelProjector::Result& r) const {
  return table().collocation().from_grid(profile().first(r.u));
}

SpinorField TildeFunctional::F_hessian(const KernelProjector::Result& r,
                                       const SpinorField& h) const {
  const auto& c = table().collocation();
  SpinorField k = h;
  k -= T_.derivative(r.u, h);
  return c.from_grid(profile().second(r.u, c.to_grid(k)));
}

double TildeFunctional::residual_power(const KernelProjector::Result& r) const {
  return lp_power_values(r.u, table().rank(), table().grid().cell_volume(), nl_.two_star());
}

double TildeFunctional::value(const SpinorField& psi) const {
  return 0.5 * split_.quadratic(psi) - F(psi);
}

SpinorField TildeFunctional::gradient(const SpinorField& psi) const {
  SpinorField g = split_.project(psi, Part::Plus);
  g -= split_.project(psi, Part::Minus);
  g -= split_.riesz(F_gradient(psi));
  return g;
}

}  // namespace nld
