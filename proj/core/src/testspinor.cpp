#include "nldirac/testspinor.hpp"

#include <cmath>
#include <numbers>

#include "nldirac/errors.hpp"

namespace nld {

Eigen::VectorXcd default_psi0(const CliffordRep& rep) {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(rep.N);
  s[0] = std::pow(static_cast<double>(rep.m), 0.5 * (rep.m - 1));
  return s;
}

double cutoff(double r, double delta) {
  if (r <= delta) return 1.0;
  if (r >= 2 * delta) return 0.0;
  const double u = (r - delta) / delta;
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

Eigen::VectorXcd euclidean_solution(const CliffordRep& rep, std::span<const double> x,
                                    const Eigen::VectorXcd& psi0) {
  if (static_cast<int>(x.size()) != rep.m || psi0.size() != rep.N)
    throw ShapeError("euclidean_solution: shape mismatch");
  double r2 = 0;
  for (double v : x) r2 += v * v;
  const double mu = 1.0 / (1.0 + r2);
  return std::pow(mu, 0.5 * rep.m) * one_minus_x_mul(rep, x, psi0);
}

double dirac_fd_residual(const CliffordRep& rep, const Eigen::VectorXcd& psi0, double h,
                         double coef) {
  const int m = rep.m;
  double worst = 0;
  for (int p = 0; p < 5; ++p) {
    std::vector<double> x(m);
    for (int j = 0; j < m; ++j) x[j] = 0.9 * std::sin(1.3 * (p + 1) + 0.7 * j);
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(rep.N);
    for (int j = 0; j < m; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      d += rep.gamma[j] *
           ((euclidean_solution(rep, xp, psi0) - euclidean_solution(rep, xm, psi0)) / (2 * h));
    }
    double r2 = 0;
    for (double v : x) r2 += v * v;
    d -= coef / (1.0 + r2) * euclidean_solution(rep, x, psi0);
    worst = std::max(worst, d.norm());
  }
  return worst;
}

TestSpinor build_test_spinor(const EigenTable& table, const TestSpinorParams& params) {
  const auto& grid = table.grid();
  const auto& rep = table.rep();
  const int m = grid.dim();
  const double pi = std::numbers::pi;
  if (2 * params.delta >= pi)
    throw ChartOverflow("cutoff support 2 delta = " + std::to_string(2 * params.delta) +
                        " leaves the chart (needs < pi)");
  if (!(params.eps > 0) || params.eps > params.delta)
    throw InvalidArgument("test spinor needs 0 < eps <= delta");
  const Eigen::VectorXcd psi0 = params.psi0.size() ? params.psi0 : default_psi0(rep);
  if (psi0.size() != rep.N) throw ShapeError("psi0 has the wrong rank");
  std::vector<double> center = params.center;
  if (center.empty()) center.assign(m, 0.0);
  if (static_cast<int>(center.size()) != m) throw ShapeError("center has the wrong dimension");

  TestSpinor ts;
  const int N = rep.N;
  ts.values = GridValues::Zero(static_cast<Eigen::Index>(grid.point_count()) * N);
  const double amp = std::pow(params.eps, -0.5 * (m - 1));
  std::vector<double> x(m), y(m);
  for (std::size_t pt = 0; pt < grid.point_count(); ++pt) {
    double r2 = 0;
    for (int j = 0; j < m; ++j) {
      // periodic displacement in (-pi, pi]
      double d = grid.coordinate(pt, j) - center[j];
      d -= 2 * pi * std::round(d / (2 * pi));
      x[j] = d;
      r2 += d * d;
    }
    const double eta = cutoff(std::sqrt(r2), params.delta);
    if (eta == 0) continue;
    for (int j = 0; j < m; ++j) y[j] = x[j] / params.eps;
    const Eigen::VectorXcd v = (eta * amp) * euclidean_solution(rep, y, psi0);
    ts.values.segment(static_cast<Eigen::Index>(pt) * N, N) = v;
    ts.sup_norm = std::max(ts.sup_norm, v.norm());
  }
  ts.field = table.collocation().from_grid(ts.values);
  ts.under_resolved = grid.n_grid() < 8.0 * 2 * pi / params.eps;
  return ts;
}

EnergyReport energy_report(const EigenTable& table, const SpectralSplit& split,
                           const TestSpinor& ts, double eps) {
  const auto& grid = table.grid();
  const int m = grid.dim();
  const double ts_exp = 2.0 * m / (m - 1.0);
  EnergyReport r;
  r.eps = eps;
  r.resolution_flag = ts.under_resolved;
  const double cell = grid.cell_volume();
  r.l2 = lp_power_values(ts.values, table.rank(), cell, 2.0);
  r.l2star = lp_power_values(ts.values, table.rank(), cell, ts_exp);
  const SpinorField Dphi = apply_dirac(table, ts.field);
  r.dirac_energy = 0.5 * l2_inner(table, Dphi, ts.field);
  r.free_energy = r.dirac_energy - r.l2star / ts_exp;
  r.dual_phi = dual_norm(split, ts.field);
  GridValues nl = ts.values;
  for (Eigen::Index x = 0; x < nl.size() / table.rank(); ++x) {
    auto seg = nl.segment(x * table.rank(), table.rank());
    const double s = seg.norm();
    seg *= s > 0 ? std::pow(s, ts_exp - 2) : 0.0;
  }
  SpinorField R = Dphi;
  R -= table.collocation().from_grid(nl);
  r.dual_residual = dual_norm(split, R);
  return r;
}

std::vector<double> default_eps_sweep() { return {0.2, 0.14, 0.1, 0.07, 0.05, 0.035, 0.025}; }

AsymptoticFit asymptotic_fit(std::span<const std::pair<double, double>> samples, double b) {
  if (samples.size() < 6) throw InvalidArgument("asymptotic_fit needs at least 6 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second > 0)) throw DomainError("asymptotic_fit needs positive values");
    if (!(samples[i].first > 0) || samples[i].first >= 1)
      throw DomainError("asymptotic_fit needs 0 < eps < 1");
    if (i && !(samples[i].first < samples[i - 1].first))
      throw InvalidArgument("asymptotic_fit needs strictly decreasing eps");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double le = std::log(samples[i].first);
    A(i, 0) = 1.0;
    A(i, 1) = le;
    y[i] = std::log(samples[i].second) - b * std::log(std::abs(le));
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  AsymptoticFit f;
  f.c = std::exp(coef[0]);
  f.a = coef[1];
  f.b = b;
  f.residual = std::sqrt((A * coef - y).squaredNorm() / static_cast<double>(n));
  return f;
}

AsymptoticFit asymptotic_fit(std::span<const std::pair<double, double>> samples) {
  AsymptoticFit f0 = asymptotic_fit(samples, 0.0);
  AsymptoticFit f1 = asymptotic_fit(samples, 1.0);
  if (f1.residual < f0.residual) std::swap(f0, f1);
  f0.a_alt = f1.a;
  f0.b_alt = f1.b;
  f0.c_alt = f1.c;
  f0.residual_alt = f1.residual;
  return f0;
}

}  // namespace nld
