#include "nldirac/accept.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "nldirac/branch.hpp"
#include "nldirac/clifford.hpp"
#include "nldirac/config.hpp"
#include "nldirac/constants.hpp"
#include "nldirac/fiber.hpp"
#include "nldirac/functional.hpp"
#include "nldirac/nehari.hpp"
#include "nldirac/testspinor.hpp"

namespace nld {

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

Check lt(std::string name, double v, double tol, std::string detail = {}) {
  return {std::move(name), v < tol, v, tol, "<", std::move(detail)};
}
Check le(std::string name, double v, double tol, std::string detail = {}) {
  return {std::move(name), v <= tol, v, tol, "<=", std::move(detail)};
}
Check ge(std::string name, double v, double tol, std::string detail = {}) {
  return {std::move(name), v >= tol, v, tol, ">=", std::move(detail)};
}
Check gt(std::string name, double v, double tol, std::string detail = {}) {
  return {std::move(name), v > tol, v, tol, ">", std::move(detail)};
}
// |v - target| <= tol * |target|
Check within(std::string name, double v, double target, double tol, std::string detail = {}) {
  Check c{std::move(name), std::abs(v - target) <= tol * std::abs(target), v, tol, "within",
          std::move(detail)};
  c.detail = "target " + fmt(target) + (c.detail.empty() ? "" : "; " + c.detail);
  return c;
}

std::size_t find_mode(const EigenTable& t, std::initializer_list<int> k) {
  for (std::size_t i = 0; i < t.modes(); ++i) {
    auto kk = t.grid().k(i);
    if (std::equal(kk.begin(), kk.end(), k.begin())) return i;
  }
  return t.modes();
}

SpinorField random_field(const EigenTable& t, std::uint64_t seed, double decay = 0.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  SpinorField f = t.zeros();
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double a = std::exp(-decay * std::sqrt(double(t.grid().k_sq(i))));
    for (int r = 0; r < f.rank(); ++r) f.mode(i)[r] = a * cplx(nd(gen), nd(gen));
  }
  return f;
}

SpinorField unit(const SpectralSplit& s, SpinorField f) {
  f *= 1.0 / s.norm(f);
  return f;
}

// least-squares slope of log y against log x
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- 1 ----
Criterion clifford_relations() {
  Criterion c{1, "Clifford relations m=2..6", {}, {}, 0};
  for (int m = 2; m <= 6; ++m) {
    const CliffordResiduals r = check_rep(build_rep(m));
    c.checks.push_back(lt("m=" + std::to_string(m) + " anticommutator", r.anticommutator, 1e-12));
    c.checks.push_back(lt("m=" + std::to_string(m) + " skew-adjoint", r.skew, 1e-12));
    c.checks.push_back(lt("m=" + std::to_string(m) + " norm identity", r.norm_identity, 1e-12));
  }
  return c;
}

// ---- 2 ----
Criterion spectral_table() {
  Criterion c{2, "spectral table, symmetry and Weyl law (m=2)", {}, {}, 0};
  const auto t0 = Clock::now();
  const EigenTable t = assemble(2, 40);
  const auto& rep = t.rep();
  double worst = 0;
  for (std::size_t i = 0; i < t.modes(); ++i) {
    // symbol i k.gamma built here from the generators
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(rep.N, rep.N);
    const auto k = t.grid().k(i);
    for (int j = 0; j < rep.m; ++j) S += cplx(0, k[j]) * rep.gamma[j];
    const ModeBlock b = t.block(i);
    for (Eigen::Index j = 0; j < b.basis.cols(); ++j)
      worst = std::max(worst, (S * b.basis.col(j) - b.eigenvalues[j] * b.basis.col(j)).norm());
  }
  c.checks.push_back(lt("eigenpair residual", worst, 1e-12));
  long long asym = 0;
  for (double L : {1.0, 5.0, 10.0, 20.0, 40.0}) {
    const WeylCounts w = weyl_counts(t, L);
    asym = std::max(asym, std::llabs(w.d_plus - w.d_minus));
  }
  c.checks.push_back(le("max |d+ - d-| over Lambda in {1,5,10,20,40}", double(asym), 0));
  const WeylCounts w = weyl_counts(t, 40);
  c.checks.push_back(within("d+(40)/40^2", w.ratio, kPi, 0.02));
  c.info.push_back("C_2 Vol = " + fmt(w.c_m_vol) + ", d+(40) = " + std::to_string(w.d_plus));
  c.checks.push_back(lt("runtime [s]", since(t0), 10));
  return c;
}

// ---- 3 ----
Criterion euclidean_identity() {
  Criterion c{3, "Euclidean solution identity D psi = (m/2) mu psi, FD order", {}, {}, 0};
  const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
  for (int m : {2, 3}) {
    const CliffordRep rep = build_rep(m);
    const Eigen::VectorXcd p0 = default_psi0(rep);
    std::vector<double> half, full;
    for (double h : hs) {
      half.push_back(dirac_fd_residual(rep, p0, h, 0.5 * m));
      full.push_back(dirac_fd_residual(rep, p0, h, m));
    }
    c.checks.push_back(ge("m=" + std::to_string(m) + " order of (m/2) version", log_slope(hs, half),
                          1.9, "residual at h=0.0025 is " + fmt(half.back())));
    c.info.push_back("m=" + std::to_string(m) + " D psi = m mu psi: order " +
                     fmt(log_slope(hs, full)) + ", residual at h=0.0025 " + fmt(full.back()));
  }
  return c;
}

// ---- 4 ----
Criterion spinor_asymptotics(int n_grid) {
  Criterion c{4, "test-spinor asymptotics (m=2)", {}, {}, 0};
  const EigenTable t(2, n_grid / 2 - 1, n_grid);
  const SpectralSplit sp = split(t, 0.5);
  std::vector<std::pair<double, double>> l2, dphi, dres, gap;
  std::vector<double> eps_flagged;
  double ratio = 0, cmax = 0, emax = -1e300;
  for (double eps : default_eps_sweep()) {
    TestSpinorParams p;
    p.eps = eps;
    const TestSpinor ts = build_test_spinor(t, p);
    const EnergyReport r = energy_report(t, sp, ts, eps);
    l2.push_back({eps, r.l2});
    dphi.push_back({eps, r.dual_phi});
    dres.push_back({eps, r.dual_residual});
    gap.push_back({eps, std::abs(r.free_energy - kPi)});
    if (r.resolution_flag) eps_flagged.push_back(eps);
    ratio = r.l2 / (eps * std::abs(std::log(eps)));
    cmax = std::max(cmax, std::abs(r.free_energy - kPi) / std::pow(eps, 1.5));
    emax = std::max(emax, r.free_energy);
  }
  const AsymptoticFit f = asymptotic_fit(l2);
  c.checks.push_back(within("|phi|_2^2 exponent", f.a, 1.0, 0.1,
                            "log-power " + fmt(f.b) + "; alternative fit a=" + fmt(f.a_alt) +
                                " b=" + fmt(f.b_alt)));
  c.checks.back().pass = c.checks.back().pass && f.b == 1.0;
  c.checks.push_back(
      within("|phi|_2^2/(eps|ln eps|) at eps=0.025 vs 8 pi", ratio, 8 * kPi, 0.1));
  c.info.push_back("ratio at eps=0.025 is " + fmt(ratio) + "; 4 pi = " + fmt(4 * kPi));
  const double adphi = asymptotic_fit(dphi, 0).a, adres = asymptotic_fit(dres, 0).a;
  c.checks.push_back({"dual norm of phi exponent", std::abs(adphi - 0.5) <= 0.07, adphi, 0.07,
                      "within", "target 0.5 +- 0.07"});
  c.checks.push_back({"dual norm of R exponent", std::abs(adres - 0.5) <= 0.07, adres, 0.07,
                      "within", "target 0.5 +- 0.07"});
  const double agap = asymptotic_fit(gap, 0).a;
  c.checks.push_back(ge("slope of |E - pi|", agap, 1.5, "C = max |E - pi|/eps^1.5 = " + fmt(cmax)));
  c.info.push_back("max E(eps) = " + fmt(emax) + " (pi = " + fmt(kPi) + ")");
  std::string fl;
  for (double e : eps_flagged) fl += (fl.empty() ? "" : ",") + fmt(e);
  c.info.push_back("n_grid " + std::to_string(n_grid) +
                   "; under-resolved eps: " + (fl.empty() ? "none" : fl));
  return c;
}

// ---- 5 ----
Criterion omega_identity() {
  Criterion c{5, "omega_m quadrature identity", {}, {}, 0};
  for (int m : {2, 3, 4})
    c.checks.push_back(lt("m=" + std::to_string(m) + " |quadrature - omega_m|",
                          std::abs(sphere_volume_by_quadrature(m) - sphere_volume(m)), 1e-8));
  return c;
}

// ---- 6 ----
Criterion closed_form_anchor(int K) {
  Criterion c{6, "closed-form anchor (m=2, BND, lambda=0.5)", {}, {}, 0};
  const EigenTable t = assemble(2, K);
  const Nonlinearity nl = Nonlinearity::zero(2);
  const SpinorField pw = plane_wave(t, find_mode(t, {1, 0}), +1, std::sqrt(0.5));
  c.checks.push_back(lt("plane-wave residual", residual_check(t, nl, pw, 0.5), 1e-12));
  DescentOptions o;
  o.guard = false;
  try {
    const BranchPoint p = minimize_M(split(t, 0.5), nl, o);
    c.checks.push_back(le("minimize_M energy", p.energy, kPi * kPi / 4 + 1e-6, "start " + p.init));
    c.checks.push_back(lt("minimize_M residual", p.residual_l2, 1e-8));
    c.checks.push_back(lt("energy vs gamma_crit", p.energy, gamma_crit(2)));
    c.info.push_back("K=" + std::to_string(K) + ", plane-wave energy pi^2/4 = " + fmt(kPi * kPi / 4));
  } catch (const std::exception& e) {
    c.checks.push_back({"minimize_M", false, 0, 0, "", e.what()});
  }
  return c;
}

// ---- 7, 8 ----
std::vector<Criterion> branch_properties(const AcceptOptions& opt) {
  Criterion c7{7, "least-energy branch (m=2, BND, lambda 0.1..0.99, K=" +
                      std::to_string(opt.branch_K) + ")",
               {}, {}, 0};
  Criterion c8{8, "second solution near lambda_1 = 1 (m=2, BND)", {}, {}, 0};
  const auto t0 = Clock::now();
  SweepConfig cfg;
  cfg.K = opt.branch_K;
  cfg.lambdas = parse_lambda_grid("0.1:0.99:0.05");
  cfg.lambdas.push_back(0.98);
  cfg.lambdas.push_back(1.0);
  cfg.second_near = {1};
  cfg.second_offsets = {0.05, 0.02, 0.01};
  cfg.threads = opt.threads;
  const SweepTable tab = branch_sweep(cfg, Nonlinearity::zero(2));
  std::map<double, const SweepRow*> least, second;
  for (const auto& r : tab.rows) (r.point.level == Level::Least ? least : second)[r.point.lambda] = &r;

  int failed = 0;
  double emin = 1e300, emax = -1e300, viol = 0;
  std::string above;
  const SweepRow* prev = nullptr;
  for (const auto& [lam, r] : least) {
    if (lam >= 1.0 - 1e-9) continue;
    if (!r->ok) {
      ++failed;
      continue;
    }
    emin = std::min(emin, r->point.energy);
    emax = std::max(emax, r->point.energy);
    if (r->point.energy >= kPi) above += (above.empty() ? "" : ", ") + fmt(lam) + ":" + fmt(r->point.energy);
    if (prev) viol = std::max(viol, r->point.energy - prev->point.energy);
    prev = r;
  }
  c7.checks.push_back(le("failed grid points", failed, 0));
  c7.checks.push_back(gt("min energy", emin, 0));
  c7.checks.push_back(le("max increase between consecutive lambda", viol, 1e-6));
  c7.checks.push_back(lt("max energy", emax, kPi, above.empty() ? "" : "at or above pi: " + above));
  const auto e99 = least.find(0.99);
  c7.checks.push_back(le("energy(0.99)", e99 != least.end() && e99->second->ok ? e99->second->point.energy : 1e300,
                         1e-3));
  const auto k1 = least.find(1.0);
  if (k1 != least.end() && k1->second->ok) {
    const auto& p = k1->second->point;
    c7.checks.push_back({"lambda=1 kernel point with T active", p.kernel_point, double(p.kernel_point), 1,
                         "==", "start " + p.init});
    c7.checks.push_back(lt("lambda=1 energy", p.energy, kPi, "residual " + fmt(p.residual_l2)));
  } else {
    c7.checks.push_back({"lambda=1 kernel point", false, 0, 0, "",
                         k1 != least.end() ? k1->second->error : "missing"});
  }
  for (const auto& [lam, r] : least)
    c7.info.push_back("lambda " + fmt(lam) + ": " +
                      (r->ok ? "energy " + fmt(r->point.energy) + " residual " + fmt(r->point.residual_l2)
                             : "failed: " + r->error));

  auto energy = [](const std::map<double, const SweepRow*>& mp, double l) {
    auto it = mp.find(l);
    return it != mp.end() && it->second->ok ? it->second->point.energy : std::nan("");
  };
  for (double l : {0.95, 0.98}) {
    const double s = energy(second, l), e = energy(least, l);
    c8.checks.push_back(gt("c~(" + fmt(l) + ") - c(" + fmt(l) + ")", s - e, 0,
                           "c~ = " + fmt(s) + ", c = " + fmt(e)));
  }
  const double s99 = energy(second, 0.99), c1 = energy(least, 1.0);
  c8.checks.push_back(within("c~(0.99) vs c(1)", s99, c1, 0.05));
  for (const auto& [lam, r] : second) {
    std::string fl;
    for (const auto& f : r->point.flags) fl += " " + f;
    c8.info.push_back("c~(" + fmt(lam) + ") = " + (r->ok ? fmt(r->point.energy) : "failed: " + r->error) +
                      (fl.empty() ? "" : " flags:" + fl));
  }
  c7.seconds = since(t0);
  c8.info.push_back("computed in the criterion 7 sweep");
  return {c7, c8};
}

// ---- 9 ----
Criterion nehari_identity() {
  Criterion c{9, "Nehari/Rayleigh identity and T_lambda properties", {}, {}, 0};
  const EigenTable t = assemble(2, 4);
  const Nonlinearity nl = Nonlinearity::zero(2);
  double worst = 0;
  for (double lam : {0.5, 1.0}) {
    const SpectralSplit sp = split(t, lam);
    const TildeFunctional E(sp, nl);
    for (int i = 0; i < 20; ++i) {
      try {
        const NehariPoint p = nehari_project(E, normalize_plus(sp, random_field(t, 500 + i)));
        const RayleighResult r = S_lambda(E, p);
        worst = std::max(worst, std::abs(r.S * r.S / (4 * p.J) - 1));
      } catch (const std::exception&) {
        worst = 1e300;
      }
    }
  }
  c.checks.push_back(lt("max |S^2/(4J) - 1| over 2x20 points", worst, 1e-6));

  const SpectralSplit sp = split(t, 1.0);
  const KernelProjector T(sp, nl);
  double eq = 0;
  for (int i = 0; i < 20; ++i) {
    const SpinorField psi = random_field(t, 40 + i);
    const SpinorField e0 = sp.project(random_field(t, 80 + i), Part::Zero);
    const SpinorField Tp = T(psi);
    const double scale = std::max(1.0, l2_norm(t, Tp));
    const cplx z = std::polar(1.0, 0.7 + i);
    for (double s : {-2.0, 0.5, 3.0})
      eq = std::max(eq, l2_norm(t, T(s * psi) - s * Tp) / (std::abs(s) * scale));
    eq = std::max(eq, l2_norm(t, T(psi + e0) - (Tp + e0)) / scale);
    eq = std::max(eq, l2_norm(t, T(z * psi) - z * Tp) / scale);
  }
  c.checks.push_back(lt("T equivariance (scaling, E0 shift, phase)", eq, 1e-10));

  const TildeFunctional E(sp, nl);
  double margin = 1e300;
  for (int i = 0; i < 200; ++i) {
    const SpinorField psi = random_field(t, 3000 + i);
    const SpinorField phi = (0.5 + (i % 7)) * random_field(t, 8000 + i);
    const auto r = E.project(psi);
    const SpinorField Fg = E.F_gradient(r);
    auto F2 = [&](const SpinorField& a, const SpinorField& b) {
      return l2_inner(t, E.F_hessian(r, b), a);
    };
    const double q = (F2(psi, psi) - l2_inner(t, Fg, psi)) +
                     2 * (F2(psi, phi) - l2_inner(t, Fg, phi)) + F2(phi, phi);
    const double bound = 2.0 / 3.0 * E.residual_power(r);
    margin = std::min(margin, (q - bound) / std::max(1.0, bound));
  }
  c.checks.push_back(ge("second-order lower bound, min relative margin", margin, -1e-10,
                        "200 samples at lambda=1"));
  return c;
}

// ---- 10 ----
Criterion multiplicity() {
  Criterion c{10, "multiplicity counts (m=2)", {}, {}, 0};
  const double nu = nu_window(2, 4 * kPi * kPi);
  c.checks.push_back(lt("|nu - 1/sqrt(pi)|", std::abs(nu - 1 / std::sqrt(kPi)), 1e-14));
  const EigenTable t = assemble(2, 8);
  c.checks.push_back(le("|l(0.5) - 4|", std::llabs(multiplicity_count(t, 0.5, nu) - 4), 0));
  c.checks.push_back(le("|l(0) - 0|", std::llabs(multiplicity_count(t, 0.0, nu)), 0));
  c.checks.push_back(le("|l(0.99) - 8|", std::llabs(multiplicity_count(t, 0.99, nu) - 8), 0));
  const EigenTable big = assemble(2, 48);
  const long long l5 = multiplicity_count(big, 5, nu), l20 = multiplicity_count(big, 20, nu);
  c.checks.push_back(gt("l(20) - l(5) at K=48", double(l20 - l5), 0,
                        "l(5)=" + std::to_string(l5) + ", l(10)=" +
                            std::to_string(multiplicity_count(big, 10, nu)) +
                            ", l(20)=" + std::to_string(l20)));
  // brute-force lattice count of eigenvalues +-|k| in the window
  long long mismatch = 0;
  for (double lam : {0.5, 5.0, 10.0, 20.0}) {
    long long n = 0;
    for (int a = -48; a <= 48; ++a)
      for (int b = -48; b <= 48; ++b) {
        const double s = std::sqrt(double(a * a + b * b));
        if (s == 0) {
          if (0 > lam && 0 < lam + nu) n += 2;
          continue;
        }
        if (s > lam && s < lam + nu) n += 1;
        if (-s > lam && -s < lam + nu) n += 1;
      }
    mismatch += std::llabs(n - multiplicity_count(big, lam, nu));
  }
  c.checks.push_back(le("count vs brute-force lattice count", double(mismatch), 0));
  return c;
}

// ---- 11 ----
Criterion gradient_checks() {
  Criterion c{11, "first derivatives vs central differences (100 samples each)", {}, {}, 0};
  const EigenTable t = assemble(2, 3);
  const double step = 1e-4;
  auto record = [&](const std::string& name, double worst,
                    std::string detail = "|fd - an| / (|grad| |h|)") {
    c.checks.push_back(lt(name, worst, 1e-5, std::move(detail)));
  };
  for (const Nonlinearity& nl : {Nonlinearity::zero(2), Nonlinearity::power(2, 1.0, 3.0),
                                 Nonlinearity::log_critical(2, 1.0, 1.0)}) {
    const SpectralSplit sp = split(t, 0.5);
    const Functional L(sp, nl);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const SpinorField psi = unit(sp, random_field(t, 200 + i));
      const SpinorField h = unit(sp, random_field(t, 900 + i));
      const double fd = (L.value(psi + step * h) - L.value(psi - step * h)) / (2 * step);
      const SpinorField g = L.gradient(psi);
      worst = std::max(worst, std::abs(fd - sp.inner(g, h)) / sp.norm(g));
    }
    record("L_lambda gradient, " + nl.name(), worst);
  }
  {
    const SpectralSplit sp = split(t, 1.0);
    const TildeFunctional E(sp, Nonlinearity::zero(2));
    const KernelProjector T(sp, Nonlinearity::zero(2));
    double worst = 0, worst_t = 0;
    for (int i = 0; i < 100; ++i) {
      const SpinorField psi = unit(sp, random_field(t, 400 + i));
      const SpinorField h = unit(sp, random_field(t, 500 + i));
      const double fd = (E.value(psi + step * h) - E.value(psi - step * h)) / (2 * step);
      const SpinorField g = E.gradient(psi);
      worst = std::max(worst, std::abs(fd - sp.inner(g, h)) / sp.norm(g));
      const auto r = T.solve(psi, t.collocation().to_grid(psi));
      const SpinorField d = T.derivative(r.u, h);
      const SpinorField fdT = (0.5 / step) * (T(psi + step * h) - T(psi - step * h));
      worst_t = std::max(worst_t, l2_norm(t, fdT - d) / std::max(l2_norm(t, d), 1e-3));
    }
    record("E~_lambda gradient at lambda=1", worst);
    c.checks.push_back(lt("T_lambda derivative at lambda=1", worst_t, 1e-5, "|fd - T'h| / |T'h|"));
  }
  {
    const SpectralSplit sp = split(t, 0.5);
    const FiberSolver solver(Functional(sp, Nonlinearity::zero(2)));
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const SpinorField phi = normalize_plus(sp, random_field(t, 60 + i));
      const FiberPoint p = solver.maximize(phi);
      const SpinorField g = solver.reduced_gradient(p);
      SpinorField v = sp.project(random_field(t, 160 + i), Part::Plus);
      v.axpy(-sp.inner(v, phi), phi);
      v = unit(sp, v);
      auto curve = [&](double s) { return normalize_plus(sp, phi + s * v); };
      const double fd =
          (solver.maximize(curve(step), &p).value - solver.maximize(curve(-step), &p).value) /
          (2 * step);
      worst = std::max(worst, std::abs(fd - sp.inner(g, v)) / sp.norm(g));
    }
    record("M_lambda reduced gradient", worst);
  }
  {
    const SpectralSplit sp = split(t, 0.5);
    const TildeFunctional E(sp, Nonlinearity::zero(2));
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const SpinorField phi = 0.5 * normalize_plus(sp, random_field(t, 700 + i));
      const double H = H_lambda(E, phi);
      const double fd =
          (J_lambda(E, (1 + step) * phi) - J_lambda(E, (1 - step) * phi)) / (2 * step);
      worst = std::max(worst, std::abs(fd - H) / std::max(std::abs(H), 1e-3));
    }
    record("J_lambda ray derivative H", worst, "|fd - H| / |H|");
  }
  for (const Nonlinearity& nl :
       {Nonlinearity::power(2, 1.0, 3.0), Nonlinearity::log_critical(2, 1.0, 1.0)}) {
    double worst = 0;
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ud(0.05, 3.0);
    for (int i = 0; i < 100; ++i) {
      const double s = ud(gen), h = 1e-5 * s;
      const double fdF = (nl.F(s + h) - nl.F(s - h)) / (2 * h);
      const double fdG = (nl.G(s + h) - nl.G(s - h)) / (2 * h);
      const double fdf = (nl.f(s + h) - nl.f(s - h)) / (2 * h);
      worst = std::max({worst, std::abs(fdF - nl.f(s) * s) / std::abs(nl.f(s) * s),
                        std::abs(fdG - nl.g(s) * s) / std::abs(nl.g(s) * s),
                        std::abs(fdf - nl.df(s)) / std::max(std::abs(nl.df(s)), 1e-8)});
    }
    c.checks.push_back(lt("F' = f s, G' = g s, f' for " + nl.name(), worst, 1e-5, "relative"));
  }
  return c;
}

template <class F>
void timed(AcceptReport& rep, F&& f) {
  const auto t0 = Clock::now();
  Criterion c = f();
  c.seconds = since(t0);
  rep.criteria.push_back(std::move(c));
}

}  // namespace

bool Criterion::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool AcceptReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
}

int AcceptReport::failures() const {
  return static_cast<int>(
      std::count_if(criteria.begin(), criteria.end(), [](const Criterion& c) { return !c.pass(); }));
}

std::vector<std::string> accept_suites() {
  return {"clifford", "spectral", "testspinor", "variational", "branch", "all"};
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "clifford") return {1};
  if (suite == "spectral") return {2};
  if (suite == "testspinor") return {3, 4, 5};
  if (suite == "variational") return {9, 11};
  if (suite == "branch") return {6, 7, 8, 10};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw InvalidArgument("unknown acceptance suite '" + suite + "'");
}

AcceptReport accept(const std::string& suite, const AcceptOptions& opt) {
  AcceptReport rep;
  rep.suite = suite;
  const auto ids = suite_criteria(suite);
  const std::set<int> want(ids.begin(), ids.end());
  const auto t0 = Clock::now();
  auto has = [&](int i) { return want.count(i) > 0; };
  auto guarded = [&](int id, const std::string& title, auto&& body) {
    timed(rep, [&]() -> Criterion {
      try {
        return body();
      } catch (const std::exception& e) {
        return Criterion{id, title, {{"run", false, 0, 0, "", e.what()}}, {}, 0};
      }
    });
  };
  if (has(1)) guarded(1, "Clifford relations", clifford_relations);
  if (has(2)) guarded(2, "spectral table", spectral_table);
  if (has(3)) guarded(3, "Euclidean identity", euclidean_identity);
  if (has(4)) guarded(4, "test-spinor asymptotics", [&] { return spinor_asymptotics(opt.spinor_grid); });
  if (has(5)) guarded(5, "omega identity", omega_identity);
  if (has(6)) guarded(6, "closed-form anchor", [&] { return closed_form_anchor(opt.anchor_K); });
  if (has(7) || has(8)) {
    try {
      for (auto& c : branch_properties(opt))
        if (has(c.id)) rep.criteria.push_back(std::move(c));
    } catch (const std::exception& e) {
      for (int id : {7, 8})
        if (has(id)) rep.criteria.push_back({id, "branch sweep", {{"run", false, 0, 0, "", e.what()}}, {}, 0});
    }
  }
  if (has(9)) guarded(9, "Nehari identity", nehari_identity);
  if (has(10)) guarded(10, "multiplicity", multiplicity);
  if (has(11)) guarded(11, "gradient checks", gradient_checks);
  std::sort(rep.criteria.begin(), rep.criteria.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  rep.seconds = since(t0);
  return rep;
}

std::vector<std::string> format_report(const AcceptReport& r) {
  std::vector<std::string> out;
  for (const auto& c : r.criteria) {
    std::string line = std::string(c.pass() ? "[PASS] " : "[FAIL] ") + "criterion " +
                       std::to_string(c.id) + ": " + c.title + " (" + fmt(c.seconds) + " s)";
    out.push_back(line);
    for (const auto& k : c.checks) {
      std::string s = std::string("    ") + (k.pass ? "ok   " : "FAIL ") + k.name + ": " +
                      fmt(k.measured) + " " + k.relation + " " + fmt(k.tolerance);
      if (!k.detail.empty()) s += " [" + k.detail + "]";
      out.push_back(s);
    }
    for (const auto& i : c.info) out.push_back("    info " + i);
  }
  out.push_back(std::string("suite ") + r.suite + ": " +
                std::to_string(r.criteria.size() - r.failures()) + "/" +
                std::to_string(r.criteria.size()) + " criteria pass (" + fmt(r.seconds) + " s)");
  return out;
}

}  // namespace nld
