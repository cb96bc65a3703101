#include "nldirac/fiber.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <optional>
#include <random>

#include "ascent.hpp"
#include "nldirac/errors.hpp"

namespace nld {

namespace {

class FiberModel final : public detail::AscentModel {
 public:
  FiberModel(const Functional& L, SpinorField base, const SpinorField* dir = nullptr)
      : L_(L), base_(std::move(base)), dir_(dir) {}

  double value(const SpinorField& x) override {
    const SpinorField psi = base_ + x;
    last_x_ = x;
    last_v_ = L_.values(psi);
    return L_.value(psi, last_v_);
  }
  void prepare(const SpinorField& x) override {
    psi_ = base_ + x;
    if (last_x_.same_shape(x) && last_x_.coeffs() == x.coeffs())
      v_ = last_v_;
    else
      v_ = L_.values(psi_);
    r_ = L_.l2_gradient(psi_, v_);
  }
  SpinorField gradient() override { return restrict(L_.split().riesz(r_)); }
  SpinorField neg_hessian(const SpinorField& h) override {
    SpinorField a = L_.K_hessian(v_, h);
    a -= apply_shifted(L_.table(), h, L_.lambda());
    return restrict(L_.split().riesz(a));
  }
  // onto E^0 + E^-, plus the span of dir when set
  SpinorField restrict(const SpinorField& f) const {
    SpinorField out = L_.split().project_fiber(f);
    if (dir_) out.axpy(L_.split().inner(*dir_, f), *dir_);
    return out;
  }
  double inner(const SpinorField& a, const SpinorField& b) override {
    return L_.split().inner(a, b);
  }
  const SpinorField& residual() const { return r_; }

 private:
  const Functional& L_;
  SpinorField base_;
  const SpinorField* dir_;
  SpinorField psi_, r_, last_x_;
  GridValues v_, last_v_;
};

SpinorField random_field(const EigenTable& table, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  SpinorField f = table.zeros();
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double decay = 1.0 / (1.0 + table.grid().k_sq(i));
    for (int c = 0; c < f.rank(); ++c) f.mode(i)[c] = decay * cplx(n(rng), n(rng));
  }
  return f;
}

}  // namespace

SpinorField normalize_plus(const SpectralSplit& s, const SpinorField& f) {
  SpinorField p = s.project(f, Part::Plus);
  const double n = s.norm(p);
  if (!(n > 0)) throw InvalidArgument("direction has no E+ component");
  p *= 1.0 / n;
  return p;
}

FiberSolver::FiberSolver(Functional L, FiberOptions opt) : L_(std::move(L)), opt_(opt) {}

InnerSolve FiberSolver::inner(const SpinorField& phi, double t, const SpinorField* warm) const {
  FiberModel model(L_, t * phi);
  SpinorField x0 = warm ? split().project_fiber(*warm) : L_.table().zeros();
  detail::AscentResult r = detail::newton_ascent(model, std::move(x0), opt_.inner_tol,
                                                 opt_.inner_max);
  if (!r.converged && r.gradient_norm > 100 * opt_.inner_tol)
    throw SolverFailure("fiber inner solve stalled at gradient norm " +
                        std::to_string(r.gradient_norm) + " (t = " + std::to_string(t) + ")");
  InnerSolve out;
  out.slope = l2_inner(L_.table(), model.residual(), phi);
  out.chi = std::move(r.x);
  out.value = r.value;
  out.gradient_norm = r.gradient_norm;
  out.iterations = r.iterations;
  return out;
}

std::optional<FiberPoint> FiberSolver::maximize_joint(const SpinorField& phi,
                                                     const FiberPoint* warm) const {
  const auto& sp = split();
  double t0 = 0;
  SpinorField x0;
  if (warm && warm->t > 0) {
    t0 = warm->t;
    x0 = t0 * phi + sp.project_fiber(warm->chi);
  } else {
    // maximum of L along the ray
    const double q = L_.quadratic(phi);
    if (!(q > 0)) return std::nullopt;
    double t = 1, best = -1e300;
    for (double s = 1e-3; s < 1e6; s *= 1.25) {
      const double v = L_.value(s * phi);
      if (v > best) {
        best = v;
        t = s;
      } else if (v < 0) {
        break;
      }
    }
    t0 = t;
    x0 = t0 * phi;
  }
  FiberModel model(L_, L_.table().zeros(), &phi);
  detail::AscentResult r = detail::newton_ascent(model, std::move(x0), opt_.inner_tol,
                                                 opt_.inner_max);
  if (!r.converged) return std::nullopt;
  FiberPoint p;
  p.t = sp.inner(r.x, phi);
  if (!(p.t > 1e-8 * std::max(1.0, t0)) || !(r.value > 0)) return std::nullopt;
  p.phi = phi;
  p.chi = sp.project_fiber(r.x);
  p.psi = std::move(r.x);
  p.value = r.value;
  p.inner_iterations = r.iterations;
  p.outer_iterations = 0;
  p.gradient_norm = r.gradient_norm;
  p.t_residual = std::abs(l2_inner(L_.table(), model.residual(), phi));
  return p;
}

FiberPoint FiberSolver::maximize(const SpinorField& phi, const FiberPoint* warm) const {
  if (opt_.joint) {
    if (auto p = maximize_joint(phi, warm)) return std::move(*p);
  }
  return maximize_nested(phi, warm);
}

FiberPoint FiberSolver::maximize_nested(const SpinorField& phi, const FiberPoint* warm) const {
  struct Sample {
    double t;
    SpinorField chi;
  };
  std::vector<Sample> cache;
  int inner_its = 0;
  int evals = 0;
  auto nearest = [&](double t) -> const Sample* {
    const Sample* best = nullptr;
    for (const auto& s : cache)
      if (!best || std::abs(std::log(s.t / t)) < std::abs(std::log(best->t / t))) best = &s;
    return best;
  };
  auto solve_at = [&](double t) {
    const Sample* s = nearest(t);
    SpinorField w;
    if (s) w = (t / s->t) * s->chi;
    InnerSolve r = inner(phi, t, s ? &w : nullptr);
    inner_its += r.iterations;
    ++evals;
    cache.push_back({t, r.chi});
    return r;
  };
  auto slope = [&](double t) { return solve_at(t).slope; };

  double t0 = 1.0;
  if (warm && warm->t > 0) {
    t0 = warm->t;
    cache.push_back({warm->t, split().project_fiber(warm->chi)});
  }
  double a = t0, b = t0, sa = slope(t0), sb = sa;
  double factor = warm ? 1.02 : 1.5;
  if (sa > 0) {
    for (;;) {
      b = a * factor;
      sb = slope(b);
      if (sb <= 0) break;
      a = b;
      sa = sb;
      factor = std::min(factor * factor, 4.0);
      if (b > 1e12) throw BracketFailure("fiber slope stays positive as t grows");
    }
  } else {
    for (;;) {
      a = b / factor;
      sa = slope(a);
      if (sa > 0) break;
      b = a;
      sb = sa;
      factor = std::min(factor * factor, 4.0);
      if (a < 1e-10) throw DegenerateFiber("fiber maximizer collapses to t = 0");
    }
  }
  double t = b;
  if (sb != 0) {
    std::uintmax_t iters = static_cast<std::uintmax_t>(opt_.outer_max);
    const int bits = std::max(8, static_cast<int>(-std::log2(opt_.t_rel_tol)));
    auto br = boost::math::tools::toms748_solve(slope, a, b, sa, sb,
                                                boost::math::tools::eps_tolerance<double>(bits),
                                                iters);
    t = 0.5 * (br.first + br.second);
  }
  InnerSolve fin = solve_at(t);
  FiberPoint p;
  p.phi = phi;
  p.t = t;
  p.chi = std::move(fin.chi);
  p.psi = t * phi + p.chi;
  p.value = fin.value;
  p.inner_iterations = inner_its;
  p.outer_iterations = evals;
  p.gradient_norm = fin.gradient_norm;
  p.t_residual = std::abs(fin.slope);
  return p;
}

FiberSolver::Multistart FiberSolver::maximize_multistart(const SpinorField& phi, int starts,
                                                         std::uint64_t seed,
                                                         const FiberPoint* warm) const {
  Multistart out;
  out.best = maximize(phi, warm);
  out.values.push_back(out.best.value);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tref = out.best.t;
  for (int s = 1; s < starts; ++s) {
    FiberPoint w;
    w.t = tref * (0.5 + 1.5 * u(rng));
    SpinorField c = split().project_fiber(random_field(L_.table(), rng));
    const double cn = split().norm(c);
    w.chi = cn > 0 ? (tref * u(rng) / cn) * c : c;
    FiberPoint p = maximize(phi, &w);
    out.values.push_back(p.value);
    if (p.value > out.best.value) out.best = std::move(p);
  }
  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  out.unique = *hi - *lo <= 1e-8 * std::max(1.0, std::abs(*hi));
  return out;
}

SpinorField FiberSolver::reduced_gradient(const FiberPoint& p) const {
  SpinorField g = split().project(split().riesz(L_.l2_gradient(p.psi)), Part::Plus);
  g *= p.t;
  g.axpy(-split().inner(g, p.phi), p.phi);
  return g;
}

std::vector<std::pair<double, double>> FiberSolver::scan(const SpinorField& phi,
                                                         const std::vector<double>& ts) const {
  std::vector<std::pair<double, double>> out;
  SpinorField warm;
  double tw = 0;
  for (double t : ts) {
    SpinorField w;
    if (tw > 0) w = (t / tw) * warm;
    InnerSolve r = inner(phi, t, tw > 0 ? &w : nullptr);
    out.emplace_back(t, r.value);
    warm = r.chi;
    tw = t;
  }
  return out;
}

double FiberSolver::kernel_ceiling(int starts, std::uint64_t seed, double amplitude) const {
  std::mt19937_64 rng(seed);
  double best = 0;
  for (int s = 0; s < starts; ++s) {
    FiberModel model(L_, L_.table().zeros());
    SpinorField x0 = split().project_fiber(random_field(L_.table(), rng));
    const double n = split().norm(x0);
    if (n > 0) x0 *= amplitude / n;
    detail::AscentResult r = detail::newton_ascent(model, std::move(x0), opt_.inner_tol,
                                                   opt_.inner_max);
    best = std::max(best, r.value);
  }
  return best;
}

FiberPoint mu_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& phi,
                     FiberOptions opt) {
  return FiberSolver(Functional(split, nl), opt).maximize(phi);
}

double M_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& phi,
                FiberOptions opt) {
  return mu_lambda(split, nl, phi, opt).value;
}

SpinorField M_gradient(const SpectralSplit& split, const Nonlinearity& nl,
                       const SpinorField& phi, FiberOptions opt) {
  FiberSolver s(Functional(split, nl), opt);
  return s.reduced_gradient(s.maximize(phi));
}

NuResult nu_lambda_k(const SpectralSplit& split_k, const Nonlinearity& nl, const SpinorField& phi,
                     double lambda, int starts, std::uint64_t seed, FiberOptions opt) {
  if (lambda > split_k.lambda() + split_k.tol())
    throw InvalidArgument("nu_lambda_k needs lambda <= lambda_k");
  FiberSolver s(Functional(split_k, nl, lambda), opt);
  auto ms = s.maximize_multistart(phi, starts, seed);
  NuResult r;
  r.point = std::move(ms.best);
  r.start_values = std::move(ms.values);
  r.unique = ms.unique;
  return r;
}

double N_lambda_k(const SpectralSplit& split_k, const Nonlinearity& nl, const SpinorField& phi,
                  double lambda, FiberOptions opt) {
  return FiberSolver(Functional(split_k, nl, lambda), opt).maximize(phi).value;
}

}  // namespace nld
