#include "nldirac/nehari.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <optional>

#include "ascent.hpp"
#include "nldirac/errors.hpp"

namespace nld {

namespace {

class EtaModel final : public detail::AscentModel {
 public:
  // ascent over E^-, or over span(dir) + E^- when dir is set
  EtaModel(const TildeFunctional& E, SpinorField base, const SpinorField* dir = nullptr)
      : E_(E), base_(std::move(base)), dir_(dir) {}

  double value(const SpinorField& x) override { return E_.value(base_ + x); }
  void prepare(const SpinorField& x) override {
    psi_ = base_ + x;
    res_ = E_.project(psi_);
    Fg_ = E_.F_gradient(res_);
  }
  SpinorField gradient() override {
    const auto& s = E_.split();
    SpinorField g = s.project(psi_, Part::Plus);
    g -= s.project(psi_, Part::Minus);
    g -= s.riesz(Fg_);
    return restrict(g);
  }
  SpinorField neg_hessian(const SpinorField& h) override {
    const auto& s = E_.split();
    SpinorField a = s.riesz(E_.F_hessian(res_, h));
    a += s.project(h, Part::Minus);
    a -= s.project(h, Part::Plus);
    return restrict(a);
  }
  double inner(const SpinorField& a, const SpinorField& b) override {
    return E_.split().inner(a, b);
  }
  SpinorField restrict(const SpinorField& f) const {
    SpinorField out = E_.split().project(f, Part::Minus);
    if (dir_) out.axpy(E_.split().inner(*dir_, f), *dir_);
    return out;
  }

 private:
  const TildeFunctional& E_;
  SpinorField base_, psi_, Fg_;
  const SpinorField* dir_;
  KernelProjector::Result res_;
};

double H_at(const TildeFunctional& E, const SpinorField& psi) {
  const auto res = E.project(psi);
  return E.split().quadratic(psi) - l2_inner(E.table(), E.F_gradient(res), psi);
}

}  // namespace

EtaResult eta_lambda(const TildeFunctional& E, const SpinorField& phi, const SpinorField* warm,
                     double tol) {
  const SpinorField base = E.split().project(phi, Part::Plus);
  EtaModel model(E, base);
  SpinorField x0 = warm ? E.split().project(*warm, Part::Minus) : E.table().zeros();
  const double scale = std::max(1.0, E.split().norm(base));
  auto r = detail::newton_ascent(model, std::move(x0), tol * scale, 200);
  if (!r.converged && r.gradient_norm > 100 * tol * scale)
    throw SolverFailure("eta ascent stalled at gradient norm " + std::to_string(r.gradient_norm));
  EtaResult out;
  out.eta = std::move(r.x);
  out.value = r.value;
  out.gradient_norm = r.gradient_norm;
  out.iterations = r.iterations;
  return out;
}

double J_lambda(const TildeFunctional& E, const SpinorField& phi) {
  return eta_lambda(E, phi).value;
}

double H_lambda(const TildeFunctional& E, const SpinorField& phi, const SpinorField* warm) {
  const SpinorField base = E.split().project(phi, Part::Plus);
  const EtaResult e = eta_lambda(E, base, warm);
  return H_at(E, base + e.eta);
}

NehariPoint nehari_project(const TildeFunctional& E, const SpinorField& phi, double t_min,
                           double t_max) {
  const SpinorField dir = E.split().project(phi, Part::Plus);
  if (!(E.split().norm(dir) > 0)) throw InvalidArgument("nehari_project needs phi+ != 0");
  SpinorField warm;
  double tw = 0;
  auto h = [&](double t) {
    SpinorField w;
    if (tw > 0) w = (t / tw) * warm;
    const SpinorField base = t * dir;
    EtaResult e = eta_lambda(E, base, tw > 0 ? &w : nullptr);
    const double v = H_at(E, base + e.eta);
    warm = std::move(e.eta);
    tw = t;
    return v;
  };
  double a = 1, b = 1;
  double ha = h(1.0), hb = ha;
  if (ha > 0) {
    do {
      a = b;
      ha = hb;
      b *= 2;
      if (b > t_max) throw BracketFailure("H(t phi) has no sign change below t_max");
      hb = h(b);
    } while (hb > 0);
  } else {
    do {
      b = a;
      hb = ha;
      a *= 0.5;
      if (a < t_min) throw BracketFailure("H(t phi) has no sign change above t_min");
      ha = h(a);
    } while (ha <= 0);
  }
  double t = b;
  if (hb != 0) {
    std::uintmax_t iters = 100;
    auto br = boost::math::tools::toms748_solve(h, a, b, ha, hb,
                                                boost::math::tools::eps_tolerance<double>(46),
                                                iters);
    t = 0.5 * (br.first + br.second);
  }
  NehariPoint p;
  p.t = t;
  p.phi = t * dir;
  SpinorField w = (t / tw) * warm;
  EtaResult e = eta_lambda(E, p.phi, &w);
  p.eta = std::move(e.eta);
  p.J = e.value;
  const SpinorField psi = p.phi + p.eta;
  p.H = H_at(E, psi);
  p.residual_power = E.residual_power(E.project(psi));
  return p;
}

std::optional<NehariPoint> nehari_joint(const TildeFunctional& E, const SpinorField& phi,
                                        const NehariPoint* warm, double tol) {
  const auto& sp = E.split();
  SpinorField dir = sp.project(phi, Part::Plus);
  const double n = sp.norm(dir);
  if (!(n > 0)) throw InvalidArgument("nehari_joint needs phi+ != 0");
  dir *= 1.0 / n;
  SpinorField x0;
  if (warm && warm->t > 0) {
    const double tw = sp.norm(warm->phi);
    x0 = tw * dir + sp.project(warm->eta, Part::Minus);
  } else {
    double best = -1e300, t = 1;
    for (double s = 1e-3; s < 1e6; s *= 1.25) {
      const double v = E.value(s * dir);
      if (v > best) {
        best = v;
        t = s;
      } else if (v < 0) {
        break;
      }
    }
    x0 = t * dir;
  }
  EtaModel model(E, E.table().zeros(), &dir);
  const double scale = std::max(1.0, sp.norm(x0));
  auto r = detail::newton_ascent(model, std::move(x0), tol * scale, 200);
  if (!r.converged) return std::nullopt;
  const double tn = sp.inner(r.x, dir);
  if (!(tn > 0) || !(r.value > 0)) return std::nullopt;
  NehariPoint p;
  p.t = tn / n;
  p.phi = tn * dir;
  p.eta = sp.project(r.x, Part::Minus);
  p.J = r.value;
  p.H = H_at(E, r.x);
  p.residual_power = E.residual_power(E.project(r.x));
  return p;
}

double H_ray_derivative(const TildeFunctional& E, const SpinorField& phi, double step) {
  const SpinorField base = E.split().project(phi, Part::Plus);
  const EtaResult e0 = eta_lambda(E, base);
  SpinorField wp = (1 + step) * e0.eta;
  SpinorField wm = (1 - step) * e0.eta;
  const double hp = H_lambda(E, (1 + step) * base, &wp);
  const double hm = H_lambda(E, (1 - step) * base, &wm);
  return (hp - hm) / (2 * step);
}

double rayleigh(const TildeFunctional& E, const SpinorField& psi) {
  if (E.nl().kind() != Nonlinearity::Kind::Zero)
    throw InvalidArgument("Rayleigh quotient is defined for the unperturbed problem");
  const auto res = E.project(psi);
  const double P = E.residual_power(res);
  return E.split().quadratic(psi) / std::pow(P, 2.0 / E.nl().two_star());
}

RayleighResult S_lambda(const TildeFunctional& E, const NehariPoint& p, double tol) {
  if (E.nl().kind() != Nonlinearity::Kind::Zero)
    throw InvalidArgument("S_lambda is defined for the unperturbed problem");
  const auto& s = E.split();
  const double ts = E.nl().two_star();
  struct Eval {
    double R;
    SpinorField grad;
  };
  auto eval = [&](const SpinorField& chi) {
    const SpinorField psi = p.phi + chi;
    const auto res = E.project(psi);
    const double P = E.residual_power(res);
    const double D = std::pow(P, 2.0 / ts);
    const double N = s.quadratic(psi);
    Eval e;
    e.R = N / D;
    e.grad = s.project(s.riesz(E.F_gradient(res)), Part::Minus);
    e.grad *= -2.0 * N / (P * D);
    e.grad.axpy(-2.0 / D, chi);
    return e;
  };
  SpinorField chi = s.project(p.eta, Part::Minus);
  Eval cur = eval(chi);
  double gn = s.norm(cur.grad);
  double step = 0.25;
  SpinorField prev_chi, prev_grad;
  int it = 0;
  for (; it < 5000 && gn > tol * std::max(1.0, std::abs(cur.R)); ++it) {
    if (it > 0) {
      const SpinorField dx = chi - prev_chi;
      const SpinorField dg = cur.grad - prev_grad;
      const double sy = s.inner(dx, dg);
      if (sy < 0) step = std::clamp(-s.inner(dx, dx) / sy, 1e-6, 1e3);
    }
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      SpinorField trial = chi;
      trial.axpy(step, cur.grad);
      Eval e = eval(trial);
      if (e.R >= cur.R + 1e-4 * step * gn * gn ||
          (e.R >= cur.R - 1e-14 * std::abs(cur.R) && s.norm(e.grad) < gn)) {
        prev_chi = std::move(chi);
        prev_grad = std::move(cur.grad);
        chi = std::move(trial);
        cur = std::move(e);
        gn = s.norm(cur.grad);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  RayleighResult r;
  r.S = cur.R;
  r.chi = std::move(chi);
  r.gradient_norm = gn;
  r.iterations = it;
  return r;
}

}  // namespace nld
