#include "ascent.hpp"

#include <algorithm>
#include <cmath>

namespace nld::detail {

namespace {

// truncated CG on (-Hess) d = g; falls back to the current iterate on negative curvature
SpinorField cg_direction(AscentModel& m, const SpinorField& g, double rtol, int max_iter,
                         int& products) {
  SpinorField d(g.modes(), g.rank());
  SpinorField r = g;
  SpinorField p = g;
  double rr = m.inner(r, r);
  const double stop = rtol * rtol * rr;
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    SpinorField Ap = m.neg_hessian(p);
    ++products;
    const double pAp = m.inner(p, Ap);
    if (pAp <= 1e-14 * m.inner(p, p)) {
      if (it == 0) return g;
      break;
    }
    const double a = rr / pAp;
    d.axpy(a, p);
    r.axpy(-a, Ap);
    const double rr_new = m.inner(r, r);
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return d;
}

}  // namespace

AscentResult newton_ascent(AscentModel& model, SpinorField x0, double tol, int max_iter) {
  AscentResult res;
  res.x = std::move(x0);
  double f = model.value(res.x);
  model.prepare(res.x);
  SpinorField g = model.gradient();
  double gn = std::sqrt(std::max(0.0, model.inner(g, g)));
  int it = 0;
  for (; it < max_iter && gn > tol; ++it) {
    SpinorField d = cg_direction(model, g, std::min(0.5, std::sqrt(gn)), 60,
                                 res.hessian_products);
    double slope = model.inner(g, d);
    if (!(slope > 0)) {
      d = g;
      slope = gn * gn;
    }
    double a = 1;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls, a *= 0.5) {
      SpinorField xt = res.x;
      xt.axpy(a, d);
      const double ft = model.value(xt);
      if (!std::isfinite(ft)) continue;
      const bool armijo = ft >= f + 1e-4 * a * slope;
      const bool flat = ft >= f - 1e-13 * std::max(1.0, std::abs(f));
      if (armijo || flat) {
        model.prepare(xt);
        SpinorField gt = model.gradient();
        const double gtn = std::sqrt(std::max(0.0, model.inner(gt, gt)));
        if (armijo || gtn < gn) {
          res.x = std::move(xt);
          f = ft;
          g = std::move(gt);
          gn = gtn;
          moved = true;
          break;
        }
        model.prepare(res.x);
      }
    }
    if (!moved) break;
  }
  res.value = f;
  res.gradient_norm = gn;
  res.iterations = it;
  res.converged = gn <= tol;
  // leave the model prepared at the returned point
  model.prepare(res.x);
  return res;
}

}  // namespace nld::detail
