#include "nldirac/branch.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <cmath>
#include <future>
#include <map>
#include <numbers>

#include "nldirac/constants.hpp"
#include "nldirac/errors.hpp"
#include "nldirac/nehari.hpp"
#include "nldirac/testspinor.hpp"

namespace nld {

namespace {

// phi -> max over the fiber of phi, with its Riemannian gradient
class FiberObjective {
 public:
  using State = FiberPoint;
  explicit FiberObjective(FiberSolver s) : solver_(std::move(s)) {}
  const SpectralSplit& split() const { return solver_.split(); }
  State evaluate(const SpinorField& phi, const State* warm) const {
    return solver_.maximize(phi, warm);
  }
  static double value(const State& s) { return s.value; }
  SpinorField gradient(const State& s) const { return solver_.reduced_gradient(s); }
  SpinorField solution(const State& s) const { return s.psi; }
  const FiberSolver& solver() const { return solver_; }

 private:
  FiberSolver solver_;
};

// phi -> max_t J(t phi) through the kernel-projected functional
class NehariObjective {
 public:
  struct State {
    NehariPoint p;
    SpinorField dir;
  };
  explicit NehariObjective(TildeFunctional E) : E_(std::move(E)) {}
  const SpectralSplit& split() const { return E_.split(); }
  State evaluate(const SpinorField& phi, const State* warm) const {
    if (auto p = nehari_joint(E_, phi, warm ? &warm->p : nullptr)) return {std::move(*p), phi};
    return {nehari_project(E_, phi), phi};
  }
  static double value(const State& s) { return s.p.J; }
  SpinorField gradient(const State& s) const {
    const auto& sp = E_.split();
    const SpinorField psi = s.p.phi + s.p.eta;
    SpinorField g = sp.project(sp.riesz(E_.F_gradient(psi)), Part::Plus);
    g *= -1.0;
    g += s.p.phi;
    g *= s.p.t;
    g.axpy(-sp.inner(g, s.dir), s.dir);
    return g;
  }
  SpinorField solution(const State& s) const {
    const SpinorField psi = s.p.phi + s.p.eta;
    return psi - E_.project(psi).T;
  }

 private:
  TildeFunctional E_;
};

struct DescentResult {
  SpinorField phi;
  SpinorField psi;
  double value = 0;
  double gradient_norm = 0;
  int iterations = 0;
};

// optional feasibility projection applied after each retraction
using Projector = std::function<SpinorField(const SpinorField&)>;

template <class Objective>
DescentResult sphere_descent(const Objective& obj, SpinorField phi, const DescentOptions& opt,
                             const Projector& project = {}) {
  const auto& sp = obj.split();
  auto retract = [&](const SpinorField& f) {
    SpinorField r = normalize_plus(sp, f);
    return project ? project(r) : r;
  };
  phi = retract(phi);
  auto cur = obj.evaluate(phi, nullptr);
  SpinorField g = obj.gradient(cur);
  double gn = sp.norm(g);
  double step = 0.5 / std::max(gn, 1e-12);
  step = std::min(step, 1.0);
  int it = 0;
  for (; it < opt.max_iter && gn > opt.grad_tol; ++it) {
    bool moved = false;
    double a = step;
    for (int ls = 0; ls < 40; ++ls, a *= 0.5) {
      SpinorField trial = retract(phi - a * g);
      auto next = obj.evaluate(trial, &cur);
      const double v = Objective::value(next), v0 = Objective::value(cur);
      SpinorField gt = obj.gradient(next);
      const double gtn = sp.norm(gt);
      const bool armijo = v <= v0 - 1e-4 * a * gn * gn;
      const bool flat = v <= v0 + 1e-13 * std::max(1.0, std::abs(v0)) && gtn < gn;
      if (armijo || flat) {
        const SpinorField s = trial - phi;
        const SpinorField y = gt - g;
        const double sy = sp.inner(s, y);
        step = sy > 0 ? std::clamp(sp.inner(s, s) / sy, 1e-6, 1e3) : std::min(4 * a, 1e3);
        phi = std::move(trial);
        cur = std::move(next);
        g = std::move(gt);
        gn = gtn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  DescentResult r;
  r.value = Objective::value(cur);
  r.psi = obj.solution(cur);
  r.phi = std::move(phi);
  r.gradient_norm = gn;
  r.iterations = it;
  return r;
}

std::size_t first_mode_with_eigenvalue(const EigenTable& t, double sigma) {
  for (std::size_t i = 0; i < t.modes(); ++i)
    if (std::abs(std::sqrt(double(t.grid().k_sq(i))) - sigma) < 1e-9) return i;
  return t.modes();
}

double lowest_plus_eigenvalue(const SpectralSplit& s) {
  for (const auto& e : s.table().spectrum())
    if (e.value > s.lambda() + s.tol()) return e.value;
  throw TruncationUnsafe("no positive eigenvalue above lambda in the table");
}

bool is_kernel_point(const SpectralSplit& s) { return s.has_kernel(); }

void finish(BranchPoint& bp, const Nonlinearity& nl, const DescentOptions& opt) {
  const int m = nl.dim();
  bp.below_gamma_crit = bp.energy < gamma_crit(m);
  if (bp.gradient_norm > opt.grad_tol) bp.flags.push_back("max-iterations");
  if (!bp.below_gamma_crit && opt.guard)
    throw GuardViolation("energy at or above gamma_crit", bp.energy, gamma_crit(m));
}

}  // namespace

std::string level_name(const BranchPoint& p) {
  return p.level == Level::Least ? "least" : "second" + std::to_string(p.k);
}

std::vector<Start> default_starts(const SpectralSplit& split) {
  std::vector<Start> out;
  const EigenTable& t = split.table();
  const double h = 2 * std::numbers::pi / t.grid().n_grid();
  for (double f : {3.0, 6.0, 12.0}) {
    TestSpinorParams p;
    p.eps = f * h;
    if (p.eps > p.delta) continue;
    const TestSpinor ts = build_test_spinor(t, p);
    if (split.norm(split.project(ts.field, Part::Plus)) > 0)
      out.push_back({"testspinor-eps" + std::to_string(p.eps), ts.field});
  }
  const double sigma = lowest_plus_eigenvalue(split);
  const std::size_t mode = first_mode_with_eigenvalue(t, sigma);
  if (mode < t.modes()) out.push_back({"planewave", plane_wave(t, mode, +1)});
  return out;
}

BranchPoint minimize_M(const SpectralSplit& split, const Nonlinearity& nl,
                       const std::vector<Start>& starts, DescentOptions opt) {
  if (starts.empty()) throw InvalidArgument("minimize_M needs at least one start");
  BranchPoint bp;
  bp.lambda = split.lambda();
  bp.kernel_point = is_kernel_point(split);
  DescentResult best;
  bool have = false;
  auto run = [&](const auto& obj) {
    // descend from every start and keep the lowest critical value
    for (std::size_t i = 0; i < starts.size(); ++i) {
      DescentResult r;
      try {
        r = sphere_descent(obj, starts[i].direction, opt);
      } catch (const SolverFailure&) {
        if (i + 1 == starts.size() && !have) throw;
        continue;
      }
      if (!have || r.value < best.value) {
        best = std::move(r);
        bp.init = starts[i].name;
        have = true;
      }
    }
  };
  if (bp.kernel_point && nl.kind() == Nonlinearity::Kind::Zero) {
    run(NehariObjective(TildeFunctional(split, nl)));
  } else {
    run(FiberObjective(FiberSolver(Functional(split, nl), opt.fiber)));
  }
  (void)have;
  bp.energy = best.value;
  bp.psi = std::move(best.psi);
  bp.phi = std::move(best.phi);
  bp.iterations = best.iterations;
  bp.gradient_norm = best.gradient_norm;
  bp.residual_l2 = residual_check(split.table(), nl, bp.psi, bp.lambda);
  finish(bp, nl, opt);
  return bp;
}

BranchPoint minimize_M(const SpectralSplit& split, const Nonlinearity& nl, DescentOptions opt) {
  return minimize_M(split, nl, default_starts(split), opt);
}

double residual_check(const EigenTable& table, const Nonlinearity& nl, const SpinorField& psi,
                      double lambda) {
  const auto& col = table.collocation();
  const PointwiseProfile pp{&nl, table.rank(), table.grid().cell_volume()};
  SpinorField r = apply_shifted(table, psi, lambda);
  r -= col.from_grid(pp.first(col.to_grid(psi)));
  return l2_norm(table, r);
}

std::vector<double> positive_eigenvalues(const EigenTable& table) {
  std::vector<double> out;
  for (const auto& e : table.spectrum())
    if (e.value > 0.5) out.push_back(e.value);
  return out;
}

long long multiplicity_count(const EigenTable& table, double lambda, double nu) {
  if (lambda + nu > table.grid().cutoff())
    throw TruncationUnsafe("window end " + std::to_string(lambda + nu) + " exceeds cutoff " +
                           std::to_string(table.grid().cutoff()));
  long long total = 0;
  for (const auto& e : table.spectrum())
    if (e.value > lambda && e.value < lambda + nu) total += e.multiplicity;
  return total;
}

double default_sigma(const SpectralSplit& split_k) {
  if (!split_k.has_kernel()) throw InvalidArgument("default_sigma needs lambda in spec(D)");
  const double next = lowest_plus_eigenvalue(split_k);
  // unit lambda-norm eigenvector: |phi|_2^2 = 1 / w^2
  return 0.5 / std::abs(next - split_k.lambda());
}

BranchPoint second_solution(const SpectralSplit& split_k, const Nonlinearity& nl, double lambda,
                            int k, SecondOptions opt, const std::vector<Start>& starts_in) {
  if (!split_k.has_kernel()) throw InvalidArgument("second_solution needs lambda_k in spec(D)");
  const double lk = split_k.lambda();
  if (lambda > lk + split_k.tol())
    throw InvalidArgument("second_solution needs lambda <= lambda_k");
  const EigenTable& t = split_k.table();
  const double sigma = opt.sigma > 0 ? opt.sigma : default_sigma(split_k);
  const double next = lowest_plus_eigenvalue(split_k);
  const std::size_t adj_mode = first_mode_with_eigenvalue(t, next);
  const SpinorField adj_wave = normalize_plus(split_k, plane_wave(t, adj_mode, +1));
  // E+ modes of the adjacent shell
  auto adjacent = [&](const SpinorField& f) {
    return split_k.map(f, [&](Part p, double w) {
      return p == Part::Plus && std::abs(w * w - (next - lk)) < 1e-9 ? 1.0 : 0.0;
    });
  };
  const Projector feasible = [&](const SpinorField& phi) {
    if (l2_inner(t, phi, phi) >= sigma) return phi;
    SpinorField a = adjacent(phi);
    if (split_k.norm(a) < 1e-12) a = adj_wave;
    auto mix = [&](double s) { return normalize_plus(split_k, phi + s * a); };
    double lo = 0, hi = 1;
    while (l2_inner(t, mix(hi), mix(hi)) < sigma && hi < 1e8) hi *= 2;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      const SpinorField f = mix(mid);
      (l2_inner(t, f, f) < sigma ? lo : hi) = mid;
    }
    return mix(hi);
  };
  const FiberObjective obj(FiberSolver(Functional(split_k, nl, lambda), opt.descent.fiber));
  std::vector<Start> starts = starts_in.empty() ? default_starts(split_k) : starts_in;
  DescentResult r;
  std::string init;
  bool have = false;
  for (const auto& st : starts) {
    DescentResult c;
    try {
      c = sphere_descent(obj, st.direction, opt.descent, feasible);
    } catch (const SolverFailure&) {
      continue;
    }
    if (!have || c.value < r.value) {
      r = std::move(c);
      init = st.name;
      have = true;
    }
  }
  if (!have) throw SolverFailure("second_solution: every start failed");
  BranchPoint bp;
  bp.lambda = lambda;
  bp.level = Level::Second;
  bp.k = k;
  bp.init = init;
  bp.iterations = r.iterations;
  bp.gradient_norm = r.gradient_norm;
  // uniqueness of the fiber maximizer at the final direction
  const NuResult nu = nu_lambda_k(split_k, nl, r.phi, lambda, opt.starts, opt.seed,
                                  opt.descent.fiber);
  bp.unique = nu.unique;
  if (!nu.unique) bp.flags.push_back("non-unique-fiber");
  if (l2_inner(t, r.phi, r.phi) <= sigma * (1 + 1e-9)) bp.flags.push_back("sigma-active");
  bp.energy = std::min(r.value, nu.point.value);
  bp.psi = nu.point.value >= r.value ? nu.point.psi : r.psi;
  bp.phi = std::move(r.phi);
  bp.residual_l2 = residual_check(t, nl, bp.psi, lambda);
  finish(bp, nl, opt.descent);
  return bp;
}

SweepTable branch_sweep(const SweepConfig& cfg, const Nonlinearity& nl) {
  const EigenTable table = assemble(cfg.m, cfg.K, cfg.n_grid);
  std::vector<double> all;
  for (const auto& e : table.spectrum()) all.push_back(e.value);
  auto interval_of = [&](double lam) {
    return static_cast<int>(std::upper_bound(all.begin(), all.end(),
                                             lam + SpectralSplit::default_tol(lam)) -
                            all.begin());
  };
  std::vector<double> lams = cfg.lambdas;
  std::sort(lams.begin(), lams.end());

  DescentOptions descent = cfg.descent;
  descent.guard = false;
  auto solve_least = [&](double lam) {
    SweepRow row;
    row.interval = interval_of(lam);
    try {
      row.point = minimize_M(split(table, lam), nl, descent);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      row.point.lambda = lam;
    }
    return row;
  };

  // task list: least rows first, then second rows; merged by index
  struct Task {
    double lambda;
    int k;
  };
  std::vector<Task> tasks;
  for (double l : lams) tasks.push_back({l, 0});
  const std::vector<double> pos = positive_eigenvalues(table);
  for (int k : cfg.second_near) {
    if (k < 1 || k > static_cast<int>(pos.size())) continue;
    const double lk = pos[k - 1];
    const double prev = k >= 2 ? pos[k - 2] : 0.0;
    const double guard = cfg.delta_guard_fraction * (lk - prev);
    std::vector<double> offs = cfg.second_offsets;
    std::sort(offs.begin(), offs.end(), std::greater<>());
    for (double o : offs)
      if (o > 0 && o < guard) tasks.push_back({lk - o, k});
  }
  auto solve_task = [&](const Task& task) {
    if (task.k == 0) return solve_least(task.lambda);
    SweepRow row;
    row.interval = interval_of(task.lambda);
    try {
      SecondOptions so;
      so.descent = descent;
      row.point = second_solution(split(table, pos[task.k - 1]), nl, task.lambda, task.k, so);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      row.point.lambda = task.lambda;
      row.point.level = Level::Second;
      row.point.k = task.k;
    }
    return row;
  };
  std::vector<SweepRow> rows(tasks.size());
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = solve_task(tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (int w = 0; w < threads; ++w)
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) rows[i] = solve_task(tasks[i]);
      }));
    for (auto& f : pool) f.get();
  }

  // continuation pass in increasing lambda, same interval and level
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    std::size_t j = i - 1;
    if (tasks[j].k != tasks[i].k || !rows[j].ok) continue;
    if (rows[j].interval != rows[i].interval) continue;
    if (rows[i].point.kernel_point || rows[j].point.kernel_point) continue;
    try {
      const double lam = tasks[i].lambda;
      std::vector<Start> warm = {{"continuation", rows[j].point.phi}};
      BranchPoint cand;
      if (tasks[i].k == 0) {
        const SpectralSplit sp = split(table, lam);
        const double v = FiberSolver(Functional(sp, nl), descent.fiber)
                             .maximize(normalize_plus(sp, warm[0].direction))
                             .value;
        if (rows[i].ok && v >= rows[i].point.energy - 1e-9) continue;
        cand = minimize_M(sp, nl, warm, descent);
      } else {
        SecondOptions so;
        so.descent = descent;
        cand = second_solution(split(table, pos[tasks[i].k - 1]), nl, lam, tasks[i].k, so, warm);
      }
      if (!rows[i].ok || cand.energy < rows[i].point.energy) {
        rows[i].point = std::move(cand);
        rows[i].ok = true;
        rows[i].error.clear();
      }
    } catch (const std::exception&) {
    }
  }

  SweepTable out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    if (r.ok) {
      r.point.below_gamma_crit = r.point.energy < gamma_crit(cfg.m);
      if (!r.point.below_gamma_crit) r.point.flags.push_back("guard-violation");
      if (r.point.kernel_point) r.point.flags.push_back("kernel-point");
    }
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (tasks[i].k != 0 || tasks[i + 1].k != 0) continue;
    if (!rows[i].ok || !rows[i + 1].ok || rows[i].interval != rows[i + 1].interval) continue;
    if (rows[i].point.energy < rows[i + 1].point.energy - 1e-6) {
      out.monotone = false;
      rows[i + 1].point.flags.push_back("non-monotone");
    }
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace nld
