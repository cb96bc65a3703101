#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nldirac/functional.hpp"

namespace nld {

struct FiberOptions {
  double inner_tol = 1e-10;  // Riesz gradient norm of the inner problem
  int inner_max = 200;
  double t_rel_tol = 1e-13;
  int outer_max = 80;
  // Newton-CG on the whole half-space fiber first; the nested 1-D root solve is the fallback
  bool joint = true;
};

// Maximizer of L over t phi + chi, t >= 0, chi in E^0 + E^- of the metric split.
struct FiberPoint {
  SpinorField phi;
  double t = 0;
  SpinorField chi;
  SpinorField psi;
  double value = 0;
  int inner_iterations = 0;
  int outer_iterations = 0;
  double gradient_norm = 0;
  double t_residual = 0;  // |d/dt max_chi L(t phi + chi)| at the returned t
};

struct InnerSolve {
  SpinorField chi;
  double value = 0;
  double slope = 0;  // Re((D - lambda) psi - K'(psi), phi)_2
  double gradient_norm = 0;
  int iterations = 0;
};

class FiberSolver {
 public:
  explicit FiberSolver(Functional L, FiberOptions opt = {});

  const Functional& functional() const noexcept { return L_; }
  const SpectralSplit& split() const noexcept { return L_.split(); }
  const FiberOptions& options() const noexcept { return opt_; }

  InnerSolve inner(const SpinorField& phi, double t, const SpinorField* warm = nullptr) const;
  FiberPoint maximize(const SpinorField& phi, const FiberPoint* warm = nullptr) const;
  // outer root solve in t of d/dt max_chi L(t phi + chi), inner ascent in chi
  FiberPoint maximize_nested(const SpinorField& phi, const FiberPoint* warm = nullptr) const;
  std::optional<FiberPoint> maximize_joint(const SpinorField& phi,
                                           const FiberPoint* warm = nullptr) const;

  struct Multistart {
    FiberPoint best;
    std::vector<double> values;
    bool unique = true;
  };
  Multistart maximize_multistart(const SpinorField& phi, int starts, std::uint64_t seed,
                                 const FiberPoint* warm = nullptr) const;

  // Riemannian gradient, on the unit sphere of E^+, of phi -> max over its fiber
  SpinorField reduced_gradient(const FiberPoint& p) const;

  // max_chi L(t phi + chi) sampled on `ts`
  std::vector<std::pair<double, double>> scan(const SpinorField& phi,
                                              const std::vector<double>& ts) const;

  // sup of L over E^0 + E^- alone (t = 0), best of `starts` ascents from random points
  double kernel_ceiling(int starts, std::uint64_t seed, double amplitude = 0.1) const;

 private:
  Functional L_;
  FiberOptions opt_;
};

// unit E^+ direction of the split from an arbitrary field
SpinorField normalize_plus(const SpectralSplit& s, const SpinorField& f);

FiberPoint mu_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& phi,
                     FiberOptions opt = {});
double M_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& phi,
                FiberOptions opt = {});
SpinorField M_gradient(const SpectralSplit& split, const Nonlinearity& nl,
                       const SpinorField& phi, FiberOptions opt = {});

// split frozen at lambda_k, functional at lambda <= lambda_k
struct NuResult {
  FiberPoint point;
  std::vector<double> start_values;
  bool unique = true;
};
NuResult nu_lambda_k(const SpectralSplit& split_k, const Nonlinearity& nl, const SpinorField& phi,
                     double lambda, int starts = 8, std::uint64_t seed = 11,
                     FiberOptions opt = {});
double N_lambda_k(const SpectralSplit& split_k, const Nonlinearity& nl, const SpinorField& phi,
                  double lambda, FiberOptions opt = {});

}  // namespace nld
