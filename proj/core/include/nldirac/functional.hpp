#pragma once

#include <cstddef>
#include <vector>

#include "nldirac/nonlinearity.hpp"
#include "nldirac/spectral.hpp"

namespace nld {

// Pointwise maps on collocation values for a radial profile (g, G, g').
struct PointwiseProfile {
  const Nonlinearity* nl;
  int rank;
  double cell;

  // int G(|v|)
  double integral(const GridValues& v) const;
  // g(|v|) v
  GridValues first(const GridValues& v) const;
  // g(|v|) h + g'(|v|)/|v| Re(v, h) v
  GridValues second(const GridValues& v, const GridValues& h) const;
};

// L_lambda(psi) = 1/2 Re((D - lambda) psi, psi) - K(psi), K = int G(|psi|).
// The metric (Riesz map, fiber subspaces) comes from `split`, which may be frozen at a
// different parameter than the functional's lambda.
class Functional {
 public:
  Functional(SpectralSplit split, Nonlinearity nl);
  Functional(SpectralSplit split, Nonlinearity nl, double lambda);

  const SpectralSplit& split() const noexcept { return split_; }
  const EigenTable& table() const noexcept { return split_.table(); }
  const Nonlinearity& nl() const noexcept { return nl_; }
  double lambda() const noexcept { return lambda_; }
  PointwiseProfile profile() const;

  GridValues values(const SpinorField& f) const { return table().collocation().to_grid(f); }
  double K(const GridValues& v) const;
  SpinorField K_gradient(const GridValues& v) const;
  SpinorField K_hessian(const GridValues& v, const SpinorField& h) const;

  double quadratic(const SpinorField& psi) const;  // 1/2 Re((D-lambda) psi, psi)
  double value(const SpinorField& psi) const;
  double value(const SpinorField& psi, const GridValues& v) const;
  // L2 representative (D - lambda) psi - K'(psi)
  SpinorField l2_gradient(const SpinorField& psi) const;
  SpinorField l2_gradient(const SpinorField& psi, const GridValues& v) const;
  // Riesz representative in the split metric
  SpinorField gradient(const SpinorField& psi) const { return split_.riesz(l2_gradient(psi)); }

 private:
  SpectralSplit split_;
  Nonlinearity nl_;
  double lambda_;
};

double L_lambda(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& psi,
                double lambda);
SpinorField grad_L(const SpectralSplit& split, const Nonlinearity& nl, const SpinorField& psi,
                   double lambda);

// T(psi) = argmin over phi in E^0 of int G(|psi - phi|); for the zero perturbation this is
// the L^{2*} best approximation.
class KernelProjector {
 public:
  KernelProjector(const SpectralSplit& split, Nonlinearity profile);

  std::size_t dim() const noexcept { return modes_.size(); }
  bool trivial() const noexcept { return modes_.empty(); }

  struct Result {
    SpinorField T;
    GridValues u;  // psi - T(psi) on the grid
    int iterations = 0;
    double optimality = 0;
  };
  Result solve(const SpinorField& psi, const GridValues& psi_values) const;
  SpinorField operator()(const SpinorField& psi) const;
  // T'(psi) h from u = psi - T(psi)
  SpinorField derivative(const GridValues& u, const SpinorField& h) const;

 private:
  SpinorField field(const Eigen::VectorXd& z) const;
  Eigen::VectorXd gradient(const GridValues& u, double* scale = nullptr) const;
  Eigen::MatrixXd hessian(const GridValues& u) const;

  EigenTable table_;
  Nonlinearity nl_;
  std::vector<std::size_t> modes_;
  std::vector<Eigen::VectorXcd> spinors_;
  Eigen::MatrixXcd values_;  // grid values of e^{ik.x} v, one column per basis element
};

// E~(psi) = 1/2 (||psi+||^2 - ||psi-||^2) - F(psi), F(psi) = K(psi - T(psi)).
class TildeFunctional {
 public:
  TildeFunctional(SpectralSplit split, Nonlinearity nl);

  const SpectralSplit& split() const noexcept { return split_; }
  const EigenTable& table() const noexcept { return split_.table(); }
  const Nonlinearity& nl() const noexcept { return nl_; }
  const KernelProjector& projector() const noexcept { return T_; }
  PointwiseProfile profile() const;

  KernelProjector::Result project(const SpinorField& psi) const;
  double F(const SpinorField& psi) const;
  // L2 representative of F'(psi), and of F''(psi) h
  SpinorField F_gradient(const SpinorField& psi) const;
  SpinorField F_gradient(const KernelProjector::Result& r) const;
  SpinorField F_hessian(const KernelProjector::Result& r, const SpinorField& h) const;
  // |psi - T psi|_{2*}^{2*}
  double residual_power(const KernelProjector::Result& r) const;

  double value(const SpinorField& psi) const;
  SpinorField gradient(const SpinorField& psi) const;  // Riesz

 private:
  SpectralSplit split_;
  Nonlinearity nl_;
  KernelProjector T_;
};

}  // namespace nld
