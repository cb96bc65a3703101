#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nldirac/spectral.hpp"

namespace nld {

struct TestSpinorParams {
  double eps = 0.1;
  double delta = 0.7853981633974483;  // pi/4
  Eigen::VectorXcd psi0;              // empty: first basis vector, |psi0| = m^{(m-1)/2}
  std::vector<double> center;         // empty: origin
};

Eigen::VectorXcd default_psi0(const CliffordRep& rep);

// C^2 ramp: 1 on [0, delta], 0 on [2 delta, inf), quintic smoothstep in between
double cutoff(double r, double delta);

// psi(x) = mu^{m/2} (1 - x) psi0, mu = 1/(1 + |x|^2)
Eigen::VectorXcd euclidean_solution(const CliffordRep& rep, std::span<const double> x,
                                    const Eigen::VectorXcd& psi0);

// max over sample points of |D psi - coef mu psi| with central differences of step h
double dirac_fd_residual(const CliffordRep& rep, const Eigen::VectorXcd& psi0, double h,
                         double coef);

struct TestSpinor {
  SpinorField field;
  GridValues values;  // exact samples on the collocation grid
  double sup_norm = 0;
  bool under_resolved = false;
};

// phi_eps = eta(x) eps^{-(m-1)/2} psi(x/eps) in the chart around `center`
TestSpinor build_test_spinor(const EigenTable& table, const TestSpinorParams& params);

struct EnergyReport {
  double eps = 0;
  double l2 = 0;            // |phi|_2^2
  double l2star = 0;        // |phi|_{2*}^{2*}
  double dirac_energy = 0;  // 1/2 Re(D phi, phi)_2
  double free_energy = 0;   // dirac_energy - l2star / 2*
  double dual_phi = 0;
  double dual_residual = 0;  // of R = D phi - |phi|^{2*-2} phi
  bool resolution_flag = false;
};

EnergyReport energy_report(const EigenTable& table, const SpectralSplit& split,
                           const TestSpinor& ts, double eps);

std::vector<double> default_eps_sweep();

// ln v = ln c + a ln eps + b ln|ln eps| with b fixed to 0 and to 1
struct AsymptoticFit {
  double a = 0;
  double b = 0;
  double c = 0;
  double residual = 0;  // rms of the log residuals, better of the two fits
  double a_alt = 0;     // the other fit
  double b_alt = 0;
  double c_alt = 0;
  double residual_alt = 0;
};

AsymptoticFit asymptotic_fit(std::span<const std::pair<double, double>> samples);
// single fit with the log-power fixed
AsymptoticFit asymptotic_fit(std::span<const std::pair<double, double>> samples, double b);

}  // namespace nld
