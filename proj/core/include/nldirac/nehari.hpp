#pragma once

#include <optional>

#include "nldirac/functional.hpp"

namespace nld {

struct EtaResult {
  SpinorField eta;
  double value = 0;  // E~(phi + eta) = J(phi)
  double gradient_norm = 0;
  int iterations = 0;
};

// maximizer over E^- of chi -> E~(phi + chi), phi in E^+
EtaResult eta_lambda(const TildeFunctional& E, const SpinorField& phi,
                     const SpinorField* warm = nullptr, double tol = 1e-11);
double J_lambda(const TildeFunctional& E, const SpinorField& phi);
// H(phi) = J'(phi)[phi]
double H_lambda(const TildeFunctional& E, const SpinorField& phi,
                const SpinorField* warm = nullptr);

struct NehariPoint {
  SpinorField phi;  // t * direction, on the Nehari set
  double t = 0;     // scale applied to the input
  SpinorField eta;
  double J = 0;
  double H = 0;
  double residual_power = 0;  // |phi + eta - T(phi + eta)|_{2*}^{2*}
};

NehariPoint nehari_project(const TildeFunctional& E, const SpinorField& phi, double t_min = 1e-8,
                           double t_max = 1e8);
// Nehari point as the maximizer of E~ over t phi + chi, t > 0, chi in E^-, by Newton-CG;
// empty when the ascent does not converge to an interior point
std::optional<NehariPoint> nehari_joint(const TildeFunctional& E, const SpinorField& phi,
                                        const NehariPoint* warm = nullptr, double tol = 1e-11);
// d/ds H((1+s) phi) at s = 0, central difference
double H_ray_derivative(const TildeFunctional& E, const SpinorField& phi, double step = 1e-5);

// R(psi) = (||psi+||^2 - ||psi-||^2) / |psi - T psi|_{2*}^2; zero perturbation only
double rayleigh(const TildeFunctional& E, const SpinorField& psi);

struct RayleighResult {
  double S = 0;
  SpinorField chi;
  double gradient_norm = 0;
  int iterations = 0;
};
RayleighResult S_lambda(const TildeFunctional& E, const NehariPoint& p, double tol = 1e-11);

}  // namespace nld
