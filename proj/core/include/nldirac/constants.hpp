#pragma once

#include <vector>

namespace nld {

// Vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
double sphere_volume(int m);
double unit_ball_volume(int m);
double critical_exponent(int m);  // 2m/(m-1)

// (1/2m)(m/2)^m omega_m
double gamma_crit(int m);
// (m/2)(omega_m / vol)^{1/m}
double nu_window(int m, double volume);
// (m/2) omega_m^{1/m}
double lambda_min_sphere(int m);

// 2^m omega_{m-1} int_0^inf r^{m-1} (1+r^2)^{-m} dr by numerical quadrature
double sphere_volume_by_quadrature(int m);

// Round-sphere Dirac spectrum, closed form from the literature:
// eigenvalues +-(m/2 + j), j >= 0, each with multiplicity 2^{floor(m/2)} C(m+j-1, j).
struct SphereEigenvalue {
  double value;
  long long multiplicity;
};
std::vector<SphereEigenvalue> sphere_positive_spectrum(int m, int count);
// d_+(Lambda) on S^m from the table
long long sphere_count(int m, double Lambda);

}  // namespace nld
