#include "nldirac/constants.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nldirac/errors.hpp"

namespace nld {

namespace {

void require_dim(int m) {
  if (m < 1) throw InvalidArgument("invalid dimension " + std::to_string(m));
}

}  // namespace

double sphere_volume(int m) {
  require_dim(m);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

double unit_ball_volume(int m) {
  require_dim(m);
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double critical_exponent(int m) {
  if (m < 2) throw InvalidArgument("critical exponent needs m >= 2");
  return 2.0 * m / (m - 1.0);
}

double gamma_crit(int m) {
  if (m < 2) throw InvalidArgument("gamma_crit needs m >= 2");
  return std::pow(0.5 * m, m) * sphere_volume(m) / (2.0 * m);
}

double nu_window(int m, double volume) {
  if (!(volume > 0)) throw InvalidArgument("nu_window: volume must be positive");
  return 0.5 * m * std::pow(sphere_volume(m) / volume, 1.0 / m);
}

double lambda_min_sphere(int m) { return 0.5 * m * std::pow(sphere_volume(m), 1.0 / m); }

double sphere_volume_by_quadrature(int m) {
  if (m < 2) throw InvalidArgument("quadrature identity needs m >= 2");
  boost::math::quadrature::exp_sinh<double> q;
  const auto f = [m](double r) {
    if (r <= 1) return std::pow(r, m - 1) * std::pow(1.0 + r * r, -m);
    const double v = 1.0 / r;
    return std::pow(v, m + 1) * std::pow(1.0 + v * v, -m);
  };
  const double integral = q.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  return std::pow(2.0, m) * sphere_volume(m - 1) * integral;
}

std::vector<SphereEigenvalue> sphere_positive_spectrum(int m, int count) {
  require_dim(m);
  std::vector<SphereEigenvalue> out;
  const long long N = 1LL << (m / 2);
  for (int j = 0; j < count; ++j) {
    // C(m+j-1, j)
    long double c = 1;
    for (int i = 1; i <= j; ++i) c = c * (m - 1 + i) / i;
    out.push_back({0.5 * m + j, N * static_cast<long long>(std::llround(c))});
  }
  return out;
}

long long sphere_count(int m, double Lambda) {
  long long total = 0;
  const int count = static_cast<int>(std::floor(Lambda - 0.5 * m)) + 1;
  if (count <= 0) return 0;
  for (const auto& e : sphere_positive_spectrum(m, count))
    if (e.value <= Lambda) total += e.multiplicity;
  return total;
}

}  // namespace nld
