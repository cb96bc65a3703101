#include "nldirac/nonlinearity.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "nldirac/constants.hpp"
#include "nldirac/errors.hpp"

namespace nld {

namespace {

double crit_pow(double s, double e) {
  if (s <= 0) return 0;
  if (e == 2.0) return s * s;
  if (e == 4.0) return (s * s) * (s * s);
  return std::pow(s, e);
}

}  // namespace

Nonlinearity::Nonlinearity(int m, Kind k) : m_(m), kind_(k), two_star_(critical_exponent(m)) {}

Nonlinearity Nonlinearity::zero(int m) { return Nonlinearity(m, Kind::Zero); }

Nonlinearity Nonlinearity::power(int m, double alpha, double p) {
  Nonlinearity nl(m, Kind::Power);
  if (!(alpha > 0)) throw DomainError("power nonlinearity: alpha must be > 0");
  if (!(p > 2.0 && p < nl.two_star_)) {
    std::ostringstream os;
    os << "power nonlinearity: p=" << p << " outside (2, 2*) = (2, " << nl.two_star_ << ")";
    throw DomainError(os.str());
  }
  nl.alpha_ = alpha;
  nl.p_ = p;
  return nl;
}

Nonlinearity Nonlinearity::log_critical(int m, double alpha, double q) {
  Nonlinearity nl(m, Kind::LogCritical);
  if (!(alpha > 0)) throw DomainError("log-critical nonlinearity: alpha must be > 0");
  const double qmax = 2.0 / (m - 1.0);
  if (!(q > 0 && q <= qmax)) {
    std::ostringstream os;
    os << "log-critical nonlinearity: q=" << q << " outside (0, " << qmax << "]";
    throw DomainError(os.str());
  }
  nl.alpha_ = alpha;
  nl.q_ = q;
  return nl;
}

Nonlinearity Nonlinearity::custom(int m, std::function<double(double)> f,
                                  std::function<double(double)> F,
                                  std::function<double(double)> df) {
  if (!f || !F) throw InvalidArgument("custom nonlinearity needs f and F");
  Nonlinearity nl(m, Kind::Custom);
  nl.cf_ = std::move(f);
  nl.cF_ = std::move(F);
  nl.cdf_ = std::move(df);
  return nl;
}

std::string Nonlinearity::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Power: os << "power(alpha=" << alpha_ << ",p=" << p_ << ")"; return os.str();
    case Kind::LogCritical: os << "log-critical(alpha=" << alpha_ << ",q=" << q_ << ")"; return os.str();
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

double Nonlinearity::F(double s) const {
  if (s <= 0) return 0;
  switch (kind_) {
    case Kind::Zero: return 0;
    case Kind::Power: return alpha_ * std::pow(s, p_) / p_;
    case Kind::LogCritical: {
      const double L = std::log1p(std::pow(s, q_));
      return L > 0 ? alpha_ * std::pow(s, two_star_) / L : 0.0;
    }
    case Kind::Custom: return cF_(s);
  }
  return 0;
}

double Nonlinearity::f(double s) const {
  if (s <= 0) return 0;
  switch (kind_) {
    case Kind::Zero: return 0;
    case Kind::Power: return alpha_ * std::pow(s, p_ - 2.0);
    case Kind::LogCritical: {
      // F'(s)/s
      const double a = two_star_, sq = std::pow(s, q_);
      const double L = std::log1p(sq);
      if (L <= 0) return 0;
      const double dL = q_ * sq / (s * (1.0 + sq));
      return alpha_ * std::pow(s, a - 2.0) * (a * L - s * dL) / (L * L);
    }
    case Kind::Custom: return cf_(s);
  }
  return 0;
}

double Nonlinearity::df(double s) const {
  if (s <= 0) return 0;
  switch (kind_) {
    case Kind::Zero: return 0;
    case Kind::Power: return alpha_ * (p_ - 2.0) * std::pow(s, p_ - 3.0);
    case Kind::LogCritical:
      break;
    case Kind::Custom:
      if (cdf_) return cdf_(s);
      break;
  }
  const double h = 1e-5 * s;
  return (f(s + h) - f(s - h)) / (2 * h);
}

double Nonlinearity::g(double s) const { return f(s) + crit_pow(s, two_star_ - 2.0); }

double Nonlinearity::G(double s) const { return F(s) + crit_pow(s, two_star_) / two_star_; }

double Nonlinearity::dg(double s) const {
  if (s <= 0) return 0;
  const double e = two_star_ - 2.0;
  return df(s) + e * crit_pow(s, e - 1.0);
}

bool HypothesisReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
}

bool HypothesisReport::passes(const std::string& name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return v.pass;
  return false;
}

double f5_integral(const Nonlinearity& nl, int m, double rho) {
  const double e = 0.5 * (m - 1.0);
  const auto integrand = [&](double r) {
    return nl.F(std::pow(rho, -e) * std::pow(1.0 + r * r, -e)) * std::pow(r, m - 1);
  };
  const double upper = 1.0 / rho;
  // split at r = 1 where the profile turns over
  double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0,
                                                                           std::min(1.0, upper), 8, 1e-12);
  if (upper > 1.0)
    I += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 1.0, upper, 12, 1e-12);
  const double logp = std::max(3 - m, 0);
  return std::pow(rho, m - 1) / std::pow(std::abs(std::log(rho)), logp) * I;
}

HypothesisReport check_hypotheses(const Nonlinearity& nl, int m) {
  HypothesisReport rep;
  const double crit = 2.0 / (m - 1.0);
  std::vector<double> grid;
  for (double e = -6; e <= 6 + 1e-12; e += 0.05) grid.push_back(std::pow(10.0, e));

  // f(0) = 0 in the sense of the right limit, since f must be continuous
  bool f1 = nl.f(1e-10) < 1e-4;
  for (double s : grid) f1 = f1 && nl.f(s) >= 0.0;
  rep.verdicts.push_back({"f1", f1, "f(0+) = 0 and f >= 0 on a log grid; f(1e-10) = " + std::to_string(nl.f(1e-10))});

  // limits at infinity: strictly decreasing ratios over s = 1e4 .. 1e64, or identically zero
  const auto decays = [](const std::vector<double>& r) {
    if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) return true;
    for (std::size_t i = 1; i < r.size(); ++i)
      if (!(r[i] < r[i - 1])) return false;
    return r.back() <= 0.5 * r.front();
  };
  std::vector<double> big{1e4, 1e8, 1e16, 1e32, 1e64};
  std::vector<double> r2, r4;
  for (double s : big) {
    r2.push_back(nl.f(s) / std::pow(s, crit));
    const double Fs = nl.F(s);
    r4.push_back(Fs > 0 ? nl.f(s) * s / std::pow(Fs, (m + 1.0) / (2.0 * m)) : 0.0);
  }
  rep.verdicts.push_back({"f2", decays(r2), "f(s)/s^{2/(m-1)} at s=1e64: " + std::to_string(r2.back())});

  bool f3 = true;
  for (std::size_t i = 1; i < grid.size(); ++i)
    f3 = f3 && nl.f(grid[i]) + std::pow(grid[i], crit) > nl.f(grid[i - 1]) + std::pow(grid[i - 1], crit);
  rep.verdicts.push_back({"f3", f3, "f(s) + s^{2/(m-1)} strictly increasing on a log grid"});

  rep.verdicts.push_back(
      {"f4", decays(r4), "f(s)s/F(s)^{(m+1)/(2m)} at s=1e64: " + std::to_string(r4.back())});

  std::vector<double> vals;
  for (double rho : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) vals.push_back(f5_integral(nl, m, rho));
  bool growing = vals.back() > 0;
  for (std::size_t i = 1; i < vals.size(); ++i) growing = growing && vals[i] > vals[i - 1];
  const bool f5 = growing && vals.back() > 10.0 * vals.front();
  rep.verdicts.push_back({"f5", f5, "integral at rho=1e-2..1e-6 grows by factor " +
                                        std::to_string(vals.front() > 0 ? vals.back() / vals.front() : 0.0)});

  bool consistent = true;
  double worst = 0;
  for (double e = -3; e <= 3 + 1e-12; e += 0.25) {
    const double s = std::pow(10.0, e), h = 1e-4 * s;
    const double dF = (nl.F(s + h) - nl.F(s - h)) / (2 * h);
    const double ref = nl.f(s) * s;
    const double err = std::abs(dF - ref) / std::max(std::abs(ref), 1e-300);
    if (ref != 0.0) worst = std::max(worst, err);
    consistent = consistent && (ref == 0.0 ? std::abs(dF) < 1e-12 : err < 1e-6);
  }
  rep.verdicts.push_back({"F-consistency", consistent, "max relative error " + std::to_string(worst)});

  bool g1 = true, g2 = true;
  double prev = -1;
  for (double s : grid) {
    const double Gs = nl.G(s);
    g1 = g1 && 0.5 * nl.g(s) * s * s > Gs && Gs > 0;
    const double h = nl.g(s) * s * s - 2.0 * Gs;
    g2 = g2 && h > prev;
    prev = h;
  }
  rep.verdicts.push_back({"G-i", g1, "g(s)s^2/2 > G(s) > 0"});
  rep.verdicts.push_back({"G-ii", g2, "s -> g(s)s^2 - 2G(s) strictly increasing"});
  return rep;
}

}  // namespace nld
