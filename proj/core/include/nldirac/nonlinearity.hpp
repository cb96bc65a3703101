#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nld {

// Subcritical perturbation f with F(s) = int_0^s f(t) t dt, plus the critical term s^{2*-2}.
class Nonlinearity {
 public:
  enum class Kind { Zero, Power, LogCritical, Custom };

  static Nonlinearity zero(int m);
  // f(s) = alpha s^{p-2}, F(s) = alpha s^p / p, p in (2, 2*)
  static Nonlinearity power(int m, double alpha, double p);
  // F(s) = alpha s^{2*} / ln(1 + s^q), q in (0, 2/(m-1)]
  static Nonlinearity log_critical(int m, double alpha, double q);
  // df may be empty; a central difference is used then
  static Nonlinearity custom(int m, std::function<double(double)> f,
                             std::function<double(double)> F,
                             std::function<double(double)> df = {});

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return m_; }
  double alpha() const noexcept { return alpha_; }
  double exponent() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double two_star() const noexcept { return two_star_; }
  std::string name() const;

  double f(double s) const;
  double F(double s) const;
  double df(double s) const;

  // g = f + s^{2*-2}, G = F + s^{2*}/2*, and g'
  double g(double s) const;
  double G(double s) const;
  double dg(double s) const;

 private:
  Nonlinearity(int m, Kind k);
  int m_;
  Kind kind_;
  double two_star_;
  double alpha_ = 0;
  double p_ = 0;
  double q_ = 0;
  std::function<double(double)> cf_, cF_, cdf_;
};

struct HypothesisVerdict {
  std::string name;
  bool pass;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisVerdict> verdicts;
  bool all_pass() const;
  bool passes(const std::string& name) const;
};

// Sampled checks of (f1)-(f5), the consistency of F with f, and the g, G properties.
HypothesisReport check_hypotheses(const Nonlinearity& nl, int m);

// the (f5) quantity rho^{m-1}/|ln rho|^{max(3-m,0)} int_0^{1/rho} F(rho^{-(m-1)/2}(1+r^2)^{-(m-1)/2}) r^{m-1} dr
double f5_integral(const Nonlinearity& nl, int m, double rho);

}  // namespace nld
