#pragma once

#include <cstddef>
#include <vector>

#include "nldirac/torus.hpp"

namespace nld {

enum class Part : signed char { Minus = -1, Zero = 0, Plus = 1 };

// Partition of eigenmodes relative to lambda, with weights w = |sigma - lambda|^{1/2}
// off the kernel and w = 1 on it. Each mode has two slots, the +|k| and -|k| branches.
class SpectralSplit {
 public:
  SpectralSplit(EigenTable table, double lambda, double tol = -1.0);

  static double default_tol(double lambda);

  const EigenTable& table() const noexcept { return table_; }
  double lambda() const noexcept { return lambda_; }
  double tol() const noexcept { return tol_; }

  Part part(std::size_t mode, int slot) const {
    return static_cast<Part>(part_[2 * mode + slot]);
  }
  double weight(std::size_t mode, int slot) const { return w_[2 * mode + slot]; }
  double eigenvalue(std::size_t mode, int slot) const;
  // complex dimension of E^+, E^0, E^-
  std::size_t dim(Part p) const;
  bool has_kernel() const { return dim(Part::Zero) > 0; }

  // coefficientwise spectral calculus: out = sum_slots coef(part, w) P_slot f
  template <class F>
  SpinorField map(const SpinorField& f, F&& coef) const {
    SpinorField out(f.modes(), f.rank());
    for (std::size_t i = 0; i < f.modes(); ++i) {
      const double a = coef(part(i, 0), weight(i, 0));
      const double b = coef(part(i, 1), weight(i, 1));
      table_.apply_mode(i, f.mode_data(i), out.mode_data(i), a, b);
    }
    return out;
  }

  SpinorField project(const SpinorField& f, Part p) const;
  // onto E^0 + E^-
  SpinorField project_fiber(const SpinorField& f) const;
  SpinorField scale(const SpinorField& f, double power) const;  // w^power f
  // <.,.>_lambda Riesz representative of the functional with L2 representative r
  SpinorField riesz(const SpinorField& r) const { return scale(r, -2.0); }

  double inner(const SpinorField& a, const SpinorField& b) const;
  double norm(const SpinorField& f) const;
  double dual_norm(const SpinorField& r) const;
  // ||f+||^2 - ||f-||^2
  double quadratic(const SpinorField& f) const;

 private:
  EigenTable table_;
  double lambda_;
  double tol_;
  std::vector<double> w_;
  std::vector<signed char> part_;
  std::size_t dims_[3] = {0, 0, 0};
};

SpectralSplit split(const EigenTable& table, double lambda, double tol = -1.0);

SpinorField apply_dirac(const EigenTable& table, const SpinorField& f);
// (D - lambda) f
SpinorField apply_shifted(const EigenTable& table, const SpinorField& f, double lambda);

double l2_inner(const EigenTable& table, const SpinorField& a, const SpinorField& b);
cplx l2_pairing(const EigenTable& table, const SpinorField& a, const SpinorField& b);
double l2_norm(const EigenTable& table, const SpinorField& f);
double norm_lambda(const SpectralSplit& s, const SpinorField& f);
double dual_norm(const SpectralSplit& s, const SpinorField& r);

double lp_norm(const EigenTable& table, const SpinorField& f, double p);
double lp_norm_values(const GridValues& v, int rank, double cell_volume, double p);
// integral of |v|^p over the grid
double lp_power_values(const GridValues& v, int rank, double cell_volume, double p);

struct WeylCounts {
  long long d_plus = 0;
  long long d_minus = 0;
  long long n_count = 0;
  double ratio = 0;    // d_plus / Lambda^m
  double c_m_vol = 0;  // (N/2) |B^m|
};

WeylCounts weyl_counts(const EigenTable& table, double Lambda);

// plane wave e^{ik.x} s with s the unit eigenvector of i k.gamma for +|k| (sign > 0) or -|k|
SpinorField plane_wave(const EigenTable& table, std::size_t mode, int sign, cplx amplitude = 1.0);

}  // namespace nld
