#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace nld {

// Complex Clifford module of rank N = 2^floor(m/2) with e_i^2 = -I.
struct CliffordRep {
  int m = 0;
  int N = 0;
  std::vector<Eigen::MatrixXcd> gamma;
};

CliffordRep build_rep(int m);

// sum_j x_j e_j s
Eigen::VectorXcd clifford_mul(const CliffordRep& rep, std::span<const double> x,
                              const Eigen::VectorXcd& s);

// s - x.s
Eigen::VectorXcd one_minus_x_mul(const CliffordRep& rep, std::span<const double> x,
                                 const Eigen::VectorXcd& s);

struct CliffordResiduals {
  double anticommutator = 0;  // max |e_i e_j + e_j e_i + 2 delta_ij|
  double skew = 0;            // max |e_i^* + e_i|
  double unitarity = 0;       // max |e_i^* e_i - I|
  double norm_identity = 0;   // max relative error of |(1-x)s|^2 = (1+|x|^2)|s|^2
  double worst() const;
};

CliffordResiduals check_rep(const CliffordRep& rep, int samples = 1000,
                            std::uint64_t seed = 7);

}  // namespace nld
