#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nldirac/fiber.hpp"

namespace nld {

enum class Level { Least, Second };

struct BranchPoint {
  double lambda = 0;
  Level level = Level::Least;
  int k = 0;  // eigenvalue index for second-level points
  double energy = 0;
  double residual_l2 = 0;
  bool below_gamma_crit = false;
  bool kernel_point = false;  // lambda in spec(D), T active
  bool unique = true;         // multistart agreement of the final fiber solve
  SpinorField psi;
  SpinorField phi;
  int iterations = 0;
  double gradient_norm = 0;
  std::string init;  // which start produced the point
  std::vector<std::string> flags;
};

std::string level_name(const BranchPoint& p);

struct DescentOptions {
  double grad_tol = 1e-9;
  int max_iter = 4000;
  FiberOptions fiber;
  bool guard = true;  // throw GuardViolation when energy >= gamma_crit
};

struct Start {
  std::string name;
  SpinorField direction;  // any field with nonzero E+ part
};

// test-spinor directions at a few scales plus the plane wave of the lowest positive shell
std::vector<Start> default_starts(const SpectralSplit& split);

BranchPoint minimize_M(const SpectralSplit& split, const Nonlinearity& nl,
                       const std::vector<Start>& starts, DescentOptions opt = {});
BranchPoint minimize_M(const SpectralSplit& split, const Nonlinearity& nl,
                       DescentOptions opt = {});

// L2 norm of (D - lambda) psi - g(|psi|) psi on the active modes
double residual_check(const EigenTable& table, const Nonlinearity& nl, const SpinorField& psi,
                      double lambda);

// positive eigenvalues lambda_1 < lambda_2 < ... of the table
std::vector<double> positive_eigenvalues(const EigenTable& table);
// sum of multiplicities of eigenvalues in the open window (lambda, lambda + nu)
long long multiplicity_count(const EigenTable& table, double lambda, double nu);

// 0.5 max over the E+ eigenbasis adjacent to the kernel of lambda_k of |phi|_2^2, |phi|_lambda = 1
double default_sigma(const SpectralSplit& split_k);

struct SecondOptions {
  DescentOptions descent;
  double sigma = -1;  // <= 0: default_sigma
  int starts = 8;
  std::uint64_t seed = 11;
};

// minimize N_{lambda,k} on {phi in the unit sphere of E+_{lambda_k}, |phi|_2^2 >= sigma}
BranchPoint second_solution(const SpectralSplit& split_k, const Nonlinearity& nl, double lambda,
                            int k, SecondOptions opt = {},
                            const std::vector<Start>& starts = {});

struct SweepConfig {
  int m = 2;
  int K = 8;
  int n_grid = 0;
  std::vector<double> lambdas;
  std::vector<int> second_near;  // eigenvalue indices k for second branches
  std::vector<double> second_offsets = {0.05, 0.02, 0.01};
  double delta_guard_fraction = 0.2;
  int threads = 1;
  DescentOptions descent;
};

struct SweepRow {
  BranchPoint point;
  bool ok = true;
  std::string error;
  int interval = 0;  // j with lambda in [lambda_j, lambda_{j+1}), lambda_0 = -inf
};

struct SweepTable {
  std::vector<SweepRow> rows;  // least rows in lambda order, then second rows
  bool monotone = true;        // within each interval, up to 1e-6
};

SweepTable branch_sweep(const SweepConfig& cfg, const Nonlinearity& nl);

}  // namespace nld
