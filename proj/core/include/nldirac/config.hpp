#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nldirac/errors.hpp"
#include "nldirac/nonlinearity.hpp"

namespace nld {

// Malformed or out-of-range configuration; line and column are 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& origin, int line, int column, const std::string& msg);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct NonlinearitySpec {
  std::string kind = "bnd";  // bnd | power | log_critical
  double alpha = 1.0;
  double p = 3.0;
  double q = 1.0;
};

Nonlinearity make_nonlinearity(int m, const NonlinearitySpec& spec);

struct Tolerances {
  double grad_tol = 1e-9;
  double fiber_tol = 1e-10;
  int max_iter = 4000;
};

struct RunConfig {
  std::string operation = "solve";  // solve branch testspinor multiplicity spectrum weyl clifford accept
  int m = 2;
  int K = 16;
  int n_grid = 0;  // 0: default collocation grid
  NonlinearitySpec nl;
  std::optional<double> lambda;
  std::vector<double> lambdas;  // from lambda_grid
  std::string lambda_grid;      // echo of the grid expression
  std::vector<int> second_near;
  std::vector<double> eps_sweep;
  double weyl_lambda = 40;
  std::string suite = "all";
  Tolerances tol;
  std::string output = "nld-out";
  std::uint64_t seed = 11;
  int threads = 1;
  bool guard = true;
};

std::vector<std::string> operations();

// "a:b:s" -> a, a+s, ... <= b, with b appended when the steps miss it
std::vector<double> parse_lambda_grid(const std::string& expr);

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
// module preconditions; throws ConfigError without a position
void validate(const RunConfig& cfg);

}  // namespace nld
