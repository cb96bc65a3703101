#pragma once

#include "nldirac/torus.hpp"

namespace nld::detail {

// Smooth concave maximization on a linear subspace with a user metric.
class AscentModel {
 public:
  virtual ~AscentModel() = default;
  virtual double value(const SpinorField& x) = 0;
  // set the linearization point for gradient() and neg_hessian()
  virtual void prepare(const SpinorField& x) = 0;
  virtual SpinorField gradient() = 0;
  virtual SpinorField neg_hessian(const SpinorField& h) = 0;
  virtual double inner(const SpinorField& a, const SpinorField& b) = 0;
};

struct AscentResult {
  SpinorField x;
  double value = 0;
  double gradient_norm = 0;
  int iterations = 0;
  int hessian_products = 0;
  bool converged = false;
};

AscentResult newton_ascent(AscentModel& model, SpinorField x0, double tol, int max_iter);

}  // namespace nld::detail
