#pragma once

#include <cmath>
#include <random>

#include "nldirac/spectral.hpp"

namespace nld::testing {

inline SpinorField random_field(const EigenTable& t, std::uint64_t seed, double decay = 0.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  SpinorField f = t.zeros();
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double a = std::exp(-decay * std::sqrt(double(t.grid().k_sq(i))));
    for (int r = 0; r < f.rank(); ++r) f.mode(i)[r] = a * cplx(nd(gen), nd(gen));
  }
  return f;
}

inline std::size_t find_mode(const EigenTable& t, std::initializer_list<int> k) {
  for (std::size_t i = 0; i < t.modes(); ++i) {
    auto kk = t.grid().k(i);
    if (std::equal(kk.begin(), kk.end(), k.begin())) return i;
  }
  return t.modes();
}

}  // namespace nld::testing
