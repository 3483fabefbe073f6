#ifndef RAUZY_TEST_SUPPORT_HPP
#define RAUZY_TEST_SUPPORT_HPP

#include <cmath>
#include <string>

#include "model.hpp"
#include "substitution.hpp"

namespace test {

inline const double tau = (1.0 + std::sqrt(5.0)) / 2.0;

inline std::string fixture(const std::string& name) { return std::string(RAUZY_FIXTURES) + "/" + name; }

inline rauzy::RandomSubstitution load(const std::string& name) { return rauzy::load_substitution(fixture(name)); }

inline rauzy::Model model(const std::string& name) { return rauzy::build_model(load(name)); }

// Real root > 1 of x^3 = x^2 + x + 1 by bisection.
inline double tribonacci_constant() {
  double lo = 1.5, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid - mid * mid - mid - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace test

#endif
