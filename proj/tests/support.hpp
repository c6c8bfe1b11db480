#pragma once

#include <cmath>
#include <random>

#include "ltg/params.hpp"

// Random valid parameter draws shared by the unit and acceptance tests.
// Ranges keep Lambda'' away from zero so argmax comparisons are well posed.
namespace ltg::test {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

  Utility utility() { return Utility::from_theta(uniform(0.05, 0.95)); }

  GbmParams gbm() { return {uniform(0.0, 0.15), uniform(0.1, 0.5), uniform(0.0, 0.06)}; }

  HestonParams heston() {
    HestonParams p;
    p.mu = uniform(0.0, 0.15);
    p.kappa = uniform(0.5, 5.0);
    p.gamma_level = uniform(0.01, 0.09);
    p.delta = uniform(0.05, 0.95) * std::sqrt(2.0 * p.kappa * p.gamma_level);
    p.rho = uniform(-0.9, 0.9);
    p.r = uniform(0.0, 0.06);
    p.nu0 = uniform(0.01, 0.09);
    return p;
  }

  ThreeHalvesParams three_halves() {
    ThreeHalvesParams p;
    p.mu = uniform(0.0, 0.15);
    p.kappa = uniform(0.5, 5.0);
    p.gamma_level = uniform(0.01, 0.09);
    p.delta = uniform(0.1, 1.0);
    p.r = uniform(0.0, 0.06);
    p.nu0 = uniform(0.01, 0.09);
    return p;
  }

  JumpDiffusionParams jump_exponential() {
    JumpDiffusionParams p;
    p.mu = uniform(0.0, 0.15);
    p.sigma = uniform(0.1, 0.5);
    p.lambda_j = uniform(0.1, 2.0);
    p.jump = ExponentialJump{uniform(0.5, 5.0)};
    p.r = uniform(0.0, 0.06);
    return p;
  }

  JumpDiffusionParams jump_constant() {
    JumpDiffusionParams p = jump_exponential();
    p.jump = ConstantJump{uniform(0.5, 1.5)};
    return p;
  }

  JumpDiffusionParams jump() { return uniform(0.0, 1.0) < 0.5 ? jump_constant() : jump_exponential(); }

  VasicekParams vasicek() {
    VasicekParams p;
    p.mu = uniform(0.0, 0.15);
    p.sigma = uniform(0.1, 0.5);
    p.kappa = uniform(0.5, 5.0);
    p.gamma_level = uniform(0.0, 0.06);
    p.delta = uniform(0.005, 0.05);
    p.rho = uniform(-0.9, 0.9);
    p.r0 = uniform(0.0, 0.06);
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

inline HestonParams reference_heston() { return {0.08, 2.0, 0.04, 0.3, -0.5, 0.03, 0.04}; }
inline ThreeHalvesParams reference_three_halves() { return {0.08, 2.0, 0.04, 0.5, 0.03, 0.04}; }
inline GbmParams reference_gbm() { return {0.08, 0.2, 0.03}; }
inline JumpDiffusionParams reference_jump() { return {0.08, 0.2, 1.0, ExponentialJump{2.0}, 0.03}; }
inline VasicekParams reference_vasicek() { return {0.08, 0.2, 1.0, 0.03, 0.01, 0.3, 0.03}; }

}  // namespace ltg::test
