#pragma once

#include <vector>

#include "ltg/params.hpp"

namespace ltg {

/// alpha values within this distance outside [0, 1] are clamped; anything
/// further out is rejected with OutOfRange.
inline constexpr double kAlphaSlack = 1e-9;
double clamp_alpha(double alpha);

// Constants of the Heston growth rate, written as
//   Lambda(alpha) = -sqrt(c1 alpha^2 - 2 c2 alpha + c3) + c4 alpha + c0.
struct HestonCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

HestonCoefficients heston_coefficients(const HestonParams& p, Utility u);

// Vasicek growth rate is the quadratic a0 + a1 alpha + a2 alpha^2.
struct VasicekQuadratic {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

VasicekQuadratic vasicek_quadratic(const VasicekParams& p, Utility u);

// Long-term growth rate lim (1/t) log E[(V_t / V_0)^theta] for a static
// stock fraction alpha. Inputs are assumed validated.
double lambda_gbm(const GbmParams& p, Utility u, double alpha);
double lambda_heston(const HestonParams& p, Utility u, double alpha);
double lambda_three_halves(const ThreeHalvesParams& p, Utility u, double alpha);
double lambda_jump(const JumpDiffusionParams& p, Utility u, double alpha);
double lambda_vasicek(const VasicekParams& p, Utility u, double alpha);

double lambda(const ModelSpec& model, Utility u, double alpha);

/// Wealth factor alpha (y - 1) + 1 after a jump of size y. Exact at y = 1 and
/// free of cancellation as y -> 0 with alpha -> 1.
inline double jump_factor(double alpha, double y) {
  return y >= 0.5 ? alpha * (y - 1.0) + 1.0 : alpha * y + (1.0 - alpha);
}

/// E[(alpha (Y - 1) + 1)^theta] for a single jump factor Y.
double jump_utility_moment(const JumpLaw& law, Utility u, double alpha);

/// E[(alpha (Y - 1) + 1)^{theta - 1} (Y - 1)], the jump part of Lambda'(alpha) / (lambda_j theta).
double jump_derivative_moment(const JumpLaw& law, Utility u, double alpha);

// Exponents of the 3/2 integrated-variance Laplace transform at rate lambda_L.
struct ThreeHalvesExponents {
  double a = 0.0;
  double b = 0.0;
};

ThreeHalvesExponents three_halves_exponents(const ThreeHalvesParams& p, double lambda_l);

/// E[exp(-lambda_L int_0^t nu_s ds)] under the 3/2 variance process started at nu0.
double laplace_three_halves_finite_t(const ThreeHalvesParams& p, double lambda_l, double t);
/// Logarithm of the same transform, evaluated without leaving log space.
double log_laplace_three_halves_finite_t(const ThreeHalvesParams& p, double lambda_l, double t);

struct GrowthSample {
  double alpha = 0.0;
  double lambda = 0.0;
};

struct GrowthCurve {
  ModelSpec model;
  Utility theta;
  std::vector<GrowthSample> samples;
};

GrowthCurve growth_curve(const ModelSpec& model, Utility u, int n_points);

}  // namespace ltg
