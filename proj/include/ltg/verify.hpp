#pragma once

#include <cstdint>
#include <vector>

#include "ltg/params.hpp"

namespace ltg {

/// Fixed-step RK4 solution of the affine exponent ODEs u = exp(A(t) + B(t) x).
struct OdeTrace {
  std::vector<double> times;
  std::vector<double> a_values;
  std::vector<double> b_values;
  double b_limit_closed_form = 0.0;
  double a_slope_closed_form = 0.0;
};

/// Heston Riccati system B' = -kappa B + delta^2 B^2 / 2 + c, A' = kappa gamma B,
/// with B(0) = theta alpha rho / delta. b_limit is the smaller root of the
/// stationary quadratic. Throws StepSizeTooLarge if a step moves B by more
/// than half its distance to that root.
OdeTrace integrate_heston_riccati(const HestonParams& p, Utility u, double alpha, double t_end, double dt);

/// Vasicek linear system B' = -kappa B + theta (1 - alpha) + theta alpha sigma kappa rho / delta,
/// A' = kappa gamma B + delta^2 B^2 / 2, B(0) = theta alpha sigma rho / delta.
OdeTrace integrate_vasicek_ode(const VasicekParams& p, Utility u, double alpha, double t_end, double dt);

/// Growth rate rebuilt from the ODE exponent: A(T)/T plus the deterministic
/// drift and measure-change terms of each model.
double heston_lambda_from_trace(const HestonParams& p, Utility u, double alpha, const OdeTrace& trace);
double vasicek_lambda_from_trace(const VasicekParams& p, Utility u, double alpha, const OdeTrace& trace);

struct SimEstimate {
  double lambda_hat = 0.0;
  double std_error = 0.0;
  double horizon_t = 0.0;
  std::int64_t n_paths = 0;
  std::int64_t n_steps = 0;
  std::uint64_t seed = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double horizon_t = 0.0;
  std::int64_t n_paths = 0;
  std::int64_t n_steps = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Number of worker threads used when a caller passes workers = 0.
unsigned default_workers();

/// Monte Carlo estimate of (1/t) log E[(V_t / V_0)^theta]. Every path owns a
/// counter-derived RNG stream, so results are bit-identical for any worker count.
SimEstimate mc_growth_estimate(const ModelSpec& model, Utility u, double alpha, double t, std::int64_t n_paths,
                               std::int64_t n_steps, std::uint64_t seed, unsigned workers = 0);

/// Monte Carlo mean of exp(-lambda_L int_0^t nu_s ds) under the 3/2 variance.
MeanEstimate mc_laplace_three_halves(const ThreeHalvesParams& p, double lambda_l, double t, std::int64_t n_paths,
                                     std::int64_t n_steps, std::uint64_t seed, unsigned workers = 0);

}  // namespace ltg
