#include "ltg/growth.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ltg/error.hpp"
#include "ltg/quadrature.hpp"
#include "ltg/specfun.hpp"

namespace ltg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMomentTol = 1e-9;
constexpr double kDerivativeMomentTol = 1e-13;
// e^{-kExpTailCut} is far below both tolerances for every admitted rate.
constexpr double kExpTailCut = 60.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Integrates g(y) (alpha (y - 1) + 1)^power pdf(y) over (0, bound].
template <class Pdf, class G>
double density_expectation(const Pdf& pdf, double bound, double theta, double alpha, double power, G g,
                           double tol) {
  // y = v^{1/theta} on [0, 1] removes the y^{theta-1} endpoint singularity at alpha = 1.
  const double p = 1.0 / theta;
  auto body = [&](double y) {
    const double w = jump_factor(alpha, y);
    return w > 0.0 ? g(y) * std::pow(w, power) * pdf(y) : 0.0;
  };
  auto near = [&](double v) { return v > 0.0 ? body(std::pow(v, p)) * p * std::pow(v, p - 1.0) : 0.0; };
  const double split = std::min(1.0, bound);
  double total = quad::integrate(near, 0.0, split, 0.5 * tol).value;
  if (bound > split) total += quad::integrate(body, split, bound, 0.5 * tol).value;
  return total;
}

double tail_bound(const ExponentialJump& e) { return kExpTailCut / e.rate; }

}  // namespace

double clamp_alpha(double alpha) {
  if (!(alpha >= -kAlphaSlack && alpha <= 1.0 + kAlphaSlack)) {
    throw Error(ErrorKind::OutOfRange, "alpha must lie in [0, 1] (got " + fmt(alpha) + ")");
  }
  return std::clamp(alpha, 0.0, 1.0);
}

HestonCoefficients heston_coefficients(const HestonParams& p, Utility u) {
  const double th = u.theta();
  const double k = p.kappa, g = p.gamma_level, d = p.delta, rho = p.rho;
  const double d2 = d * d;
  const double scale = k * k * g * g / (d2 * d2);
  HestonCoefficients c;
  c.c0 = k * k * g / d2 + th * p.r;
  c.c1 = scale * (d2 * th - d2 * th * th * (1.0 - rho * rho));
  c.c2 = d * k * rho * th * scale;
  c.c3 = k * k * k * k * g * g / (d2 * d2);
  c.c4 = -th * rho * k * g / d + th * (p.mu - p.r);

  const double lhs = c.c1 * c.c3 - c.c2 * c.c2;
  const double rhs = std::pow(k, 6) * std::pow(g, 4) * (th - th * th) / (d2 * d2 * d2);
  // 1e-12 relative, widened only by the rounding bound of the subtraction itself.
  const double rounding = 16.0 * kEps * (std::abs(c.c1 * c.c3) + c.c2 * c.c2);
  if (!(c.c1 > 0.0 && c.c3 > 0.0 && lhs > 0.0) ||
      !(std::abs(lhs - rhs) <= std::max(1e-12 * std::abs(rhs), rounding))) {
    throw Error(ErrorKind::InternalInvariantViolation,
                "Heston coefficient identity c1*c3 - c2^2 = " + fmt(lhs) + " vs " + fmt(rhs));
  }
  return c;
}

VasicekQuadratic vasicek_quadratic(const VasicekParams& p, Utility u) {
  const double th = u.theta();
  const double k = p.kappa, d = p.delta, s = p.sigma, rho = p.rho;
  VasicekQuadratic q;
  q.a0 = p.gamma_level * th + d * d * th * th / (2.0 * k * k);
  q.a1 = -p.gamma_level * th + th * p.mu + d * th * th * s * rho / k - d * d * th * th / (k * k);
  q.a2 = th * (d * d * th / (2.0 * k * k) - d * th * s * rho / k + s * s * th / 2.0 - s * s / 2.0);
  return q;
}

double lambda_gbm(const GbmParams& p, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  const double s2 = p.sigma * p.sigma;
  return th * (a * p.mu + (1.0 - a) * p.r - 0.5 * a * a * s2) + 0.5 * th * th * a * a * s2;
}

double lambda_heston(const HestonParams& p, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  const double k = p.kappa, g = p.gamma_level, d = p.delta, rho = p.rho;
  // Constant term of the Riccati equation and its discriminant.
  const double forcing = 0.5 * (th * th * a * a * (1.0 - rho * rho) - th * a * a) + k * a * rho * th / d;
  const double kd = k - d * th * a * rho;
  const double disc = kd * kd + d * d * a * a * (th - th * th);
  // kappa^2 gamma / delta^2 - (kappa gamma / delta^2) sqrt(disc), rationalised.
  const double slope = 2.0 * k * g * forcing / (k + std::sqrt(disc));
  return slope - th * a * rho * k * g / d + th * a * p.mu + th * (1.0 - a) * p.r;
}

double lambda_three_halves(const ThreeHalvesParams& p, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  const double h = 0.5 + p.kappa / (p.delta * p.delta);
  const double x = a * a * (th - th * th) / (p.delta * p.delta);
  // kappa gamma (h - sqrt(h^2 + x)), rationalised.
  const double variance_part = -p.kappa * p.gamma_level * x / (h + std::sqrt(h * h + x));
  return th * a * p.mu + th * (1.0 - a) * p.r + variance_part;
}

double jump_utility_moment(const JumpLaw& law, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  if (a == 0.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const ConstantJump& c) { return std::pow(jump_factor(a, c.y), th); },
          [&](const ExponentialJump& e) {
            const double x = e.rate * (1.0 - a) / a;
            return std::pow(a / e.rate, th) * specfun::upper_incomplete_gamma_exp_scaled(th + 1.0, x).value;
          },
          [&](const DensityJump& d) {
            return density_expectation(d, d.support_bound, th, a, th, [](double) { return 1.0; }, kMomentTol);
          },
      },
      law);
}

double jump_derivative_moment(const JumpLaw& law, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  return std::visit(
      overloaded{
          [&](const ConstantJump& c) { return std::pow(jump_factor(a, c.y), th - 1.0) * (c.y - 1.0); },
          [&](const ExponentialJump& e) {
            if (a == 0.0) return 1.0 / e.rate - 1.0;
            auto pdf = [rate = e.rate](double y) { return rate * std::exp(-rate * y); };
            return density_expectation(pdf, tail_bound(e), th, a, th - 1.0, [](double y) { return y - 1.0; },
                                       kDerivativeMomentTol);
          },
          [&](const DensityJump& d) {
            if (a == 0.0) return d.mean - 1.0;
            return density_expectation(d, d.support_bound, th, a, th - 1.0, [](double y) { return y - 1.0; },
                                       kDerivativeMomentTol);
          },
      },
      law);
}

double lambda_jump(const JumpDiffusionParams& p, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  return lambda_gbm({p.mu, p.sigma, p.r}, u, a) + p.lambda_j * (jump_utility_moment(p.jump, u, a) - 1.0);
}

double lambda_vasicek(const VasicekParams& p, Utility u, double alpha) {
  const double a = clamp_alpha(alpha);
  const VasicekQuadratic q = vasicek_quadratic(p, u);
  return q.a0 + a * (q.a1 + a * q.a2);
}

double lambda(const ModelSpec& model, Utility u, double alpha) {
  return model.visit(overloaded{
      [&](const GbmParams& p) { return lambda_gbm(p, u, alpha); },
      [&](const HestonParams& p) { return lambda_heston(p, u, alpha); },
      [&](const ThreeHalvesParams& p) { return lambda_three_halves(p, u, alpha); },
      [&](const JumpDiffusionParams& p) { return lambda_jump(p, u, alpha); },
      [&](const VasicekParams& p) { return lambda_vasicek(p, u, alpha); },
  });
}

ThreeHalvesExponents three_halves_exponents(const ThreeHalvesParams& p, double lambda_l) {
  if (!(lambda_l >= 0.0) || !std::isfinite(lambda_l)) {
    throw Error(ErrorKind::OutOfRange, "Laplace rate must be >= 0 (got " + fmt(lambda_l) + ")");
  }
  const double d2 = p.delta * p.delta;
  const double h = 0.5 + p.kappa / d2;
  const double x = 2.0 * lambda_l / d2;
  const double root = std::sqrt(h * h + x);
  return {x / (h + root), 1.0 + 2.0 * root};
}

double log_laplace_three_halves_finite_t(const ThreeHalvesParams& p, double lambda_l, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::OutOfRange, "horizon must be > 0 (got " + fmt(t) + ")");
  }
  const auto [a, b] = three_halves_exponents(p, lambda_l);
  if (a == 0.0) return 0.0;
  const double kg = p.kappa * p.gamma_level;
  const double growth = kg * t;
  // log(e^{growth} - 1) without overflow.
  const double log_expm1 = growth > 30.0 ? growth + std::log1p(-std::exp(-growth)) : std::log(std::expm1(growth));
  const double log_w = std::log(2.0 * kg / (p.delta * p.delta * p.nu0)) - log_expm1;
  const double w = std::exp(log_w);
  const specfun::SpecFunResult m = specfun::kummer_m(a, b, -w);
  return specfun::log_gamma(b - a) - specfun::log_gamma(b) + a * log_w + std::log(m.value);
}

double laplace_three_halves_finite_t(const ThreeHalvesParams& p, double lambda_l, double t) {
  return std::exp(log_laplace_three_halves_finite_t(p, lambda_l, t));
}

GrowthCurve growth_curve(const ModelSpec& model, Utility u, int n_points) {
  if (n_points < 2) {
    throw Error(ErrorKind::OutOfRange, "growth curve needs at least 2 points (got " + std::to_string(n_points) + ")");
  }
  GrowthCurve curve{model, u, {}};
  curve.samples.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double alpha = i == n_points - 1 ? 1.0 : static_cast<double>(i) / (n_points - 1);
    curve.samples.push_back({alpha, lambda(model, u, alpha)});
  }
  return curve;
}

}  // namespace ltg
