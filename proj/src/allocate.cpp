#include "ltg/allocate.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ltg/error.hpp"
#include "ltg/growth.hpp"

namespace ltg {
namespace {

constexpr double kBisectDerivTol = 1e-12;
constexpr double kBisectWidth = 1e-14;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

AllocationDecision bond_only(double lambda0) { return {0.0, CaseLabel::BondOnly, lambda0, std::nullopt}; }

// Clamp of an interior candidate of a concave growth rate.
template <class Lambda>
AllocationDecision clamp_candidate(double dagger, const Lambda& lam) {
  if (dagger >= 1.0) return {1.0, CaseLabel::ClampedToOne, lam(1.0), dagger};
  if (dagger <= 0.0) return {0.0, CaseLabel::ClampedToZero, lam(0.0), dagger};
  return {dagger, CaseLabel::Interior, lam(dagger), dagger};
}

}  // namespace

std::string_view to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::BondOnly: return "BondOnly";
    case CaseLabel::StockOnly: return "StockOnly";
    case CaseLabel::Interior: return "Interior";
    case CaseLabel::ClampedToOne: return "ClampedToOne";
    case CaseLabel::ClampedToZero: return "ClampedToZero";
    case CaseLabel::ConvexBoundary: return "ConvexBoundary";
  }
  return "BondOnly";
}

std::optional<CaseLabel> parse_case_label(std::string_view text) {
  for (CaseLabel c : {CaseLabel::BondOnly, CaseLabel::StockOnly, CaseLabel::Interior, CaseLabel::ClampedToOne,
                      CaseLabel::ClampedToZero, CaseLabel::ConvexBoundary}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

AllocationDecision optimal_gbm(const GbmParams& p, Utility u) {
  const double th = u.theta();
  auto lam = [&](double a) { return lambda_gbm(p, u, a); };
  if (p.mu <= p.r) return bond_only(lam(0.0));
  const double dagger = (p.mu - p.r) / ((1.0 - th) * p.sigma * p.sigma);
  if (p.mu - p.r >= (1.0 - th) * p.sigma * p.sigma) return {1.0, CaseLabel::StockOnly, lam(1.0), dagger};
  return {dagger, CaseLabel::Interior, lam(dagger), dagger};
}

AllocationDecision optimal_heston(const HestonParams& p, Utility u) {
  const HestonCoefficients c = heston_coefficients(p, u);
  auto lam = [&](double a) { return lambda_heston(p, u, a); };
  const double sqrt_c1 = std::sqrt(c.c1);
  if (c.c4 + c.c2 / std::sqrt(c.c3) <= 0.0) return bond_only(lam(0.0));
  if (c.c4 >= sqrt_c1) return {1.0, CaseLabel::StockOnly, lam(1.0), std::nullopt};
  // Here -c2/sqrt(c3) < c4 < sqrt(c1), so c1 - c4^2 > 0.
  const double dagger = (c.c2 + c.c4 * std::sqrt((c.c1 * c.c3 - c.c2 * c.c2) / (c.c1 - c.c4 * c.c4))) / c.c1;
  return clamp_candidate(dagger, lam);
}

AllocationDecision optimal_three_halves(const ThreeHalvesParams& p, Utility u) {
  const double th = u.theta();
  const double q = th - th * th;
  const double excess = p.mu - p.r;
  auto lam = [&](double a) { return lambda_three_halves(p, u, a); };
  if (excess <= 0.0) return bond_only(lam(0.0));
  const double kg = p.kappa * p.gamma_level;
  if (th * excess - kg / p.delta * std::sqrt(q) >= 0.0) {
    return {1.0, CaseLabel::StockOnly, lam(1.0), std::nullopt};
  }
  const double d2 = p.delta * p.delta;
  const double radicand = kg * kg * q - th * th * excess * excess * d2;
  if (!(radicand > 0.0)) {
    throw Error(ErrorKind::InternalInvariantViolation,
                "3/2 interior radicand is not positive: " + std::to_string(radicand));
  }
  // Stationary point of the growth rate with the squared (1/2 + kappa/delta^2)^2 radical.
  const double h = 0.5 + p.kappa / d2;
  const double dagger = th * excess * d2 * h / (std::sqrt(radicand) * std::sqrt(q));
  return clamp_candidate(dagger, lam);
}

double lambda_prime_jump(const JumpDiffusionParams& p, Utility u, double alpha) {
  const double th = u.theta();
  return th * (p.mu - p.r) + (th * th - th) * p.sigma * p.sigma * alpha +
         p.lambda_j * th * jump_derivative_moment(p.jump, u, alpha);
}

AllocationDecision optimal_jump(const JumpDiffusionParams& p, Utility u) {
  // Unit jumps (or no jumps) leave the diffusion part only.
  const auto* c = std::get_if<ConstantJump>(&p.jump);
  if (p.lambda_j == 0.0 || (c != nullptr && c->y == 1.0)) return optimal_gbm({p.mu, p.sigma, p.r}, u);
  const double th = u.theta();
  auto lam = [&](double a) { return lambda_jump(p, u, a); };
  const double slope0 = th * (p.mu - p.r) + p.lambda_j * th * (jump_mean(p.jump) - 1.0);
  if (slope0 <= 0.0) return bond_only(lam(0.0));
  if (lambda_prime_jump(p, u, 1.0) >= 0.0) return {1.0, CaseLabel::StockOnly, lam(1.0), std::nullopt};

  // Lambda' is strictly decreasing with a sign change on (0, 1).
  double lo = 0.0;
  double hi = 1.0;
  double mid = 0.5;
  while (hi - lo > kBisectWidth) {
    mid = 0.5 * (lo + hi);
    const double d = lambda_prime_jump(p, u, mid);
    if (std::abs(d) <= kBisectDerivTol) break;
    (d > 0.0 ? lo : hi) = mid;
    mid = 0.5 * (lo + hi);
  }
  return {mid, CaseLabel::Interior, lam(mid), mid};
}

AllocationDecision optimal_vasicek(const VasicekParams& p, Utility u) {
  const double th = u.theta();
  const double k = p.kappa, d = p.delta, s = p.sigma, rho = p.rho;
  auto lam = [&](double a) { return lambda_vasicek(p, u, a); };
  const double curvature = d * d * th / (2.0 * k * k) - d * th * s * rho / k + s * s * th / 2.0 - s * s / 2.0;
  if (curvature >= 0.0) {
    const bool bond = p.gamma_level + d * d * th / (2.0 * k * k) >= 0.5 * (th - 1.0) * s * s + p.mu;
    const double a = bond ? 0.0 : 1.0;
    return {a, CaseLabel::ConvexBoundary, lam(a), std::nullopt};
  }
  const double numer = -p.gamma_level * th + th * p.mu + d * th * th * s * rho / k - d * d * th * th / (k * k);
  const double dagger = numer / (2.0 * th * -curvature);
  return clamp_candidate(dagger, lam);
}

AllocationDecision optimal(const ModelSpec& model, Utility u) {
  return model.visit(overloaded{
      [&](const GbmParams& p) { return optimal_gbm(p, u); },
      [&](const HestonParams& p) { return optimal_heston(p, u); },
      [&](const ThreeHalvesParams& p) { return optimal_three_halves(p, u); },
      [&](const JumpDiffusionParams& p) { return optimal_jump(p, u); },
      [&](const VasicekParams& p) { return optimal_vasicek(p, u); },
  });
}

double golden_section_argmax(const std::function<double(double)>& f, double lo, double hi, double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double numeric_argmax(const std::function<double(double)>& f) {
  std::array<double, kConcavityProbePoints> probe{};
  for (int i = 0; i < kConcavityProbePoints; ++i) probe[i] = f(static_cast<double>(i) / (kConcavityProbePoints - 1));
  bool concave = true;
  for (int i = 1; i + 1 < kConcavityProbePoints; ++i) {
    if (!(probe[i - 1] - 2.0 * probe[i] + probe[i + 1] < 0.0)) {
      concave = false;
      break;
    }
  }

  double best_x = 0.0;
  double best_f = f(0.0);
  auto offer = [&](double x) {
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  };

  if (concave) {
    offer(golden_section_argmax(f, 0.0, 1.0));
    offer(1.0);
    return best_x;
  }

  int best_i = 0;
  for (int i = 1; i < kDenseGridPoints; ++i) {
    const double x = i == kDenseGridPoints - 1 ? 1.0 : static_cast<double>(i) / (kDenseGridPoints - 1);
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }
  const double step = 1.0 / (kDenseGridPoints - 1);
  const double lo = std::max(0.0, (best_i - 1) * step);
  const double hi = std::min(1.0, (best_i + 1) * step);
  offer(golden_section_argmax(f, lo, hi));
  return best_x;
}

double numeric_argmax(const ModelSpec& model, Utility u) {
  return numeric_argmax([&](double a) { return lambda(model, u, a); });
}

}  // namespace ltg
