#include "ltg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "ltg/error.hpp"
#include "ltg/growth.hpp"
#include "ltg/rng.hpp"

namespace ltg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr int kDensityTableCells = 8192;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_horizon(double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0) || !(dt <= t_end) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::OutOfRange, "ODE needs 0 < dt <= t_end (got t_end=" + fmt(t_end) + ", dt=" + fmt(dt) + ")");
  }
}

// Integrates (A, B) with RK4 where A' = fa(B) and B' = fb(B). `guard` sees
// (B_before, B_after) for each step.
template <class FA, class FB, class Guard>
OdeTrace rk4(double b0, double t_end, double dt, FA fa, FB fb, Guard guard) {
  check_horizon(t_end, dt);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  OdeTrace tr;
  tr.times.reserve(steps + 1);
  tr.a_values.reserve(steps + 1);
  tr.b_values.reserve(steps + 1);
  double a = 0.0;
  double b = b0;
  tr.times.push_back(0.0);
  tr.a_values.push_back(a);
  tr.b_values.push_back(b);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double kb1 = fb(b);
    const double ka1 = fa(b);
    const double b2 = b + 0.5 * h * kb1;
    const double kb2 = fb(b2);
    const double ka2 = fa(b2);
    const double b3 = b + 0.5 * h * kb2;
    const double kb3 = fb(b3);
    const double ka3 = fa(b3);
    const double b4 = b + h * kb3;
    const double kb4 = fb(b4);
    const double ka4 = fa(b4);
    const double b_next = b + h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    a += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
    guard(b, b_next, i);
    b = b_next;
    tr.times.push_back(i == steps ? t_end : static_cast<double>(i) * h);
    tr.a_values.push_back(a);
    tr.b_values.push_back(b);
  }
  return tr;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  bool all_equal = true;
};

// Fixed-order reduction; independent of how paths were scheduled.
Moments summarise(const std::vector<double>& xs) {
  Moments m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - m.mean) * (x - m.mean);
    if (x != xs.front()) m.all_equal = false;
  }
  m.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return m;
}

template <class PathFn>
std::vector<double> run_paths(std::int64_t n_paths, std::uint64_t seed, unsigned workers, const PathFn& path) {
  std::vector<double> out(static_cast<std::size_t>(n_paths));
  const unsigned w = std::max(1u, std::min<unsigned>(workers == 0 ? default_workers() : workers,
                                                      static_cast<unsigned>(std::min<std::int64_t>(n_paths, 1 << 16))));
  auto work = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      auto eng = rng::path_stream(seed, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = path(eng);
    }
  };
  if (w == 1) {
    work(0, n_paths);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (unsigned k = 0; k < w; ++k) {
    const std::int64_t begin = n_paths * k / w;
    const std::int64_t end = n_paths * (k + 1) / w;
    pool.emplace_back(work, begin, end);
  }
  pool.clear();
  return out;
}

void check_finite(const std::vector<double>& xs, std::uint64_t seed) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw Error(ErrorKind::NonFinitePath,
                  "path " + std::to_string(i) + " (seed " + std::to_string(seed) + ") produced " + fmt(xs[i]));
    }
  }
}

// Inverse-CDF sampler for a tabulated jump density.
class DensitySampler {
 public:
  explicit DensitySampler(const DensityJump& d) : bound_(d.support_bound), cdf_(kDensityTableCells + 1, 0.0) {
    const double h = bound_ / kDensityTableCells;
    for (int i = 0; i < kDensityTableCells; ++i) {
      const double y0 = i * h;
      const double ym = y0 + 0.5 * h;
      const double y1 = y0 + h;
      const double f0 = i == 0 ? d(h * 1e-6) : d(y0);
      cdf_[i + 1] = cdf_[i] + h / 6.0 * (f0 + 4.0 * d(ym) + d(y1));
    }
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
  }

  double operator()(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf_.begin(), 1, kDensityTableCells));
    const double c0 = cdf_[hi - 1];
    const double c1 = cdf_[hi];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    return bound_ / kDensityTableCells * (static_cast<double>(hi - 1) + frac);
  }

 private:
  double bound_;
  std::vector<double> cdf_;
};

void check_sim_args(double alpha, double t, std::int64_t n_paths, std::int64_t n_steps, bool discretised) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "horizon t must be > 0");
  if (n_paths < 2) throw Error(ErrorKind::OutOfRange, "need at least 2 paths");
  if (n_steps < 1) throw Error(ErrorKind::OutOfRange, "need at least 1 step");
  if (discretised && static_cast<double>(n_steps) < 10.0 * t) {
    throw Error(ErrorKind::OutOfRange,
                "n_steps=" + std::to_string(n_steps) + " is below 10*t for a discretised model (t=" + fmt(t) + ")");
  }
  clamp_alpha(alpha);
}

}  // namespace

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

OdeTrace integrate_heston_riccati(const HestonParams& p, Utility u, double alpha, double t_end, double dt) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  const double k = p.kappa, d = p.delta, rho = p.rho;
  const double forcing = 0.5 * (th * th * a * a * (1.0 - rho * rho) - th * a * a) + k * a * rho * th / d;
  const double kd = k - d * th * a * rho;
  const double disc = kd * kd + d * d * a * a * (th - th * th);
  const double b_limit = 2.0 * forcing / (k + std::sqrt(disc));
  const double kg = k * p.gamma_level;
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b_limit));

  OdeTrace tr = rk4(
      th * a * rho / d, t_end, dt, [&](double b) { return kg * b; },
      [&](double b) { return -k * b + 0.5 * d * d * b * b + forcing; },
      [&](double before, double after, std::size_t step) {
        if (!std::isfinite(after) || std::abs(after - before) > 0.5 * std::abs(before - b_limit) + slack) {
          throw Error(ErrorKind::StepSizeTooLarge, "Riccati step " + std::to_string(step) + " moved B from " +
                                                       fmt(before) + " to " + fmt(after) + " (dt=" + fmt(dt) + ")");
        }
      });
  tr.b_limit_closed_form = b_limit;
  tr.a_slope_closed_form = kg * b_limit;
  return tr;
}

OdeTrace integrate_vasicek_ode(const VasicekParams& p, Utility u, double alpha, double t_end, double dt) {
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  const double k = p.kappa, d = p.delta, s = p.sigma, rho = p.rho;
  const double forcing = th * (1.0 - a) + th * a * s * k * rho / d;
  const double b_limit = th * (1.0 - a) / k + th * a * s * rho / d;
  const double kg = k * p.gamma_level;
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b_limit));

  OdeTrace tr = rk4(
      th * a * s * rho / d, t_end, dt, [&](double b) { return kg * b + 0.5 * d * d * b * b; },
      [&](double b) { return -k * b + forcing; },
      [&](double before, double after, std::size_t step) {
        if (!std::isfinite(after) || std::abs(after - before) > 0.5 * std::abs(before - b_limit) + slack) {
          throw Error(ErrorKind::StepSizeTooLarge, "Vasicek step " + std::to_string(step) + " moved B from " +
                                                       fmt(before) + " to " + fmt(after) + " (dt=" + fmt(dt) + ")");
        }
      });
  tr.b_limit_closed_form = b_limit;
  tr.a_slope_closed_form = kg * b_limit + 0.5 * d * d * b_limit * b_limit;
  return tr;
}

double heston_lambda_from_trace(const HestonParams& p, Utility u, double alpha, const OdeTrace& trace) {
  const double th = u.theta();
  const double a = clamp_alpha(alpha);
  return trace.a_values.back() / trace.times.back() - th * a * p.rho * p.kappa * p.gamma_level / p.delta +
         th * a * p.mu + th * (1.0 - a) * p.r;
}

double vasicek_lambda_from_trace(const VasicekParams& p, Utility u, double alpha, const OdeTrace& trace) {
  const double th = u.theta();
  const double a = clamp_alpha(alpha);
  const double s = p.sigma, rho = p.rho;
  return trace.a_values.back() / trace.times.back() - th * a * s * p.kappa * p.gamma_level * rho / p.delta +
         0.5 * th * th * a * a * s * s * (1.0 - rho * rho) + th * a * p.mu - 0.5 * th * a * a * s * s;
}

SimEstimate mc_growth_estimate(const ModelSpec& model, Utility u, double alpha, double t, std::int64_t n_paths,
                               std::int64_t n_steps, std::uint64_t seed, unsigned workers) {
  const bool exact = std::holds_alternative<GbmParams>(model.params()) ||
                     std::holds_alternative<JumpDiffusionParams>(model.params());
  check_sim_args(alpha, t, n_paths, n_steps, !exact);
  const double a = clamp_alpha(alpha);
  const double th = u.theta();
  SimEstimate est{0.0, 0.0, t, n_paths, n_steps, seed};

  // Bond-only wealth is deterministic under a constant short rate.
  if (a == 0.0 && model.has_constant_rate()) {
    est.lambda_hat = model.visit([&](const auto& p) -> double {
      if constexpr (requires { p.r; }) {
        return th * p.r;
      } else {
        return 0.0;
      }
    });
    return est;
  }

  const double h = t / static_cast<double>(n_steps);
  const double sqrt_h = std::sqrt(h);

  std::vector<double> values = model.visit(overloaded{
      [&](const GbmParams& p) {
        const double drift = (a * p.mu + (1.0 - a) * p.r - 0.5 * a * a * p.sigma * p.sigma) * t;
        const double vol = a * p.sigma * std::sqrt(t);
        return run_paths(n_paths, seed, workers, [&](auto& eng) {
          rng::NormalSampler normal;
          return std::exp(th * (drift + vol * normal(eng)));
        });
      },
      [&](const HestonParams& p) {
        const double rho_c = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
        return run_paths(n_paths, seed, workers, [&](auto& eng) {
          rng::NormalSampler normal;
          double nu = p.nu0;
          double log_v = 0.0;
          for (std::int64_t i = 0; i < n_steps; ++i) {
            const double nu_pos = std::max(nu, 0.0);
            const double sqrt_nu = std::sqrt(nu_pos);
            const double dw = sqrt_h * normal(eng);
            const double db = p.rho * dw + rho_c * sqrt_h * normal(eng);
            log_v += (a * p.mu + (1.0 - a) * p.r - 0.5 * a * a * nu_pos) * h + a * sqrt_nu * db;
            nu += p.kappa * (p.gamma_level - nu_pos) * h + p.delta * sqrt_nu * dw;
          }
          return std::exp(th * log_v);
        });
      },
      [&](const ThreeHalvesParams& p) {
        // X = 1/nu is CIR: dX = (kappa + delta^2 - kappa gamma X) dt - delta sqrt(X) dW.
        return run_paths(n_paths, seed, workers, [&](auto& eng) {
          rng::NormalSampler normal;
          double x = 1.0 / p.nu0;
          double log_v = 0.0;
          for (std::int64_t i = 0; i < n_steps; ++i) {
            const double x_pos = std::max(x, 0.0);
            const double nu = x_pos > 0.0 ? 1.0 / x_pos : std::numeric_limits<double>::quiet_NaN();
            const double dw = sqrt_h * normal(eng);
            const double db = sqrt_h * normal(eng);
            log_v += (a * p.mu + (1.0 - a) * p.r - 0.5 * a * a * nu) * h + a * std::sqrt(nu) * db;
            x += (p.kappa + p.delta * p.delta - p.kappa * p.gamma_level * x_pos) * h - p.delta * std::sqrt(x_pos) * dw;
          }
          return std::exp(th * log_v);
        });
      },
      [&](const JumpDiffusionParams& p) {
        const double drift = (a * p.mu + (1.0 - a) * p.r - 0.5 * a * a * p.sigma * p.sigma) * t;
        const double vol = a * p.sigma * std::sqrt(t);
        std::optional<DensitySampler> table;
        if (const auto* d = std::get_if<DensityJump>(&p.jump)) table.emplace(*d);
        return run_paths(n_paths, seed, workers, [&](auto& eng) {
          rng::NormalSampler normal;
          double log_v = drift + vol * normal(eng);
          // Jump epochs from exponential gaps; their count is Poisson(lambda_j t).
          double clock = -std::log(rng::uniform_open(eng)) / p.lambda_j;
          while (clock <= t) {
            const double y = std::visit(overloaded{
                                            [](const ConstantJump& c) -> double { return c.y; },
                                            [&](const ExponentialJump& e) -> double {
                                              return -std::log(rng::uniform_open(eng)) / e.rate;
                                            },
                                            [&](const DensityJump&) -> double { return (*table)(rng::uniform_open(eng)); },
                                        },
                                        p.jump);
            log_v += std::log(jump_factor(a, y));
            clock += -std::log(rng::uniform_open(eng)) / p.lambda_j;
          }
          return std::exp(th * log_v);
        });
      },
      [&](const VasicekParams& p) {
        // Exact joint transition of (r, stock Brownian increment) over each step.
        const double decay = std::exp(-p.kappa * h);
        const double rate_sd = p.delta * std::sqrt(-std::expm1(-2.0 * p.kappa * h) / (2.0 * p.kappa));
        const double cross = p.delta * p.rho * (-std::expm1(-p.kappa * h)) / p.kappa;
        const double load = cross / rate_sd;
        const double resid = std::sqrt(std::max(0.0, h - load * load));
        return run_paths(n_paths, seed, workers, [&](auto& eng) {
          rng::NormalSampler normal;
          double r = p.r0;
          double log_v = 0.0;
          for (std::int64_t i = 0; i < n_steps; ++i) {
            const double z1 = normal(eng);
            const double z2 = normal(eng);
            const double r_next = p.gamma_level + (r - p.gamma_level) * decay + rate_sd * z1;
            const double db = load * z1 + resid * z2;
            log_v += a * p.mu * h - 0.5 * a * a * p.sigma * p.sigma * h + a * p.sigma * db +
                     (1.0 - a) * 0.5 * (r + r_next) * h;
            r = r_next;
          }
          return std::exp(th * log_v);
        });
      },
  });

  check_finite(values, seed);
  const Moments m = summarise(values);
  if (m.all_equal) {
    throw Error(ErrorKind::DegenerateVariance, "all " + std::to_string(n_paths) +
                                                   " paths produced the same wealth; check the RNG seeding");
  }
  if (!(m.mean > 0.0)) {
    throw Error(ErrorKind::NonFinitePath, "mean of (V_t/V_0)^theta is not positive (seed " + std::to_string(seed) + ")");
  }
  est.lambda_hat = std::log(m.mean) / t;
  est.std_error = m.sd / (std::sqrt(static_cast<double>(n_paths)) * m.mean) / t;
  return est;
}

MeanEstimate mc_laplace_three_halves(const ThreeHalvesParams& p, double lambda_l, double t, std::int64_t n_paths,
                                     std::int64_t n_steps, std::uint64_t seed, unsigned workers) {
  if (!(lambda_l >= 0.0) || !std::isfinite(lambda_l)) {
    throw Error(ErrorKind::OutOfRange, "Laplace rate must be >= 0 (got " + fmt(lambda_l) + ")");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "horizon t must be > 0");
  if (n_paths < 2 || n_steps < 1) throw Error(ErrorKind::OutOfRange, "need at least 2 paths and 1 step");
  MeanEstimate est{1.0, 0.0, t, n_paths, n_steps, seed};
  if (lambda_l == 0.0) return est;

  const double h = t / static_cast<double>(n_steps);
  const double sqrt_h = std::sqrt(h);
  std::vector<double> values = run_paths(n_paths, seed, workers, [&](auto& eng) {
    rng::NormalSampler normal;
    double x = 1.0 / p.nu0;
    double integral = 0.0;
    double nu_prev = p.nu0;
    for (std::int64_t i = 0; i < n_steps; ++i) {
      const double x_pos = std::max(x, 0.0);
      const double dw = sqrt_h * normal(eng);
      x += (p.kappa + p.delta * p.delta - p.kappa * p.gamma_level * x_pos) * h - p.delta * std::sqrt(x_pos) * dw;
      const double nu_next = x > 0.0 ? 1.0 / x : std::numeric_limits<double>::quiet_NaN();
      integral += 0.5 * (nu_prev + nu_next) * h;
      nu_prev = nu_next;
    }
    return std::exp(-lambda_l * integral);
  });
  check_finite(values, seed);
  const Moments m = summarise(values);
  if (m.all_equal) {
    throw Error(ErrorKind::DegenerateVariance, "all paths produced the same integrated variance");
  }
  est.mean = m.mean;
  est.std_error = m.sd / std::sqrt(static_cast<double>(n_paths));
  return est;
}

}  // namespace ltg
