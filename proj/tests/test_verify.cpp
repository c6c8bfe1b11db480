#include <doctest.h>

#include <cmath>
#include <random>

#include "ltg/error.hpp"
#include "ltg/growth.hpp"
#include "ltg/verify.hpp"
#include "support.hpp"

using namespace ltg;

namespace {

const Utility half = Utility::from_theta(0.5);

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalInvariantViolation;
}

// Plain Euler on the 3/2 variance itself, with a floor that is never hit at these parameters.
std::pair<double, double> direct_three_halves_laplace(const ThreeHalvesParams& p, double lam, double t, int n,
                                                      int steps) {
  std::mt19937_64 eng(99);
  std::normal_distribution<double> normal;
  const double h = t / steps;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double nu = p.nu0, integral = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double next = nu + p.kappa * nu * (p.gamma_level - nu) * h + p.delta * std::pow(nu, 1.5) * std::sqrt(h) * normal(eng);
      const double clipped = std::max(next, 1e-12);
      integral += 0.5 * (nu + clipped) * h;
      nu = clipped;
    }
    const double x = std::exp(-lam * integral);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / (n - 1))};
}

}  // namespace

TEST_CASE("heston riccati") {
  HestonParams p = test::reference_heston();
  const auto zero = integrate_heston_riccati(p, half, 0.0, 10.0, 1e-2);
  for (std::size_t i = 0; i < zero.times.size(); ++i) {
    CHECK(zero.b_values[i] == 0.0);
    CHECK(zero.a_values[i] == 0.0);
  }
  CHECK(zero.b_limit_closed_form == 0.0);

  const auto t100 = integrate_heston_riccati(p, half, 0.5, 100.0, 1e-3);
  CHECK(t100.times.back() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::abs(t100.b_values.back() - t100.b_limit_closed_form) <= 1e-8);
  const auto t500 = integrate_heston_riccati(p, half, 0.5, 500.0, 1e-2);
  CHECK(std::abs(t500.a_values.back() / 500.0 - t500.a_slope_closed_form) <= 1e-3);
  CHECK(std::abs(heston_lambda_from_trace(p, half, 0.5, t500) - lambda_heston(p, half, 0.5)) <= 1e-3);

  // Uncorrelated variance.
  p.rho = 0.0;
  const auto r0 = integrate_heston_riccati(p, half, 0.5, 500.0, 1e-2);
  CHECK(std::abs(heston_lambda_from_trace(p, half, 0.5, r0) - lambda_heston(p, half, 0.5)) <= 1e-3);
}

TEST_CASE("riccati sign structure") {
  test::Draws draws(41);
  for (int i = 0; i < 30; ++i) {
    const auto p = draws.heston();
    const Utility u = draws.utility();
    const double a = draws.uniform(0.05, 1.0);
    const auto tr = integrate_heston_riccati(p, u, a, 20.0, 1e-2);
    const bool below = tr.b_values.front() < tr.b_limit_closed_form;
    for (std::size_t k = 1; k < tr.b_values.size(); ++k) {
      const double step = tr.b_values[k] - tr.b_values[k - 1];
      if (below) {
        CHECK(step >= 0.0);
        CHECK(tr.b_values[k] <= tr.b_limit_closed_form + 1e-12);
      } else {
        CHECK(step <= 0.0);
        CHECK(tr.b_values[k] >= tr.b_limit_closed_form - 1e-12);
      }
    }
  }
}

TEST_CASE("rk4 converges at fourth order") {
  const HestonParams p = test::reference_heston();
  double b[4];
  for (int k = 0; k < 4; ++k) b[k] = integrate_heston_riccati(p, half, 0.9, 2.0, 0.2 / (1 << k)).b_values.back();
  const double d1 = std::abs(b[0] - b[1]);
  const double d2 = std::abs(b[1] - b[2]);
  const double d3 = std::abs(b[2] - b[3]);
  CHECK(d2 <= d1);
  CHECK(d1 / d2 == doctest::Approx(16.0).epsilon(0.3));
  CHECK(d2 / d3 == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("ode argument checks") {
  const HestonParams p = test::reference_heston();
  CHECK(kind_of([&] { integrate_heston_riccati(p, half, 0.5, 1.0, 0.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { integrate_heston_riccati(p, half, 0.5, 1.0, 2.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { integrate_heston_riccati(p, half, 0.5, 100.0, 50.0); }) == ErrorKind::StepSizeTooLarge);
  CHECK(kind_of([&] { integrate_vasicek_ode(test::reference_vasicek(), half, 0.5, 100.0, 50.0); }) ==
        ErrorKind::StepSizeTooLarge);
}

TEST_CASE("vasicek ode") {
  VasicekParams p = test::reference_vasicek();
  p.rho = 0.0;
  const auto zero = integrate_vasicek_ode(p, half, 1.0, 10.0, 1e-2);
  for (std::size_t i = 0; i < zero.times.size(); ++i) {
    CHECK(zero.b_values[i] == 0.0);
    CHECK(zero.a_values[i] == 0.0);
  }
  p = test::reference_vasicek();
  const double alpha = 0.5;
  const auto tr = integrate_vasicek_ode(p, half, alpha, 200.0, 1e-2);
  const double b0 = 0.5 * alpha * p.sigma * p.rho / p.delta;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double exact = tr.b_limit_closed_form + (b0 - tr.b_limit_closed_form) * std::exp(-p.kappa * tr.times[i]);
    CHECK(std::abs(tr.b_values[i] - exact) <= 1e-10);
  }
  CHECK(std::abs(tr.a_values.back() / 200.0 - tr.a_slope_closed_form) <= 1e-3);
  CHECK(std::abs(vasicek_lambda_from_trace(p, half, alpha, tr) - lambda_vasicek(p, half, alpha)) <= 1e-3);
}

TEST_CASE("monte carlo growth estimate") {
  const ModelSpec g = ModelSpec::validate(test::reference_gbm());
  const auto est = mc_growth_estimate(g, half, 1.0, 20.0, 200'000, 1, kDefaultSeed);
  CHECK(std::abs(est.lambda_hat - 0.035) <= 3.0 * est.std_error);

  for (const RawModel raw : {RawModel{test::reference_gbm()}, RawModel{test::reference_heston()},
                             RawModel{test::reference_three_halves()}, RawModel{test::reference_jump()}}) {
    const ModelSpec m = ModelSpec::validate(raw);
    const auto flat = mc_growth_estimate(m, half, 0.0, 5.0, 100, 100, 1);
    CHECK(flat.lambda_hat == 0.5 * 0.03);
    CHECK(flat.std_error == 0.0);
  }

  const ModelSpec h = ModelSpec::validate(test::reference_heston());
  const auto eh = mc_growth_estimate(h, half, 0.5, 10.0, 20'000, 1000, 3);
  CHECK(std::abs(eh.lambda_hat - lambda(h, half, 0.5)) <= 3.0 * eh.std_error + 2e-3);

  const ModelSpec v = ModelSpec::validate(test::reference_vasicek());
  const auto ev = mc_growth_estimate(v, half, 0.5, 10.0, 20'000, 1000, 4);
  CHECK(std::abs(ev.lambda_hat - lambda(v, half, 0.5)) <= 3.0 * ev.std_error + 2e-3);

  const ModelSpec j = ModelSpec::validate(test::reference_jump());
  const auto ej = mc_growth_estimate(j, half, 0.5, 20.0, 50'000, 1, 5);
  CHECK(std::abs(ej.lambda_hat - lambda(j, half, 0.5)) <= 3.0 * ej.std_error + 1e-3);
}

TEST_CASE("monte carlo with a density jump law") {
  JumpDiffusionParams p = test::reference_jump();
  p.jump = DensityJump::make([](double y) { return 2.0 * std::exp(-2.0 * y); }, 40.0);
  const ModelSpec m = ModelSpec::validate(p);
  const auto e = mc_growth_estimate(m, half, 0.5, 20.0, 50'000, 1, 6);
  CHECK(std::abs(e.lambda_hat - lambda(m, half, 0.5)) <= 3.0 * e.std_error + 1e-3);
}

TEST_CASE("monte carlo argument checks") {
  const ModelSpec h = ModelSpec::validate(test::reference_heston());
  CHECK(kind_of([&] { mc_growth_estimate(h, half, 0.5, 10.0, 1000, 50, 1); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { mc_growth_estimate(h, half, 0.5, 0.0, 1000, 50, 1); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { mc_growth_estimate(h, half, 0.5, 1.0, 1, 50, 1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("monte carlo is deterministic across worker counts") {
  const RawModel raws[] = {test::reference_gbm(), test::reference_heston(), test::reference_three_halves(),
                           test::reference_jump(), test::reference_vasicek()};
  for (const auto& raw : raws) {
    const ModelSpec m = ModelSpec::validate(raw);
    const auto one = mc_growth_estimate(m, half, 0.5, 2.0, 3001, 40, 77, 1);
    for (unsigned w : {2u, 3u, 8u}) {
      const auto many = mc_growth_estimate(m, half, 0.5, 2.0, 3001, 40, 77, w);
      CHECK(many.lambda_hat == one.lambda_hat);
      CHECK(many.std_error == one.std_error);
    }
    const auto other = mc_growth_estimate(m, half, 0.5, 2.0, 3001, 40, 78, 1);
    CHECK(other.lambda_hat != one.lambda_hat);
  }
  const auto p = test::reference_three_halves();
  const auto a = mc_laplace_three_halves(p, 0.125, 1.0, 2001, 50, 5, 1);
  const auto b = mc_laplace_three_halves(p, 0.125, 1.0, 2001, 50, 5, 8);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("three-halves laplace monte carlo") {
  const auto p = test::reference_three_halves();
  const auto zero = mc_laplace_three_halves(p, 0.0, 1.0, 100, 10, 1);
  CHECK(zero.mean == 1.0);
  CHECK(zero.std_error == 0.0);

  const auto tiny = mc_laplace_three_halves(p, 0.125, 1e-4, 1000, 10, 1);
  CHECK(tiny.mean <= 1.0);
  CHECK(tiny.mean >= 1.0 - 2.0 * 0.125 * p.nu0 * 1e-4);

  const double lam = 0.125;
  const auto mc = mc_laplace_three_halves(p, lam, 1.0, 20'000, 200, 2);
  const double closed = laplace_three_halves_finite_t(p, lam, 1.0);
  CHECK(std::abs(mc.mean - closed) <= 3.0 * mc.std_error);

  // Reciprocal-CIR scheme against plain Euler on the variance at a fine step.
  const auto [direct_mean, direct_se] = direct_three_halves_laplace(p, 2.0, 1.0, 20'000, 400);
  const auto recip = mc_laplace_three_halves(p, 2.0, 1.0, 20'000, 400, 3);
  CHECK(std::abs(recip.mean - direct_mean) <= 3.0 * std::hypot(recip.std_error, direct_se) + 1e-4);
  CHECK(std::abs(laplace_three_halves_finite_t(p, 2.0, 1.0) - direct_mean) <= 3.0 * direct_se + 1e-4);
}
