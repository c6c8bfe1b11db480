#include <doctest.h>

#include <cmath>

#include "ltg/allocate.hpp"
#include "ltg/growth.hpp"
#include "support.hpp"

using namespace ltg;

namespace {

const Utility half = Utility::from_theta(0.5);

void check_decision_invariants(const AllocationDecision& d, const ModelSpec& m, Utility u) {
  CHECK(d.alpha_star >= 0.0);
  CHECK(d.alpha_star <= 1.0);
  CHECK(d.lambda_at_star == lambda(m, u, d.alpha_star));
  if (d.case_label == CaseLabel::Interior) {
    REQUIRE(d.alpha_dagger.has_value());
    CHECK(*d.alpha_dagger == d.alpha_star);
    CHECK(d.alpha_star > 0.0);
    CHECK(d.alpha_star < 1.0);
  }
  const double h = 1e-7;
  if (d.case_label == CaseLabel::BondOnly) CHECK((lambda(m, u, h) - lambda(m, u, 0.0)) / h <= 1e-10 + 1e-6);
  if (d.case_label == CaseLabel::StockOnly) CHECK((lambda(m, u, 1.0) - lambda(m, u, 1.0 - h)) / h >= -1e-10 - 1e-6);
}

}  // namespace

TEST_CASE("case labels round trip") {
  for (auto c : {CaseLabel::BondOnly, CaseLabel::StockOnly, CaseLabel::Interior, CaseLabel::ClampedToOne,
                 CaseLabel::ClampedToZero, CaseLabel::ConvexBoundary}) {
    CHECK(parse_case_label(to_string(c)) == c);
  }
  CHECK_FALSE(parse_case_label("Sideways").has_value());
}

TEST_CASE("gbm allocation") {
  const auto bond = optimal_gbm({0.03, 0.2, 0.03}, half);
  CHECK(bond.alpha_star == 0.0);
  CHECK(bond.case_label == CaseLabel::BondOnly);
  const auto mid = optimal_gbm({0.05, 0.3, 0.03}, half);
  CHECK(mid.case_label == CaseLabel::Interior);
  CHECK(mid.alpha_star == doctest::Approx(0.02 / (0.5 * 0.09)).epsilon(1e-14));
  const auto stock = optimal_gbm(test::reference_gbm(), half);
  CHECK(stock.alpha_star == 1.0);
  CHECK(stock.case_label == CaseLabel::StockOnly);
  CHECK(std::abs(stock.lambda_at_star - 0.035) <= 1e-15);
}

TEST_CASE("heston allocation") {
  HestonParams p = test::reference_heston();
  p.rho = 0.0;
  p.mu = p.r;
  const auto zero = optimal_heston(p, half);
  CHECK(zero.alpha_star == 0.0);

  // Excess return placed on the first branch boundary c4 = -c2 / sqrt(c3).
  p = test::reference_heston();
  const auto c = heston_coefficients(p, half);
  const double th = 0.5;
  p.mu = p.r + (-c.c2 / std::sqrt(c.c3) + th * p.rho * p.kappa * p.gamma_level / p.delta) / th;
  const auto edge = optimal_heston(p, half);
  CHECK(edge.alpha_star <= 1e-12);

  const auto ref = optimal_heston(test::reference_heston(), half);
  const ModelSpec m = ModelSpec::validate(test::reference_heston());
  CHECK(std::abs(ref.alpha_star - numeric_argmax(m, half)) <= 1e-6);
}

TEST_CASE("three-halves allocation") {
  ThreeHalvesParams p = test::reference_three_halves();
  p.mu = p.r;
  CHECK(optimal_three_halves(p, half).case_label == CaseLabel::BondOnly);
  // theta (mu - r) = (kappa gamma / delta) sqrt(theta - theta^2), all terms exact in binary.
  const ThreeHalvesParams edge{0.25, 2.0, 0.0625, 0.5, 0.0, 0.04};
  const auto d = optimal_three_halves(edge, half);
  CHECK(d.alpha_star == 1.0);
  CHECK(d.case_label == CaseLabel::StockOnly);

  const ThreeHalvesParams q{0.05, 2.0, 0.04, 0.5, 0.03, 0.04};
  const auto inner = optimal_three_halves(q, half);
  CHECK(std::abs(inner.alpha_star - numeric_argmax(ModelSpec::validate(q), half)) <= 1e-6);
}

TEST_CASE("jump allocation") {
  JumpDiffusionParams p{0.03, 0.2, 1.0, ConstantJump{1.0}, 0.03};
  const auto zero = optimal_jump(p, half);
  CHECK(zero.alpha_star == 0.0);
  CHECK(zero.case_label == CaseLabel::BondOnly);

  test::Draws draws(31);
  for (int i = 0; i < 100; ++i) {
    const Utility u = draws.utility();
    auto j = draws.jump_constant();
    j.jump = ConstantJump{1.0};
    const auto via_jump = optimal_jump(j, u);
    const auto via_gbm = optimal_gbm({j.mu, j.sigma, j.r}, u);
    CHECK(via_jump.case_label == via_gbm.case_label);
    CHECK(std::abs(via_jump.alpha_star - via_gbm.alpha_star) <= 1e-12);
  }

  const auto ref = optimal_jump(test::reference_jump(), half);
  CHECK(std::abs(ref.alpha_star - numeric_argmax(ModelSpec::validate(test::reference_jump()), half)) <= 1e-6);
}

TEST_CASE("jump interior branch brackets the root") {
  test::Draws draws(33);
  int interior = 0;
  for (int i = 0; i < 200; ++i) {
    const Utility u = draws.utility();
    const auto j = draws.jump();
    const auto d = optimal_jump(j, u);
    if (d.case_label != CaseLabel::Interior) continue;
    ++interior;
    CHECK(lambda_prime_jump(j, u, 0.0) > 0.0);
    CHECK(lambda_prime_jump(j, u, 1.0) < 0.0);
    CHECK(std::abs(lambda_prime_jump(j, u, d.alpha_star)) <= 1e-10);
  }
  CHECK(interior > 10);
}

TEST_CASE("vasicek allocation") {
  // Degenerate rate volatility behaves like gbm with r = gamma.
  VasicekParams v = test::reference_vasicek();
  v.rho = 0.0;
  v.delta = 1e-6;
  for (double mu : {0.02, 0.04, 0.08}) {
    v.mu = mu;
    const auto d = optimal_vasicek(v, half);
    const auto g = optimal_gbm({v.mu, v.sigma, v.gamma_level}, half);
    CHECK(std::abs(d.alpha_star - g.alpha_star) <= 1e-6);
  }

  // Convex case: quadratic coefficient >= 0 when rate volatility is large and rho positive.
  VasicekParams cv{0.1, 0.1, 0.5, 0.03, 0.2, 0.9, 0.03};
  REQUIRE(vasicek_quadratic(cv, half).a2 >= 0.0);
  const auto d = optimal_vasicek(cv, half);
  CHECK(d.case_label == CaseLabel::ConvexBoundary);
  const double l0 = lambda_vasicek(cv, half, 0.0);
  const double l1 = lambda_vasicek(cv, half, 1.0);
  CHECK(d.alpha_star == (l0 >= l1 ? 0.0 : 1.0));
  CHECK(numeric_argmax(ModelSpec::validate(cv), half) == d.alpha_star);

  // Tie in the convex case goes to the bond: solve for mu making the boundaries equal.
  const double th = 0.5;
  cv.mu = cv.gamma_level + cv.delta * cv.delta * th / (2.0 * cv.kappa * cv.kappa) - 0.5 * (th - 1.0) * cv.sigma * cv.sigma;
  const auto tie = optimal_vasicek(cv, half);
  CHECK(tie.case_label == CaseLabel::ConvexBoundary);
  CHECK(std::abs(lambda_vasicek(cv, half, 0.0) - lambda_vasicek(cv, half, 1.0)) <= 1e-15);
  if (lambda_vasicek(cv, half, 0.0) >= lambda_vasicek(cv, half, 1.0)) CHECK(tie.alpha_star == 0.0);
}

TEST_CASE("numeric argmax") {
  const ModelSpec flat = ModelSpec::validate(GbmParams{0.03, 0.2, 0.03});
  CHECK(numeric_argmax(flat, half) <= 1e-9);
  const ModelSpec mid = ModelSpec::validate(GbmParams{0.05, 0.3, 0.03});
  CHECK(std::abs(numeric_argmax(mid, half) - 0.4444444444444444) <= 1e-6);
  CHECK(std::abs(golden_section_argmax([](double a) { return -(a - 0.3) * (a - 0.3); }, 0.0, 1.0, 1e-10) - 0.3) <=
        1e-9);
  // Non-concave function: dense grid finds the global maximum.
  auto bumpy = [](double a) { return std::cos(20.0 * a) + 0.5 * a; };
  const double x = numeric_argmax(bumpy);
  for (int i = 0; i <= 1000; ++i) CHECK(bumpy(x) >= bumpy(i / 1000.0) - 1e-12);
}

TEST_CASE("closed form agrees with numeric argmax on random draws") {
  test::Draws draws(35);
  for (int i = 0; i < 100; ++i) {
    const Utility u = draws.utility();
    const ModelSpec models[] = {ModelSpec::validate(draws.gbm()), ModelSpec::validate(draws.heston()),
                                ModelSpec::validate(draws.three_halves()), ModelSpec::validate(draws.jump()),
                                ModelSpec::validate(draws.vasicek())};
    for (const auto& m : models) {
      const auto d = optimal(m, u);
      check_decision_invariants(d, m, u);
      const double num = numeric_argmax(m, u);
      CHECK(std::abs(d.alpha_star - num) <= 1e-6);
      CHECK(d.lambda_at_star >= lambda(m, u, num) - 1e-10);
    }
  }
}

TEST_CASE("allocation is monotone in the drift") {
  test::Draws draws(37);
  for (int i = 0; i < 40; ++i) {
    const Utility u = draws.utility();
    auto g = draws.gbm();
    auto h = draws.heston();
    auto t = draws.three_halves();
    auto j = draws.jump();
    double prev[4] = {-1.0, -1.0, -1.0, -1.0};
    for (double mu = 0.0; mu <= 0.3; mu += 0.01) {
      g.mu = h.mu = t.mu = j.mu = mu;
      const double now[4] = {optimal_gbm(g, u).alpha_star, optimal_heston(h, u).alpha_star,
                             optimal_three_halves(t, u).alpha_star, optimal_jump(j, u).alpha_star};
      for (int k = 0; k < 4; ++k) {
        CHECK(now[k] >= prev[k] - 1e-12);
        prev[k] = now[k];
      }
    }
  }
}
