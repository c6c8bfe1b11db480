#pragma once

#include <functional>

namespace ltg::quad {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

inline constexpr int kDefaultPanelBudget = 10'000;

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. The panel with the
/// largest |K15 - G7| is bisected until the summed estimate is <= abs_tol.
/// Throws Error(QuadratureFailure) when the budget is exhausted or the
/// integrand returns a non-finite value.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_panels = kDefaultPanelBudget);

}  // namespace ltg::quad
