#include "ltg/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "ltg/error.hpp"

namespace ltg::quad {
namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the Gauss 7-point nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw Error(ErrorKind::QuadratureFailure,
                "non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_panels) {
  if (a == b) return {};
  if (!(a < b) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "integrate needs a < b and abs_tol > 0");
  }
  std::priority_queue<Panel> heap;
  Panel first = evaluate(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int panels = 1;

  while (error > abs_tol) {
    if (panels >= max_panels) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tolerance " + std::to_string(abs_tol) + " not met within " +
                      std::to_string(max_panels) + " panels (estimate " + std::to_string(error) + ")");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw Error(ErrorKind::QuadratureFailure, "panel width underflow near " + std::to_string(mid));
    }
    Panel left = evaluate(f, worst.a, mid);
    Panel right = evaluate(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum from scratch so the running updates do not accumulate drift.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, panels};
}

}  // namespace ltg::quad
