#include "ltg/params.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ltg/error.hpp"
#include "ltg/quadrature.hpp"

namespace ltg {
namespace {

constexpr double kDensityNormTol = 1e-8;
constexpr double kDensityQuadTol = 1e-11;
constexpr int kDensitySignSamples = 2000;

class Checker {
 public:
  explicit Checker(std::string prefix) : prefix_(std::move(prefix)) {}

  void finite(const char* name, double v) {
    if (!std::isfinite(v)) add(ErrorKind::OutOfRange, name, "must be finite");
  }
  void positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) add(ErrorKind::OutOfRange, name, "must be > 0 (got " + num(v) + ")");
  }
  void correlation(const char* name, double v) {
    if (!(v >= -1.0 && v <= 1.0)) add(ErrorKind::OutOfRange, name, "must lie in [-1, 1] (got " + num(v) + ")");
  }
  void add(ErrorKind kind, const std::string& name, const std::string& what) {
    violations_.push_back({kind, prefix_ + name + " " + what});
  }
  void merge(std::vector<Violation> more) {
    for (auto& v : more) violations_.push_back(std::move(v));
  }
  void raise_if_any() const {
    if (!violations_.empty()) throw Error(violations_);
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::string prefix_;
  std::vector<Violation> violations_;
};

std::vector<Violation> collect(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.violations();
  }
  return {};
}

DensityJump validate_density(const DensityJump& d) {
  Checker c("jump density ");
  if (!d.pdf || !*d.pdf) {
    c.add(ErrorKind::BadDensity, "pdf", "is empty");
    c.raise_if_any();
  }
  if (!(d.support_bound > 0.0) || !std::isfinite(d.support_bound)) {
    c.add(ErrorKind::BadDensity, "support_bound", "must be finite and > 0");
    c.raise_if_any();
  }
  const auto& pdf = *d.pdf;
  const double bound = d.support_bound;
  for (int i = 0; i <= kDensitySignSamples; ++i) {
    const double y = i == 0 ? bound * 1e-9 : bound * i / kDensitySignSamples;
    const double v = pdf(y);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      c.add(ErrorKind::BadDensity, "pdf", "is negative or non-finite at y=" + Checker::num(y));
      c.raise_if_any();
    }
  }

  DensityJump out = d;
  try {
    const double mass = quad::integrate(pdf, 0.0, bound, kDensityQuadTol).value;
    if (!(std::abs(mass - 1.0) <= kDensityNormTol)) {
      c.add(ErrorKind::BadDensity, "pdf", "integrates to " + Checker::num(mass) + " on (0, support_bound]");
    }
    out.mean = quad::integrate([&](double y) { return y * pdf(y); }, 0.0, bound, kDensityQuadTol).value;
    if (!std::isfinite(out.mean)) c.add(ErrorKind::BadDensity, "mean", "is not finite");
  } catch (const Error& e) {
    c.add(ErrorKind::BadDensity, "pdf", std::string("quadrature failed: ") + e.what());
  }
  c.raise_if_any();
  return out;
}

}  // namespace

Utility Utility::from_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "utility theta must lie strictly inside (0, 1) (got " + Checker::num(theta) + ")");
  }
  return Utility(theta);
}

Utility Utility::from_gamma_rra(double gamma_rra) {
  if (!(gamma_rra > 0.0 && gamma_rra < 1.0)) {
    throw Error(ErrorKind::OutOfRange,
                "relative risk aversion must lie strictly inside (0, 1) (got " + Checker::num(gamma_rra) + ")");
  }
  return Utility(1.0 - gamma_rra);
}

DensityJump DensityJump::make(std::function<double(double)> pdf, double support_bound) {
  DensityJump d;
  d.pdf = std::make_shared<const std::function<double(double)>>(std::move(pdf));
  d.support_bound = support_bound;
  return d;
}

GbmParams validate(const GbmParams& p) {
  Checker c("gbm ");
  c.finite("mu", p.mu);
  c.positive("sigma", p.sigma);
  c.finite("r", p.r);
  c.raise_if_any();
  return p;
}

HestonParams validate(const HestonParams& p) {
  Checker c("heston ");
  c.finite("mu", p.mu);
  c.positive("kappa", p.kappa);
  c.positive("gamma_level", p.gamma_level);
  c.positive("delta", p.delta);
  c.correlation("rho", p.rho);
  c.finite("r", p.r);
  c.positive("nu0", p.nu0);
  if (!(2.0 * p.kappa * p.gamma_level > p.delta * p.delta)) {
    c.add(ErrorKind::FellerViolation, "2*kappa*gamma_level",
          "= " + Checker::num(2.0 * p.kappa * p.gamma_level) + " must exceed delta^2 = " +
              Checker::num(p.delta * p.delta));
  }
  c.raise_if_any();
  return p;
}

ThreeHalvesParams validate(const ThreeHalvesParams& p) {
  Checker c("three_halves ");
  c.finite("mu", p.mu);
  c.positive("kappa", p.kappa);
  c.positive("gamma_level", p.gamma_level);
  c.positive("delta", p.delta);
  c.finite("r", p.r);
  c.positive("nu0", p.nu0);
  c.raise_if_any();
  return p;
}

JumpLaw validate(const JumpLaw& law) {
  return std::visit(
      [](const auto& l) -> JumpLaw {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ConstantJump>) {
          Checker c("jump ");
          c.positive("y", l.y);
          c.raise_if_any();
          return l;
        } else if constexpr (std::is_same_v<T, ExponentialJump>) {
          Checker c("jump ");
          c.positive("rate", l.rate);
          c.raise_if_any();
          return l;
        } else {
          return validate_density(l);
        }
      },
      law);
}

JumpDiffusionParams validate(const JumpDiffusionParams& p) {
  Checker c("jump_diffusion ");
  c.finite("mu", p.mu);
  c.positive("sigma", p.sigma);
  c.positive("lambda_j", p.lambda_j);
  c.finite("r", p.r);
  JumpDiffusionParams out = p;
  c.merge(collect([&] { out.jump = validate(p.jump); }));
  c.raise_if_any();
  return out;
}

VasicekParams validate(const VasicekParams& p) {
  Checker c("vasicek ");
  c.finite("mu", p.mu);
  c.positive("sigma", p.sigma);
  c.positive("kappa", p.kappa);
  c.finite("gamma_level", p.gamma_level);
  c.positive("delta", p.delta);
  c.correlation("rho", p.rho);
  c.finite("r0", p.r0);
  c.raise_if_any();
  return p;
}

ModelSpec ModelSpec::validate(const RawModel& raw) {
  return ModelSpec(std::visit([](const auto& p) -> RawModel { return ltg::validate(p); }, raw));
}

std::string_view ModelSpec::kind_name() const noexcept {
  switch (params_.index()) {
    case 0: return "gbm";
    case 1: return "heston";
    case 2: return "three_halves";
    case 3: return "jump";
    default: return "vasicek";
  }
}

double jump_mean(const JumpLaw& law) {
  return std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ConstantJump>) {
          return l.y;
        } else if constexpr (std::is_same_v<T, ExponentialJump>) {
          return 1.0 / l.rate;
        } else {
          return l.mean;
        }
      },
      law);
}

}  // namespace ltg
