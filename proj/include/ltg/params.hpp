#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <variant>

namespace ltg {

/// CRRA exponent theta = 1 - gamma, strictly inside (0, 1).
class Utility {
 public:
  static Utility from_theta(double theta);
  static Utility from_gamma_rra(double gamma_rra);

  double theta() const noexcept { return theta_; }
  double gamma_rra() const noexcept { return 1.0 - theta_; }

  bool operator==(const Utility&) const = default;

 private:
  explicit Utility(double theta) : theta_(theta) {}
  double theta_;
};

inline Utility theta_from_gamma(double gamma_rra) { return Utility::from_gamma_rra(gamma_rra); }

struct GbmParams {
  double mu = 0.0;
  double sigma = 0.0;
  double r = 0.0;
  bool operator==(const GbmParams&) const = default;
};

// gamma_level is the long-run level of the variance / rate process. Risk
// aversion lives only in Utility.
struct HestonParams {
  double mu = 0.0;
  double kappa = 0.0;
  double gamma_level = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double r = 0.0;
  double nu0 = 0.0;
  bool operator==(const HestonParams&) const = default;
};

/// Variance follows d nu = kappa nu (gamma - nu) dt + delta nu^{3/2} dW,
/// independent of the stock driver.
struct ThreeHalvesParams {
  double mu = 0.0;
  double kappa = 0.0;
  double gamma_level = 0.0;
  double delta = 0.0;
  double r = 0.0;
  double nu0 = 0.0;
  bool operator==(const ThreeHalvesParams&) const = default;
};

struct ConstantJump {
  double y = 0.0;
  bool operator==(const ConstantJump&) const = default;
};

struct ExponentialJump {
  double rate = 0.0;
  bool operator==(const ExponentialJump&) const = default;
};

/// Jump-size density on (0, support_bound]; mass beyond the bound is ignored.
/// `mean` is filled in by validation.
struct DensityJump {
  std::shared_ptr<const std::function<double(double)>> pdf;
  double support_bound = 0.0;
  double mean = 0.0;

  static DensityJump make(std::function<double(double)> pdf, double support_bound);
  double operator()(double y) const { return (*pdf)(y); }
  bool operator==(const DensityJump&) const = default;
};

using JumpLaw = std::variant<ConstantJump, ExponentialJump, DensityJump>;

struct JumpDiffusionParams {
  double mu = 0.0;
  double sigma = 0.0;
  double lambda_j = 0.0;
  JumpLaw jump = ConstantJump{1.0};
  double r = 0.0;
  bool operator==(const JumpDiffusionParams&) const = default;
};

/// Black-Scholes stock with a Vasicek short rate dr = kappa (gamma - r) dt + delta dW.
struct VasicekParams {
  double mu = 0.0;
  double sigma = 0.0;
  double kappa = 0.0;
  double gamma_level = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double r0 = 0.0;
  bool operator==(const VasicekParams&) const = default;
};

using RawModel = std::variant<GbmParams, HestonParams, ThreeHalvesParams, JumpDiffusionParams, VasicekParams>;

// Per-record validation. Each throws Error listing every violated invariant
// and returns the (possibly completed) record otherwise.
GbmParams validate(const GbmParams& p);
HestonParams validate(const HestonParams& p);
ThreeHalvesParams validate(const ThreeHalvesParams& p);
JumpDiffusionParams validate(const JumpDiffusionParams& p);
VasicekParams validate(const VasicekParams& p);
JumpLaw validate(const JumpLaw& law);

/// A model whose parameters passed validation. Only obtainable from validate().
class ModelSpec {
 public:
  static ModelSpec validate(const RawModel& raw);

  const RawModel& params() const noexcept { return params_; }
  std::string_view kind_name() const noexcept;

  // True when the bond leg pays a constant short rate (all but Vasicek).
  bool has_constant_rate() const noexcept { return !std::holds_alternative<VasicekParams>(params_); }

  template <class Visitor>
  decltype(auto) visit(Visitor&& vis) const {
    return std::visit(std::forward<Visitor>(vis), params_);
  }

  bool operator==(const ModelSpec&) const = default;

 private:
  explicit ModelSpec(RawModel p) : params_(std::move(p)) {}
  RawModel params_;
};

inline ModelSpec validate(const RawModel& raw) { return ModelSpec::validate(raw); }

/// Mean of the jump law (closed form for constant/exponential).
double jump_mean(const JumpLaw& law);

}  // namespace ltg
