#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "ltg/params.hpp"

namespace ltg {

enum class CaseLabel { BondOnly, StockOnly, Interior, ClampedToOne, ClampedToZero, ConvexBoundary };

std::string_view to_string(CaseLabel label);
std::optional<CaseLabel> parse_case_label(std::string_view text);

struct AllocationDecision {
  double alpha_star = 0.0;
  CaseLabel case_label = CaseLabel::BondOnly;
  double lambda_at_star = 0.0;
  /// Unclamped interior maximiser, when the branch that fired defines one.
  std::optional<double> alpha_dagger;

  bool operator==(const AllocationDecision&) const = default;
};

AllocationDecision optimal_gbm(const GbmParams& p, Utility u);
AllocationDecision optimal_heston(const HestonParams& p, Utility u);
AllocationDecision optimal_three_halves(const ThreeHalvesParams& p, Utility u);
AllocationDecision optimal_jump(const JumpDiffusionParams& p, Utility u);
AllocationDecision optimal_vasicek(const VasicekParams& p, Utility u);

AllocationDecision optimal(const ModelSpec& model, Utility u);

/// Lambda'(alpha) for the jump-diffusion model.
double lambda_prime_jump(const JumpDiffusionParams& p, Utility u, double alpha);

// Numeric oracles. These never look at the closed-form case analyses.

inline constexpr int kConcavityProbePoints = 64;
inline constexpr int kDenseGridPoints = 1'000'000;
inline constexpr double kGoldenWidth = 1e-10;

/// Maximiser of f on [lo, hi] by golden-section search, assuming unimodality.
double golden_section_argmax(const std::function<double(double)>& f, double lo, double hi,
                             double width = kGoldenWidth);

/// Argmax of f on [0, 1]: golden section when second differences on a probe
/// grid certify concavity, otherwise a dense grid scan refined by golden
/// section inside the best bracket.
double numeric_argmax(const std::function<double(double)>& f);
double numeric_argmax(const ModelSpec& model, Utility u);

}  // namespace ltg
