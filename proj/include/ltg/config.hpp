#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ltg/params.hpp"

namespace ltg {

enum class OutputFormat { Csv, Json };

// Command options; unset fields fall back to per-command defaults.
struct RunOptions {
  std::optional<int> points;
  std::optional<double> t;
  std::optional<std::int64_t> paths;
  std::optional<std::int64_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> alpha;
  std::optional<double> lambda_l;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::optional<unsigned> workers;
};

struct RunConfig {
  ModelSpec model;
  Utility utility;
  RunOptions run;
};

/// Parses the flat `key = value` config format:
///
///   # comment
///   model.kind = heston          # gbm | heston | three_halves | jump | vasicek
///   model.mu = 0.08
///   utility.theta = 0.5          # or utility.gamma_rra, never both
///   run.points = 101
///
/// Jump models take `model.jump = constant` with `model.jump_y`, or
/// `model.jump = exponential` with `model.jump_rate`. Unknown, duplicate,
/// missing and malformed keys are all reported together in one Error.
RunConfig parse_config(std::string_view text);

}  // namespace ltg
