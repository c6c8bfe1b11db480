#include "ltg/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltg/allocate.hpp"
#include "ltg/config.hpp"
#include "ltg/error.hpp"
#include "ltg/growth.hpp"
#include "ltg/verify.hpp"

namespace ltg {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kDefaultPoints = 101;
constexpr double kDefaultT = 10.0;
constexpr std::int64_t kDefaultPaths = 100'000;
constexpr double kDefaultAlpha = 0.5;
constexpr double kDefaultOdeTEnd = 500.0;
constexpr double kDefaultOdeDt = 1e-2;
constexpr double kOdeBGapTol = 1e-8;
constexpr double kOdeSlopeGapTol = 1e-3;

std::string format_real(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Json real_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double mc_allowance(const ModelSpec& model) {
  return model.visit([](const auto& p) -> double {
    using P = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<P, GbmParams>) return 0.0;
    else if constexpr (std::is_same_v<P, JumpDiffusionParams>) return 1e-3;
    else return 2e-3;
  });
}

// Command-line values; each one overrides the matching run.* config key.
struct Flags {
  std::string config;
  std::optional<int> points;
  std::optional<double> t;
  std::optional<std::int64_t> paths;
  std::optional<std::int64_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> alpha;
  std::optional<double> lambda_l;
  std::optional<unsigned> workers;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "model config file")->required();
  cmd.add_option("--points", f.points, "alpha grid size (default 101)");
  cmd.add_option("--t", f.t, "Monte Carlo horizon (default 10)");
  cmd.add_option("--paths", f.paths, "Monte Carlo paths (default 100000)");
  cmd.add_option("--steps", f.steps, "time steps per path (default 100 t)");
  cmd.add_option("--seed", f.seed, "master seed (default 0x5EED)");
  cmd.add_option("--t-end", f.t_end, "ODE horizon (default 500)");
  cmd.add_option("--dt", f.dt, "ODE step (default 0.01)");
  cmd.add_option("--out", f.out, "output path");
  cmd.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--alpha", f.alpha, "stock fraction for verification runs (default 0.5)");
  cmd.add_option("--lambda-l", f.lambda_l, "Laplace argument for transform-3-2");
  cmd.add_option("--workers", f.workers, "worker threads (default: hardware)");
}

template <class T>
void overlay(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

RunOptions merge(RunOptions run, const Flags& f) {
  overlay(run.points, f.points);
  overlay(run.t, f.t);
  overlay(run.paths, f.paths);
  overlay(run.steps, f.steps);
  overlay(run.seed, f.seed);
  overlay(run.t_end, f.t_end);
  overlay(run.dt, f.dt);
  overlay(run.out, f.out);
  overlay(run.alpha, f.alpha);
  overlay(run.lambda_l, f.lambda_l);
  overlay(run.workers, f.workers);
  if (f.format) run.format = *f.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  return run;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read config file " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open output file " + path);
  f << text;
  f.flush();
  if (!f) throw Error(ErrorKind::Io, "cannot write output file " + path);
}

// Writes to --out when given, otherwise to `out`.
void emit(const RunOptions& run, std::ostream& out, const std::string& text) {
  if (run.out) {
    write_file(*run.out, text);
  } else {
    out << text;
  }
}

double checked_alpha(const RunOptions& run) {
  const double a = run.alpha.value_or(kDefaultAlpha);
  if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::OutOfRange, "alpha must lie in [0, 1], got " + format_real(a));
  return a;
}

std::int64_t default_steps(double t) { return static_cast<std::int64_t>(std::ceil(100.0 * t)); }

int cmd_curve(const RunConfig& cfg, const RunOptions& run, std::ostream& out) {
  const GrowthCurve curve = growth_curve(cfg.model, cfg.utility, run.points.value_or(kDefaultPoints));
  std::string text;
  if (run.format.value_or(OutputFormat::Csv) == OutputFormat::Csv) {
    text = "alpha,lambda\n";
    for (const auto& s : curve.samples) text += format_real(s.alpha) + "," + format_real(s.lambda) + "\n";
  } else {
    Json samples = Json::array();
    for (const auto& s : curve.samples) samples.push_back(Json{{"alpha", s.alpha}, {"lambda", s.lambda}});
    Json j{{"model", std::string(cfg.model.kind_name())}, {"theta", cfg.utility.theta()}, {"samples", samples}};
    text = j.dump(2) + "\n";
  }
  emit(run, out, text);
  return kExitOk;
}

int cmd_optimal(const RunConfig& cfg, const RunOptions& run, std::ostream& out, std::ostream& err) {
  const AllocationDecision d = optimal(cfg.model, cfg.utility);
  Json j{{"alpha_star", d.alpha_star},
         {"case_label", std::string(to_string(d.case_label))},
         {"lambda_at_star", d.lambda_at_star},
         {"alpha_dagger", d.alpha_dagger ? Json(*d.alpha_dagger) : Json(nullptr)}};
  emit(run, out, j.dump(2) + "\n");
  err << cfg.model.kind_name() << ": alpha* = " << format_real(d.alpha_star) << " (" << to_string(d.case_label)
      << "), Lambda = " << format_real(d.lambda_at_star) << "\n";
  return kExitOk;
}

int cmd_verify_ode(const RunConfig& cfg, const RunOptions& run, std::ostream& out) {
  const double alpha = checked_alpha(run);
  const double t_end = run.t_end.value_or(kDefaultOdeTEnd);
  const double dt = run.dt.value_or(kDefaultOdeDt);
  OdeTrace trace;
  double lambda_ode = 0.0;
  double lambda_cf = 0.0;
  if (const auto* h = std::get_if<HestonParams>(&cfg.model.params())) {
    trace = integrate_heston_riccati(*h, cfg.utility, alpha, t_end, dt);
    lambda_ode = heston_lambda_from_trace(*h, cfg.utility, alpha, trace);
    lambda_cf = lambda_heston(*h, cfg.utility, alpha);
  } else if (const auto* v = std::get_if<VasicekParams>(&cfg.model.params())) {
    trace = integrate_vasicek_ode(*v, cfg.utility, alpha, t_end, dt);
    lambda_ode = vasicek_lambda_from_trace(*v, cfg.utility, alpha, trace);
    lambda_cf = lambda_vasicek(*v, cfg.utility, alpha);
  } else {
    throw Error(ErrorKind::Usage, "verify-ode applies to heston and vasicek models only, not " +
                                      std::string(cfg.model.kind_name()));
  }
  const double t_final = trace.times.back();
  const double b_gap = std::abs(trace.b_values.back() - trace.b_limit_closed_form);
  const double a_slope_gap = std::abs(trace.a_values.back() / t_final - trace.a_slope_closed_form);
  const bool pass = b_gap <= kOdeBGapTol && a_slope_gap <= kOdeSlopeGapTol;

  if (run.out) {
    std::string csv = "t,A,B\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      csv += format_real(trace.times[i]) + "," + format_real(trace.a_values[i]) + "," +
             format_real(trace.b_values[i]) + "\n";
    }
    write_file(*run.out, csv);
  }
  Json j{{"model", std::string(cfg.model.kind_name())},
         {"alpha", alpha},
         {"t_end", t_final},
         {"dt", dt},
         {"b_gap", b_gap},
         {"a_slope_gap", a_slope_gap},
         {"b_gap_tolerance", kOdeBGapTol},
         {"a_slope_gap_tolerance", kOdeSlopeGapTol},
         {"lambda_from_ode", lambda_ode},
         {"lambda_closed_form", lambda_cf},
         {"pass", pass}};
  out << j.dump(2) << "\n";
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_verify_mc(const RunConfig& cfg, const RunOptions& run, std::ostream& out) {
  const double alpha = checked_alpha(run);
  const double t = run.t.value_or(kDefaultT);
  const std::int64_t paths = run.paths.value_or(kDefaultPaths);
  const std::int64_t steps = run.steps.value_or(default_steps(t));
  const std::uint64_t seed = run.seed.value_or(kDefaultSeed);
  const SimEstimate est =
      mc_growth_estimate(cfg.model, cfg.utility, alpha, t, paths, steps, seed, run.workers.value_or(0));
  const double closed = lambda(cfg.model, cfg.utility, alpha);
  const double allowance = mc_allowance(cfg.model);
  const double gap = std::abs(est.lambda_hat - closed);
  const bool pass = gap <= 3.0 * est.std_error + allowance;
  const double z = est.std_error > 0.0 ? (est.lambda_hat - closed) / est.std_error
                                       : std::numeric_limits<double>::quiet_NaN();
  Json j{{"model", std::string(cfg.model.kind_name())},
         {"alpha", alpha},
         {"lambda_hat", est.lambda_hat},
         {"std_error", est.std_error},
         {"lambda_closed_form", closed},
         {"z_score", real_or_null(z)},
         {"allowance", allowance},
         {"horizon_t", est.horizon_t},
         {"n_paths", est.n_paths},
         {"n_steps", est.n_steps},
         {"seed", est.seed},
         {"pass", pass}};
  emit(run, out, j.dump(2) + "\n");
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_transform(const RunConfig& cfg, const RunOptions& run, std::ostream& out) {
  const auto* p = std::get_if<ThreeHalvesParams>(&cfg.model.params());
  if (p == nullptr) {
    throw Error(ErrorKind::Usage,
                "transform-3-2 applies to three_halves models only, not " + std::string(cfg.model.kind_name()));
  }
  const double alpha = checked_alpha(run);
  const double theta = cfg.utility.theta();
  const double lambda_l = run.lambda_l.value_or(0.5 * alpha * alpha * (theta - theta * theta));
  const double t = run.t.value_or(kDefaultT);
  const std::int64_t paths = run.paths.value_or(kDefaultPaths);
  const std::int64_t steps = run.steps.value_or(default_steps(t));
  const std::uint64_t seed = run.seed.value_or(kDefaultSeed);
  const double closed = laplace_three_halves_finite_t(*p, lambda_l, t);
  const MeanEstimate mc = mc_laplace_three_halves(*p, lambda_l, t, paths, steps, seed, run.workers.value_or(0));
  const bool pass = std::abs(closed - mc.mean) <= 3.0 * mc.std_error;
  Json j{{"lambda_l", lambda_l},       {"t", t},           {"closed_form", closed},
         {"mc_mean", mc.mean},         {"mc_se", mc.std_error}, {"n_paths", mc.n_paths},
         {"n_steps", mc.n_steps},      {"seed", mc.seed},  {"pass", pass}};
  emit(run, out, j.dump(2) + "\n");
  return pass ? kExitOk : kExitVerificationFailed;
}

void report(const Error& e, std::ostream& err) {
  for (const auto& v : e.violations()) err << "error [" << to_string(v.kind) << "]: " << v.message << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Long-term growth rates and static allocations under CRRA utility", "ltg"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"curve", "sample Lambda(alpha) on a uniform grid"},
      {"optimal", "closed-form optimal allocation"},
      {"verify-ode", "compare against the affine exponent ODE (heston, vasicek)"},
      {"verify-mc", "compare against Monte Carlo simulation"},
      {"transform-3-2", "finite-horizon Laplace transform of integrated 3/2 variance"},
  };
  for (const auto& c : commands) add_flags(*app.add_subcommand(c.name, c.help), flags);

  // CLI11 parses from the back of the vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitInvalid;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = parse_config(read_file(flags.config));
    const RunOptions run = merge(cfg.run, flags);
    if (name == "curve") return cmd_curve(cfg, run, out);
    if (name == "optimal") return cmd_optimal(cfg, run, out, err);
    if (name == "verify-ode") return cmd_verify_ode(cfg, run, out);
    if (name == "verify-mc") return cmd_verify_mc(cfg, run, out);
    return cmd_transform(cfg, run, out);
  } catch (const Error& e) {
    report(e, err);
    return e.kind() == ErrorKind::Io ? kExitIo : kExitInvalid;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace ltg
