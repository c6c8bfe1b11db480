#include "ltg/config.hpp"

#include <charconv>
#include <map>
#include <set>
#include <vector>

#include "ltg/error.hpp"

namespace ltg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  double required_real(const std::string& key) {
    if (!has(key)) {
      used_.insert(key);
      errors_.push_back({ErrorKind::MissingKey, "missing required key " + key});
      return 0.0;
    }
    return optional_real(key).value_or(0.0);
  }

  std::optional<double> optional_real(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    double v = 0.0;
    const char* end = raw->data() + raw->size();
    const auto [ptr, ec] = std::from_chars(raw->data(), end, v);
    if (ec != std::errc() || ptr != end) {
      mismatch(key, "a real number");
      return std::nullopt;
    }
    return v;
  }

  template <class Int>
  std::optional<Int> optional_integer(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    std::string_view digits = *raw;
    int base = 10;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
      digits.remove_prefix(2);
      base = 16;
    }
    Int v{};
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      mismatch(key, "an integer");
      return std::nullopt;
    }
    return v;
  }

  void mismatch(const std::string& key, const std::string& expected) {
    errors_.push_back({ErrorKind::TypeMismatch, "line " + std::to_string(entries_.at(key).line) + ": " + key +
                                                    " = '" + entries_.at(key).value + "' is not " + expected});
  }

  void error(ErrorKind kind, std::string message) { errors_.push_back({kind, std::move(message)}); }

  void reject_unused(const std::string& context) {
    for (const auto& [key, entry] : entries_) {
      if (!used_.contains(key)) {
        errors_.push_back({ErrorKind::UnknownKey, "line " + std::to_string(entry.line) + ": unknown key " + key +
                                                      (context.empty() ? "" : " for " + context)});
      }
    }
  }

  std::vector<Violation>& errors() { return errors_; }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
  std::vector<Violation> errors_;
};

RawModel read_model(Reader& rd, const std::string& kind) {
  auto req = [&](const char* name) { return rd.required_real(std::string("model.") + name); };
  if (kind == "gbm") {
    GbmParams p;
    p.mu = req("mu");
    p.sigma = req("sigma");
    p.r = req("r");
    return p;
  }
  if (kind == "heston") {
    HestonParams p;
    p.mu = req("mu");
    p.kappa = req("kappa");
    p.gamma_level = req("gamma_level");
    p.delta = req("delta");
    p.rho = req("rho");
    p.r = req("r");
    p.nu0 = req("nu0");
    return p;
  }
  if (kind == "three_halves") {
    ThreeHalvesParams p;
    p.mu = req("mu");
    p.kappa = req("kappa");
    p.gamma_level = req("gamma_level");
    p.delta = req("delta");
    p.r = req("r");
    p.nu0 = req("nu0");
    return p;
  }
  if (kind == "jump") {
    JumpDiffusionParams p;
    p.mu = req("mu");
    p.sigma = req("sigma");
    p.lambda_j = req("lambda_j");
    p.r = req("r");
    const auto law = rd.text("model.jump");
    if (!law) {
      rd.error(ErrorKind::MissingKey, "missing required key model.jump");
    } else if (*law == "constant") {
      p.jump = ConstantJump{req("jump_y")};
    } else if (*law == "exponential") {
      p.jump = ExponentialJump{req("jump_rate")};
    } else {
      rd.mismatch("model.jump", "one of constant, exponential");
    }
    return p;
  }
  VasicekParams p;
  p.mu = req("mu");
  p.sigma = req("sigma");
  p.kappa = req("kappa");
  p.gamma_level = req("gamma_level");
  p.delta = req("delta");
  p.rho = req("rho");
  p.r0 = req("r0");
  return p;
}

RunOptions read_run(Reader& rd) {
  RunOptions o;
  o.points = rd.optional_integer<int>("run.points");
  o.t = rd.optional_real("run.t");
  o.paths = rd.optional_integer<std::int64_t>("run.paths");
  o.steps = rd.optional_integer<std::int64_t>("run.steps");
  o.seed = rd.optional_integer<std::uint64_t>("run.seed");
  o.t_end = rd.optional_real("run.t_end");
  o.dt = rd.optional_real("run.dt");
  o.alpha = rd.optional_real("run.alpha");
  o.lambda_l = rd.optional_real("run.lambda_l");
  o.workers = rd.optional_integer<unsigned>("run.workers");
  o.out = rd.text("run.out");
  if (const auto fmt = rd.text("run.format")) {
    if (*fmt == "csv") {
      o.format = OutputFormat::Csv;
    } else if (*fmt == "json") {
      o.format = OutputFormat::Json;
    } else {
      rd.mismatch("run.format", "one of csv, json");
    }
  }
  return o;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::vector<Violation> errors;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({ErrorKind::TypeMismatch, "line " + std::to_string(line_no) + ": expected 'key = value'"});
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (const auto it = entries.find(key); it != entries.end()) {
      errors.push_back({ErrorKind::DuplicateKey, "line " + std::to_string(line_no) + ": " + key +
                                                     " already set on line " + std::to_string(it->second.line)});
      continue;
    }
    entries.emplace(std::move(key), Entry{std::move(value), line_no});
  }

  Reader rd(std::move(entries));
  for (auto& e : errors) rd.errors().push_back(std::move(e));

  std::optional<RawModel> raw;
  const auto kind = rd.text("model.kind");
  if (!kind) {
    rd.error(ErrorKind::MissingKey, "missing required key model.kind");
  } else if (*kind == "gbm" || *kind == "heston" || *kind == "three_halves" || *kind == "jump" || *kind == "vasicek") {
    raw = read_model(rd, *kind);
  } else {
    rd.mismatch("model.kind", "one of gbm, heston, three_halves, jump, vasicek");
  }

  const bool has_theta = rd.has("utility.theta");
  const bool has_gamma = rd.has("utility.gamma_rra");
  std::optional<double> theta;
  std::optional<double> gamma;
  if (has_theta && has_gamma) {
    rd.text("utility.theta");
    rd.text("utility.gamma_rra");
    rd.error(ErrorKind::DuplicateUtility, "set exactly one of utility.theta and utility.gamma_rra, not both");
  } else if (has_theta) {
    theta = rd.optional_real("utility.theta");
  } else if (has_gamma) {
    gamma = rd.optional_real("utility.gamma_rra");
  } else {
    rd.error(ErrorKind::MissingKey, "missing required key utility.theta (or utility.gamma_rra)");
  }

  RunOptions run = read_run(rd);
  rd.reject_unused(kind ? "model.kind = " + *kind : std::string{});
  if (!rd.errors().empty()) throw Error(std::move(rd.errors()));

  // Parameter invariants, all reported together.
  std::vector<Violation> invalid;
  std::optional<ModelSpec> model;
  std::optional<Utility> utility;
  try {
    model = ModelSpec::validate(*raw);
  } catch (const Error& e) {
    invalid.insert(invalid.end(), e.violations().begin(), e.violations().end());
  }
  try {
    utility = theta ? Utility::from_theta(*theta) : Utility::from_gamma_rra(*gamma);
  } catch (const Error& e) {
    invalid.insert(invalid.end(), e.violations().begin(), e.violations().end());
  }
  if (!invalid.empty()) throw Error(std::move(invalid));
  return RunConfig{*model, *utility, std::move(run)};
}

}  // namespace ltg
