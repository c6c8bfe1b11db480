#pragma once

namespace ltg::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

/// Largest |z| accepted by kummer_m. Negative arguments are summed through
/// Kummer's transformation, so the limit is set by overflow of e^{|z|}.
inline constexpr double kKummerMaxAbsZ = 500.0;

/// Confluent hypergeometric M(a, b, z) = sum_n (a)_n / (b)_n z^n / n!.
/// Throws PoleAtB when b is zero or a negative integer, DomainExceeded when
/// |z| > kKummerMaxAbsZ.
SpecFunResult kummer_m(double a, double b, double z);

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt, s > 0, x >= 0.
/// Series below x = s + 1, Lentz continued fraction above.
SpecFunResult upper_incomplete_gamma(double s, double x);

/// e^x * Gamma(s, x); finite for arguments where Gamma(s, x) itself underflows.
SpecFunResult upper_incomplete_gamma_exp_scaled(double s, double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace ltg::specfun
