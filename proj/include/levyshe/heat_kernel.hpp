#pragma once

#include <span>
#include <utility>

namespace levyshe {

// Standard d-dimensional heat kernel rho(t, x) = (2 pi t)^{-d/2} exp(-|x|^2 / 2t)
// and the algebra built on it. Points are passed as spans of length d.

[[nodiscard]] double log_rho(double t, std::span<const double> x);
[[nodiscard]] double rho(double t, std::span<const double> x);

/// log rho(t, y - x) without materializing the difference.
[[nodiscard]] double log_rho_between(double t, std::span<const double> x, std::span<const double> y);

/// nu_p = 1 - (d/2)(p - 1).
[[nodiscard]] double nu(double p, int d);

/// theta(p) = (2 pi)^{nu_p - 1} p^{-d/2}.
[[nodiscard]] double theta(double p, int d);

/// Both sides of rho(t,x)^p = t^{nu_p - 1} theta(p) rho(t/p, x).
[[nodiscard]] std::pair<double, double> rho_power_identity(double p, double t, std::span<const double> x);

/// log of prod_i rho(dt_i, dx_i) along the chain (s,x0) -> (times[k], points[k]) -> (t,y).
/// `points` is flat, k*d values. Times must increase strictly inside (s, t).
[[nodiscard]] double log_chain_density(double s, std::span<const double> x0, double t, std::span<const double> y,
                                       std::span<const double> times, std::span<const double> points);

/// log of the simplex integral of prod (dt_i)^{zeta_i - 1} over s < t_1 < ... < t_k < t (k+1 exponents).
[[nodiscard]] double log_dirichlet_simplex_integral(std::span<const double> zetas, double t);
[[nodiscard]] double dirichlet_simplex_integral(std::span<const double> zetas, double t);

/// F(x) = sum_m x^m / Gamma(alpha m + delta)^gamma_exp, in log form.
[[nodiscard]] double log_gamma_series(double alpha, double delta, double gamma_exp, double x);
[[nodiscard]] double gamma_series(double alpha, double delta, double gamma_exp, double x);

/// Standard normal distribution function.
[[nodiscard]] double normal_cdf(double x);

} // namespace levyshe
