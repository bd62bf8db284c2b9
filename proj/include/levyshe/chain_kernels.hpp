#pragma once

#include <cstddef>
#include <span>

// Inner kernels of the chain dynamic program. All values are logarithms.
//
// The forward recursion over time-sorted atoms is
//
//   W_j = base_j + sum_{first <= i < j} exp(logw_i) rho(t_j - t_i, x_j - x_i),
//   logw_i = log(beta z_i) + log W_i,
//
// where base_j = rho(t_j - s, x_j - x0) for a point start and 1 for a flat start.
// `forward_chain` is the optimized kernel (one exp per pair, no per-pair log);
// `forward_chain_reference` evaluates every term through the heat-kernel module
// and a textbook log-sum-exp, and is kept for tests and benchmarks.

namespace levyshe::kernels {

void forward_chain(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_bz,
                   std::span<const double> log_base, std::size_t first, std::span<double> log_out);

void forward_chain_reference(std::span<const double> t, std::span<const double> x, int d,
                             std::span<const double> log_bz, std::span<const double> log_base, std::size_t first,
                             std::span<double> log_out);

/// log sum_{first <= j < last} exp(log_weight_j) rho(t - t_j, y - x_j), or -inf when empty.
[[nodiscard]] double terminal_sum(std::span<const double> t, std::span<const double> x, int d,
                                  std::span<const double> log_weight, std::size_t first, std::size_t last,
                                  double t_end, std::span<const double> y);

/// log(exp(a) + exp(b)) without overflow.
[[nodiscard]] double log_add(double a, double b);

} // namespace levyshe::kernels
