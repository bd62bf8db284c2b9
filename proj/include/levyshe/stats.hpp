#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace levyshe::stats {

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double std_error = 0.0;  // sd / sqrt(n)
    double median = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

/// Mean, sample standard deviation (n - 1), standard error and quantiles.
[[nodiscard]] Summary summarize(std::span<const double> values);

/// Linear-interpolation quantile (type 7) of an unsorted sample.
[[nodiscard]] double quantile(std::span<const double> values, double q);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

/// Weighted least squares y = intercept + slope x with weights 1/sigma^2.
/// The slope error is propagated from sigma (not rescaled by the residuals).
[[nodiscard]] LinearFit weighted_line(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> sigma);

/// Ordinary least squares; slope_stderr from the residual variance (0 when exactly 2 points).
[[nodiscard]] LinearFit ordinary_line(std::span<const double> x, std::span<const double> y);

/// Upper tail P(X^2_dof >= statistic).
[[nodiscard]] double chi_square_sf(double statistic, double dof);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t bins = 0;  // after pooling
};

/// Pearson goodness-of-fit of `observed` counts against cell probabilities `expected_prob`.
/// Cells with expected count below `min_expected` are pooled (in order) into neighbours.
[[nodiscard]] ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                              std::span<const double> expected_prob, double min_expected = 5.0);

/// Kolmogorov distribution tail P(K > lambda).
[[nodiscard]] double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample two-sided Kolmogorov-Smirnov test against a continuous CDF.
[[nodiscard]] KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

/// (a - b) / sqrt(sa^2 + sb^2); 0 when both errors vanish and a == b.
[[nodiscard]] double z_score(double a, double sa, double b, double sb);

} // namespace levyshe::stats
