#pragma once

#include "levyshe/environment.hpp"
#include "levyshe/levy_measure.hpp"
#include "levyshe/partition.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace levyshe {

enum class WindowPolicy {
    automatic,     // box of default_half_width around the origin
    explicit_box,  // box of the given half-width
    bridge,        // spindle around the segment (0, 0) -> (t, x); point-to-point only
};

[[nodiscard]] std::string to_string(WindowPolicy policy);
[[nodiscard]] WindowPolicy window_policy_from_string(const std::string& name);

/// One Monte Carlo moment experiment. Each replica draws an independent environment
/// on [0, t] and evaluates the normalized field there.
struct MomentConfig {
    int d = 1;
    double beta = 1.0;
    double a = 0.5;
    double t = 1.0;
    double p = 1.0;
    std::size_t n = 1000;
    std::uint64_t seed = 1;

    bool point_to_point = false;
    std::vector<double> x;  // end point for point-to-point (origin when empty)
    bool rho_scaled = true; // divide point-to-point values by rho(t, x)

    WindowPolicy window = WindowPolicy::automatic;
    double half_width = 0.0;  // explicit L, or bridge radius R (6 when 0)
    std::size_t atom_cap = kDefaultAtomCap;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double p = 1.0;
    double t = 0.0;
    double beta = 0.0;
    std::string estimator_kind = "plain";
    double median = 0.0;
    double q05 = 0.0;
    double q95 = 0.0;
    std::uint64_t seed = 0;
    bool divergent = false;  // the p-th moment is infinite; mean is not a consistent estimate
};

/// Sampling window for a moment config at its horizon.
[[nodiscard]] Window moment_window(const MomentConfig& cfg);

/// E[Z^p] = infinity for this measure/dimension: p >= 1 + 2/d or mu_{1,inf}(p) = infinity.
[[nodiscard]] bool moment_divergent(const LevyMeasure& measure, int d, double p);

/// Per-replica log of the normalized value (free end, or rho-scaled point-to-point).
[[nodiscard]] std::vector<double> sample_log_values(const LevyMeasure& measure, const MomentConfig& cfg,
                                                    bool parallel = true);

/// Moment estimate of exp(p * log_values).
[[nodiscard]] MCEstimate estimate_moment(std::span<const double> log_values, const MomentConfig& cfg, double p);

[[nodiscard]] MCEstimate mc_moment(const LevyMeasure& measure, const MomentConfig& cfg, bool parallel = true);

/// d = 1, E[rho^{-2} Zbar^2] as the series sqrt(pi) F(x), x = beta^2 mu2 sqrt(t) / 2.
[[nodiscard]] double second_moment_series_d1(double beta, double mu2, double t);
/// Same, closed form 1 + beta^2 mu2 sqrt(pi t) e^{beta^4 mu2^2 t / 4} Phi(beta^2 mu2 sqrt(t/2)).
[[nodiscard]] double second_moment_closed_d1(double beta, double mu2, double t);
/// Log of the closed form; stays finite where the value overflows.
[[nodiscard]] double log_second_moment_closed_d1(double beta, double mu2, double t);

/// Closed form, after checking it against the series to 1e-10 relative (ConsistencyError otherwise).
[[nodiscard]] double exact_second_moment_d1(double beta, double mu2, double t);

struct LyapunovResult {
    double gamma_hat = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    std::size_t fitted_points = 0;
    std::vector<MCEstimate> per_t;
    std::vector<bool> used;  // stderr / mean < 0.2
};

/// Weighted slope of log E[Zbar(t)^p] against t over `t_grid` (independent runs per t;
/// cfg.t and cfg.seed are overridden per grid point).
[[nodiscard]] LyapunovResult lyapunov_estimate(const LevyMeasure& measure, MomentConfig cfg,
                                               const std::vector<double>& t_grid, std::size_t n_per_t);

struct MultiplicativityReport {
    double p = 1.0;
    double s = 0.0;
    double t = 0.0;
    MCEstimate joint;   // E[Zbar(s + t)^p]
    MCEstimate first;   // E[Zbar(s)^p]
    MCEstimate second;  // E[Zbar(t)^p]
    double gap = 0.0;   // joint - first * second
    double gap_stderr = 0.0;
    double z = 0.0;
    std::string direction;  // "sub" (p > 1), "super" (p < 1) or "equal"
    bool consistent = true; // gap has the expected sign up to 3 sigma
};

/// Compares E[Zbar(s+t,*)^p] with E[Zbar(s,*)^p] E[Zbar(t,*)^p] from three independent runs.
[[nodiscard]] MultiplicativityReport multiplicativity_test(const LevyMeasure& measure, MomentConfig cfg, double s,
                                                           double t, double p);

} // namespace levyshe
