#pragma once

#include "levyshe/levy_measure.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/partition.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace levyshe {

/// Schema-versioned JSON report plus a companion CSV of per-point statistics.
struct ExperimentReport {
    nlohmann::json json;
    std::string csv;
};

inline constexpr int kReportSchemaVersion = 1;

/// Ubar(t, x) = e^{-beta (kappa_a + mu) t} [1 + beta sum_j z_j W_j rho(t - t_j, x - x_j)] on a
/// flat list of grid points, with W_j the flat-start forward weights. O(N^2 + N |grid|).
[[nodiscard]] std::vector<double> flat_initial_field(const Environment& env, const Disorder& disorder, double t,
                                                     std::span<const double> grid_points);

/// Same values from one time-reversed pass per grid point. Reference implementation.
[[nodiscard]] std::vector<double> flat_initial_field_reference(const Environment& env, const Disorder& disorder,
                                                               double t, std::span<const double> grid_points);

struct MassConcentrationConfig {
    int d = 1;
    double beta = 1.0;
    double a = 0.5;
    double t = 4.0;
    double alpha = 0.1;        // high sites: Ubar >= e^{alpha t}
    double grid_half_width = 10.0;
    std::size_t grid_cells = 200;  // per axis
    std::size_t n_env = 200;
    std::uint64_t seed = 1;
};

[[nodiscard]] ExperimentReport mass_concentration_report(const LevyMeasure& measure,
                                                         const MassConcentrationConfig& cfg);

struct IntermittencyConfig {
    int d = 1;
    double beta = 1.0;
    double a = 0.5;
    std::vector<double> t_list{2.0, 4.0, 8.0};
    std::size_t n = 10000;
    std::uint64_t seed = 1;
};

/// E[Zbar(t,*)^{1/2}] and the p = 1 control over t_list. Each replica samples one environment
/// on [0, max t] and evaluates every t on it, so consecutive differences are paired.
[[nodiscard]] ExperimentReport intermittency_report(const LevyMeasure& measure, const IntermittencyConfig& cfg);

struct DegeneracyConfig {
    int d = 3;
    double beta = 1.0;
    double t = 1.0;
    std::vector<double> x;                 // origin when empty
    std::vector<double> a_grid{0.2, 0.1, 0.05};  // decreasing
    std::size_t n = 2000;
    std::uint64_t seed = 1;
    WindowPolicy window = WindowPolicy::bridge;
    double half_width = 4.0;
    std::size_t atom_cap = 2'000'000;
};

/// Median and quartiles of Z^a(t, x) per truncation level, coupled across levels by filtering
/// one environment sampled at the finest level.
[[nodiscard]] ExperimentReport degeneracy_scan(const LevyMeasure& measure, const DegeneracyConfig& cfg);

struct TruncationConfig {
    int d = 1;
    double beta = 1.0;
    double t = 1.0;
    std::vector<double> x;
    std::vector<double> a_grid{0.4, 0.2, 0.1, 0.05};  // decreasing; the last is a_min
    double p = 1.0;
    std::size_t n = 2000;
    std::uint64_t seed = 1;
    WindowPolicy window = WindowPolicy::automatic;
    double half_width = 0.0;
    std::size_t atom_cap = 2'000'000;
};

/// Coupled levels: E|Z^a - Z^{a_min}|^p per a and the mean of rho^{-1} Zbar^a (should be 1).
[[nodiscard]] ExperimentReport truncation_convergence(const LevyMeasure& measure, const TruncationConfig& cfg);

struct BoxConfig {
    int d = 1;
    double beta = 1.0;
    double a = 0.5;
    double t = 1.0;
    std::vector<double> l_grid;  // increasing; empty means {L0/4, L0/2, L0, 2 L0}, L0 the default
    std::size_t n = 2000;
    std::uint64_t seed = 1;
};

/// Mean of Zbar(t,*) per box half-width, nested boxes cut from one environment on the largest.
[[nodiscard]] ExperimentReport box_convergence(const LevyMeasure& measure, const BoxConfig& cfg);

} // namespace levyshe
