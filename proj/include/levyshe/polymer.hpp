#pragma once

#include "levyshe/partition.hpp"
#include "levyshe/random.hpp"

#include <cstdint>
#include <vector>

namespace levyshe {

/// Pinned atom subset of a polymer path, ascending in time, with its log-probability
/// under the backward sampler.
struct PinnedSubset {
    std::vector<std::size_t> atoms;
    double log_prob = 0.0;
};

/// A sampled path: pins plus positions on a time grid (flat, grid.size() * d).
struct PolymerPath {
    PinnedSubset pinned;
    std::vector<double> grid;
    std::vector<double> trajectory;
    int d = 1;

    [[nodiscard]] std::span<const double> at(std::size_t k) const {
        return std::span<const double>(trajectory).subspan(k * static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    }
};

/// Draws S from the free-end polymer measure on [s, T] with the backward categorical sampler.
/// `weights` must be the forward table of the environment for the start (s, x0).
[[nodiscard]] PinnedSubset sample_pinned_subset(const ChainWeights& weights, double horizon, Rng& rng);

/// Pins from `sample_pinned_subset`, then Brownian bridges between consecutive pins
/// (from the start to the first pin) and free Brownian motion after the last pin.
[[nodiscard]] PolymerPath sample_path(const ChainWeights& weights, double horizon, const std::vector<double>& grid,
                                      Rng& rng);

/// Fills a path through fixed pins (times strictly inside (s, T]) on the grid.
[[nodiscard]] std::vector<double> interpolate_pins(std::span<const double> start, double s,
                                                   const std::vector<double>& pin_times,
                                                   const std::vector<double>& pin_points, double horizon,
                                                   const std::vector<double>& grid, Rng& rng);

/// log of beta^|S| prod z_i times the free-end chain through S, divided by the free-end total.
/// Brute-force reference for the subset law.
[[nodiscard]] double subset_log_probability(const ChainWeights& weights, const Disorder& disorder, double horizon,
                                            const std::vector<std::size_t>& subset);

/// Cell-centred uniform grid: `cells[k]` cells on [lo[k], hi[k]] per coordinate.
struct Grid {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::size_t> cells;

    static Grid cube(int d, double half_width, std::size_t cells_per_axis);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(lo.size()); }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] double spacing(int k) const;
    [[nodiscard]] double cell_volume() const;
    /// Flat list of cell centres, first coordinate fastest.
    [[nodiscard]] std::vector<double> points() const;
};

struct EndpointDensity {
    Grid grid;
    std::vector<double> density;  // Z(t, x) / Z(t, *) at cell centres
    double mass = 0.0;            // sum density * cell volume
};

inline constexpr double kEndpointMassTolerance = 1e-4;

/// Endpoint density of the polymer; DomainError when the grid misses more than 1e-4 of the mass.
[[nodiscard]] EndpointDensity endpoint_measure(const ChainWeights& weights, const Disorder& disorder, double t,
                                               const Grid& grid);

/// d = 1: exact probabilities of the polymer endpoint in the bins [edges[k], edges[k+1]),
/// plus the two unbounded tails as first and last entries.
[[nodiscard]] std::vector<double> endpoint_bin_probabilities_d1(const ChainWeights& weights, double t,
                                                                const std::vector<double>& edges);

/// Mass fraction captured by k balls of radius R chosen greedily among grid centres.
[[nodiscard]] double localization_statistic(const EndpointDensity& density, std::size_t k, double radius);

/// Time average of the localization statistic over `times` (each must be <= horizon).
[[nodiscard]] double cesaro_localization(const ChainWeights& weights, const Disorder& disorder,
                                         const std::vector<double>& times, const Grid& grid, std::size_t k,
                                         double radius);

} // namespace levyshe
