#pragma once

#include "levyshe/levy_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace levyshe {

/// Space-time region [0, T] x (spatial set) on which atoms are sampled.
///
/// `box`: a cube of half-width L around `center` at every time.
/// `bridge`: a spindle following the straight line from `center` (time 0) to `end`
/// (time T); the cross-section at time s is a cube of half-width R sqrt(s (T - s) / T),
/// i.e. R standard deviations of the Brownian bridge. Meant for point-to-point
/// quantities where a full box would waste almost all atoms.
struct Window {
    enum class Shape { box, bridge };

    Shape shape = Shape::box;
    double horizon = 1.0;
    double half_width = 6.0;     // L for box, R for bridge
    std::vector<double> center;  // box center / bridge start
    std::vector<double> end;     // bridge end (unused for box)

    static Window box(int d, double horizon, double half_width, std::vector<double> center = {});
    static Window bridge(std::vector<double> start, std::vector<double> end, double horizon, double radius);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(center.size()); }
    [[nodiscard]] double volume() const;
    [[nodiscard]] bool contains(double t, std::span<const double> x) const;

    /// Uniform point of the window (time and position).
    void sample_point(Rng& rng, double& t, std::span<double> x) const;
};

/// Default box half-width r_sigma * max(sqrt(T), 1) + |targets|_inf.
[[nodiscard]] double default_half_width(double horizon, double targets_sup_norm = 0.0, double r_sigma = 6.0);

/// Finite atom cloud {(t_i, x_i, z_i)} sorted strictly ascending in time.
/// Structure-of-arrays: `x` holds `size() * dim` coordinates.
struct Environment {
    Window window;
    double truncation_a = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> z;

    [[nodiscard]] int dim() const noexcept { return window.dim(); }
    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool empty() const noexcept { return t.empty(); }
    [[nodiscard]] std::span<const double> position(std::size_t i) const {
        return std::span<const double>(x).subspan(i * window.center.size(), window.center.size());
    }

    /// Atoms with z >= a_new. a_new may be kInfinity.
    [[nodiscard]] Environment filter_by_jump(double a_new) const;

    /// Atoms lying inside `w` (same dimension and horizon expected).
    [[nodiscard]] Environment restrict_to(const Window& w) const;

    /// Throws DomainError unless times increase strictly, z >= a and all atoms lie in the window.
    void validate() const;
};

/// Sort atoms by time and nudge float-resolution ties upward by one ulp.
[[nodiscard]] Environment make_environment(Window window, double truncation_a, std::uint64_t seed,
                                           std::vector<double> t, std::vector<double> x, std::vector<double> z);

inline constexpr std::size_t kDefaultAtomCap = 20'000'000;

/// Poisson cloud with intensity dt dx lambda(dz) restricted to window x [a, inf).
/// Deterministic in (measure, window, a, seed).
[[nodiscard]] Environment sample_environment(const LevyMeasure& measure, const Window& window, double a,
                                             std::uint64_t seed, std::size_t atom_cap = kDefaultAtomCap);

/// Adds an independent Poisson cloud of jumps in [a_fine, env.truncation_a) on the same window.
[[nodiscard]] Environment augment_small_jumps(const Environment& env, double a_fine, const LevyMeasure& measure,
                                              std::uint64_t seed, std::size_t atom_cap = kDefaultAtomCap);

} // namespace levyshe
