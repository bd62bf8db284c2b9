#pragma once

#include "levyshe/random.hpp"

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace levyshe {

/// Upper integration bound meaning "+infinity".
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// lambda(dz) = alpha z^{-(1+alpha)} dz on (0, inf), alpha in (0, 2).
struct AlphaStable {
    double alpha;
};

/// Same density as AlphaStable, restricted to [z_min, z_max).
struct PowerTail {
    double alpha;
    double z_min;
    double z_max;
};

/// Point mass: jumps of size z0 at rate `mass` per unit space-time volume.
struct AtomJump {
    double z0;
    double mass;
};

struct Mixture {
    std::vector<AtomJump> atoms;
};

/// lambda(dz) = (rate / scale) e^{-z/scale} dz on (0, inf); total mass `rate`.
struct ExponentialTail {
    double rate;
    double scale;
};

/// Intensity measure of the jump sizes of a positive Levy space-time noise.
///
/// Immutable value type. All integrals are over half-open intervals [a, b);
/// `b = kInfinity` is allowed. Closed forms are used for the power-law and
/// atomic kinds, adaptive quadrature for the exponential kind.
///
/// Construction rejects measures with an infinite integral of z^2 near 0
/// unless `degenerate_experiment` is set.
class LevyMeasure {
public:
    using Kind = std::variant<AlphaStable, PowerTail, AtomJump, Mixture, ExponentialTail>;

    explicit LevyMeasure(Kind kind, bool degenerate_experiment = false);

    static LevyMeasure alpha_stable(double alpha) { return LevyMeasure(AlphaStable{alpha}); }
    static LevyMeasure power_tail(double alpha, double z_min, double z_max, bool degenerate = false) {
        return LevyMeasure(PowerTail{alpha, z_min, z_max}, degenerate);
    }
    static LevyMeasure atom(double z0, double mass) { return LevyMeasure(AtomJump{z0, mass}); }
    static LevyMeasure mixture(std::vector<AtomJump> atoms) { return LevyMeasure(Mixture{std::move(atoms)}); }
    static LevyMeasure exponential_tail(double rate, double scale) {
        return LevyMeasure(ExponentialTail{rate, scale});
    }

    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] std::string kind_name() const;
    [[nodiscard]] bool degenerate_experiment() const noexcept { return degenerate_; }

    [[nodiscard]] double support_lo() const;
    [[nodiscard]] double support_hi() const;

    /// mu_{a,b}(p) = integral of z^p over [a, b). Throws DivergentIntegral when infinite.
    [[nodiscard]] double partial_moment(double a, double b, double p) const;

    /// kappa_a = mu_{a,1}(1), a in (0, 1].
    [[nodiscard]] double compensator(double a) const;

    /// lambda([a, b)).
    [[nodiscard]] double tail_mass(double a, double b = kInfinity) const;

    /// mu = mu_{1,inf}(1); DivergentIntegral if infinite.
    [[nodiscard]] double mean_large_jumps() const { return partial_moment(1.0, kInfinity, 1.0); }

    /// Draw from lambda restricted to [a, b) and normalized.
    [[nodiscard]] double sample_jump(double a, double b, Rng& rng) const { return sample_tilted(a, b, 0.0, rng); }

    /// Draw from the law proportional to z^tilt lambda(dz) on [a, b).
    /// tilt = 1 gives the size-biased jump law of the spine.
    [[nodiscard]] double sample_tilted(double a, double b, double tilt, Rng& rng) const;

    /// Inverse of `conditional_cdf` in u for continuous kinds; atomic kinds pick the atom.
    [[nodiscard]] double quantile(double a, double b, double tilt, double u) const;

    /// CDF at z of the law proportional to z^tilt lambda(dz) on [a, b).
    [[nodiscard]] double conditional_cdf(double a, double b, double tilt, double z) const;

    /// Whether the integral of z^2 over (0, 1) is finite.
    [[nodiscard]] bool small_jumps_square_integrable() const;

    /// Sufficient condition for a non-degenerate a -> 0 limit in dimension d.
    [[nodiscard]] bool satisfies_nondegeneracy(int d) const;

    /// Condition under which the a -> 0 limit vanishes in dimension d.
    [[nodiscard]] bool violates_nondegeneracy(int d) const;

private:
    Kind kind_;
    bool degenerate_;
};

} // namespace levyshe
