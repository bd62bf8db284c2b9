#pragma once

#include "levyshe/environment.hpp"
#include "levyshe/levy_measure.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace levyshe {

/// Jumps (tau, B_tau, zeta) placed along one Brownian path from the origin:
/// (tau, zeta) is Poisson with intensity beta z dtau lambda(dz) on [0, T] x [a, inf).
struct SpineRealization {
    std::vector<double> tau;       // increasing
    std::vector<double> position;  // flat, tau.size() * d
    std::vector<double> zeta;
    std::uint64_t brownian_seed = 0;
    int d = 1;

    [[nodiscard]] std::size_t size() const noexcept { return tau.size(); }
};

[[nodiscard]] SpineRealization sample_spine(const LevyMeasure& measure, int d, double beta, double a, double horizon,
                                            std::uint64_t seed);

/// env plus the spine atoms that fall inside env's window (the size-biased law of the
/// window-truncated field only places spine atoms there).
[[nodiscard]] Environment merge_spine(const Environment& env, const SpineRealization& spine);

/// Atoms with |x|_inf <= R sqrt(T), z in [a_z, b_z), t in [0, T].
struct CountingBox {
    double radius = 1.0;
    double a_z = 0.0;
    double b_z = kInfinity;
    double horizon = 1.0;
};

enum class Functional { one, one_body_exp, one_body_count, window_empty };

[[nodiscard]] std::string to_string(Functional g);
[[nodiscard]] Functional functional_from_string(const std::string& name);

/// Built-in functional of an atom cloud: 1, exp(-f), f, or 1{f = 0}.
[[nodiscard]] double evaluate_functional(Functional g, const CountingBox& box, const Environment& env);

struct OneBodyStatistic {
    CountingBox box;
    std::size_t count = 0;
};

[[nodiscard]] OneBodyStatistic one_body_counts(const Environment& env, const CountingBox& box);
[[nodiscard]] OneBodyStatistic one_body_counts(const SpineRealization& spine, const CountingBox& box);

/// E[f] = Var f = lambda([a_z, b_z)) (2 R sqrt T)^d T.
[[nodiscard]] double one_body_mean(const LevyMeasure& measure, int d, const CountingBox& box);
/// E'[fbar] = beta mu_{a_z, b_z}(1) T over the whole spine.
[[nodiscard]] double spine_count_mean(const LevyMeasure& measure, double beta, const CountingBox& box);

struct SizeBiasReport {
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    double rhs_stderr = 0.0;
    double z_score = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

struct SizeBiasConfig {
    int d = 1;
    double beta = 1.0;
    double a = 0.5;
    double t = 1.0;
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    double half_width = 0.0;  // box half-width; default_half_width(t) when 0
    Functional g = Functional::one_body_exp;
    CountingBox box;
};

/// lhs = mean of Zbar(t,*) g(omega) over plain environments, rhs = mean of g(omega + spine),
/// from independent replica streams; z_score = (lhs - rhs) / combined stderr.
[[nodiscard]] SizeBiasReport sizebias_identity_check(const LevyMeasure& measure, const SizeBiasConfig& cfg);

} // namespace levyshe
