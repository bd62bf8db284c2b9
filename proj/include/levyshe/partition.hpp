#pragma once

#include "levyshe/environment.hpp"
#include "levyshe/levy_measure.hpp"

#include <optional>
#include <span>
#include <vector>

namespace levyshe {

/// Disorder strength together with the measure constants the partition functions need.
struct Disorder {
    double beta = 0.0;
    double kappa_a = 0.0;  // compensator of [a, 1)
    double mu = 0.0;       // mu_{1,inf}(1); may be +inf

    /// kappa_a = 0 when a >= 1 (nothing to compensate); mu is kInfinity when divergent.
    static Disorder from_measure(const LevyMeasure& measure, double beta, double a);
};

/// Forward DP table over the atoms of one environment for a fixed start (s, x0).
///
/// log_forward[j] = log V_j with
///   V_j = rho(t_j - s, x_j - x0) + beta sum_{i : s < t_i < t_j} z_i V_i rho(t_j - t_i, x_j - x_i),
/// and -inf for atoms with t_j <= s. Holds a non-owning pointer to the environment,
/// which must outlive it.
struct ChainWeights {
    const Environment* env = nullptr;
    double beta = 0.0;
    double s = 0.0;
    std::vector<double> x0;
    std::size_t first = 0;            // first atom with t > s
    std::vector<double> log_bz;       // log(beta z_j)
    std::vector<double> log_forward;  // log V_j

    /// log(beta z_j V_j): the weight atom j passes on to later legs.
    [[nodiscard]] double log_weight(std::size_t j) const { return log_bz[j] + log_forward[j]; }
    /// Number of atoms with s < t_j < t.
    [[nodiscard]] std::size_t end_before(double t) const;
};

struct PartitionValue {
    enum class Kind { point_to_point, free_end };

    Kind kind = Kind::free_end;
    double log_value = 0.0;
    double log_compensator = 0.0;  // -beta kappa_a (t - s), already included in log_value
    double s = 0.0;
    double t = 0.0;
    std::vector<double> x0;
    std::vector<double> y;  // empty for free end

    [[nodiscard]] double value() const;
};

[[nodiscard]] ChainWeights forward_weights(const Environment& env, double beta, double s = 0.0,
                                           std::span<const double> x0 = {});
/// Same table through the reference kernel.
[[nodiscard]] ChainWeights forward_weights_reference(const Environment& env, double beta, double s = 0.0,
                                                     std::span<const double> x0 = {});

/// Z(s,x0; t,y) = e^{-beta kappa_a (t-s)} [rho(t-s, y-x0) + beta sum_{s<t_j<t} z_j V_j rho(t-t_j, y-x_j)].
[[nodiscard]] PartitionValue point_to_point(const ChainWeights& weights, const Disorder& disorder, double t,
                                            std::span<const double> y);
/// Z(s,x0; t,*) = e^{-beta kappa_a (t-s)} [1 + beta sum_{s<t_j<t} z_j V_j].
[[nodiscard]] PartitionValue free_end(const ChainWeights& weights, const Disorder& disorder, double t);

[[nodiscard]] PartitionValue point_to_point(const Environment& env, const Disorder& disorder, double t,
                                            std::span<const double> y);
[[nodiscard]] PartitionValue free_end(const Environment& env, const Disorder& disorder, double t);

/// Multiplies by e^{-beta mu (t - s)}.
[[nodiscard]] PartitionValue normalized(PartitionValue value, double mu, double beta);

/// Point-to-point values at every grid point (flat, |grid| * d), sharing one table.
[[nodiscard]] std::vector<PartitionValue> field(const ChainWeights& weights, const Disorder& disorder, double t,
                                                std::span<const double> grid_points);

inline constexpr std::size_t kBruteForceMaxAtoms = 20;

/// Exhaustive sum over time-increasing atom subsets of beta^|S| prod z_i times the
/// heat-kernel chain. `y` empty means free end. Test oracle for the DP.
[[nodiscard]] double brute_force_partition(const Environment& env, const Disorder& disorder, double s,
                                           std::span<const double> x0, double t, std::span<const double> y);

/// |Z(t,*) - 1 - beta sum_{t_j<t} z_j Z(t_j,x_j) + beta kappa_a int_0^t Z(s,*) ds|
/// with the time integral by composite Gauss-Legendre between atom times.
[[nodiscard]] double mild_residual_free_end(const Environment& env, const Disorder& disorder, double t,
                                            int quadrature_points);

} // namespace levyshe
