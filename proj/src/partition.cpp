#include "levyshe/partition.hpp"

#include "levyshe/chain_kernels.hpp"
#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyshe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> start_point(const Environment& env, std::span<const double> x0) {
    if (x0.empty()) return std::vector<double>(static_cast<std::size_t>(env.dim()), 0.0);
    if (static_cast<int>(x0.size()) != env.dim()) throw DomainError("start point has wrong dimension");
    return {x0.begin(), x0.end()};
}

template <class Kernel>
ChainWeights build_weights(const Environment& env, double beta, double s, std::span<const double> x0,
                           Kernel&& kernel) {
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    ChainWeights w;
    w.env = &env;
    w.beta = beta;
    w.s = s;
    w.x0 = start_point(env, x0);
    const std::size_t n = env.size();
    w.first = static_cast<std::size_t>(std::upper_bound(env.t.begin(), env.t.end(), s) - env.t.begin());
    w.log_bz.resize(n);
    for (std::size_t j = 0; j < n; ++j) w.log_bz[j] = beta > 0.0 ? std::log(beta * env.z[j]) : kNegInf;
    std::vector<double> log_base(n, kNegInf);
    for (std::size_t j = w.first; j < n; ++j) log_base[j] = log_rho_between(env.t[j] - s, w.x0, env.position(j));
    w.log_forward.assign(n, kNegInf);
    kernel(env.t, env.x, env.dim(), w.log_bz, log_base, w.first, w.log_forward);
    return w;
}

void check_horizon(const ChainWeights& w, double t) {
    if (w.env == nullptr) throw DomainError("chain weights are not bound to an environment");
    if (!(t > w.s)) throw DomainError("final time must exceed the start time");
    if (t > w.env->window.horizon * (1.0 + 1e-12)) throw DomainError("final time beyond the environment horizon");
}

std::vector<double> log_weights(const ChainWeights& w) {
    std::vector<double> out(w.log_forward.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = w.log_weight(j);
    return out;
}

} // namespace

Disorder Disorder::from_measure(const LevyMeasure& measure, double beta, double a) {
    Disorder d;
    d.beta = beta;
    d.kappa_a = a < 1.0 ? measure.compensator(a) : 0.0;
    try {
        d.mu = measure.mean_large_jumps();
    } catch (const DivergentIntegral&) {
        d.mu = kInfinity;
    }
    return d;
}

std::size_t ChainWeights::end_before(double t) const {
    return static_cast<std::size_t>(std::lower_bound(env->t.begin(), env->t.end(), t) - env->t.begin());
}

double PartitionValue::value() const { return std::exp(log_value); }

ChainWeights forward_weights(const Environment& env, double beta, double s, std::span<const double> x0) {
    return build_weights(env, beta, s, x0, kernels::forward_chain);
}

ChainWeights forward_weights_reference(const Environment& env, double beta, double s, std::span<const double> x0) {
    return build_weights(env, beta, s, x0, kernels::forward_chain_reference);
}

PartitionValue point_to_point(const ChainWeights& w, const Disorder& disorder, double t, std::span<const double> y) {
    check_horizon(w, t);
    const Environment& env = *w.env;
    if (static_cast<int>(y.size()) != env.dim()) throw DomainError("end point has wrong dimension");
    const std::size_t last = w.end_before(t);
    const auto lw = log_weights(w);
    const double chained = kernels::terminal_sum(env.t, env.x, env.dim(), lw, w.first, last, t, y);
    PartitionValue v;
    v.kind = PartitionValue::Kind::point_to_point;
    v.log_compensator = -disorder.beta * disorder.kappa_a * (t - w.s);
    v.log_value = v.log_compensator + kernels::log_add(log_rho_between(t - w.s, w.x0, y), chained);
    v.s = w.s;
    v.t = t;
    v.x0 = w.x0;
    v.y.assign(y.begin(), y.end());
    return v;
}

PartitionValue free_end(const ChainWeights& w, const Disorder& disorder, double t) {
    check_horizon(w, t);
    const std::size_t last = w.end_before(t);
    double m = 0.0;
    for (std::size_t j = w.first; j < last; ++j) m = std::max(m, w.log_weight(j));
    double sum = std::exp(-m);
    for (std::size_t j = w.first; j < last; ++j) sum += std::exp(w.log_weight(j) - m);
    PartitionValue v;
    v.kind = PartitionValue::Kind::free_end;
    v.log_compensator = -disorder.beta * disorder.kappa_a * (t - w.s);
    v.log_value = v.log_compensator + m + std::log(sum);
    v.s = w.s;
    v.t = t;
    v.x0 = w.x0;
    return v;
}

PartitionValue point_to_point(const Environment& env, const Disorder& disorder, double t, std::span<const double> y) {
    const auto w = forward_weights(env, disorder.beta);
    return point_to_point(w, disorder, t, y);
}

PartitionValue free_end(const Environment& env, const Disorder& disorder, double t) {
    const auto w = forward_weights(env, disorder.beta);
    return free_end(w, disorder, t);
}

PartitionValue normalized(PartitionValue value, double mu, double beta) {
    if (std::isinf(mu) || std::isnan(mu)) throw DivergentIntegral("normalization needs a finite mu");
    value.log_value -= beta * mu * (value.t - value.s);
    return value;
}

std::vector<PartitionValue> field(const ChainWeights& w, const Disorder& disorder, double t,
                                  std::span<const double> grid_points) {
    check_horizon(w, t);
    const auto d = static_cast<std::size_t>(w.env->dim());
    if (grid_points.size() % d != 0) throw DomainError("grid points have wrong dimension");
    const std::size_t count = grid_points.size() / d;
    std::vector<PartitionValue> out(count);
#pragma omp parallel for schedule(static)
    for (std::size_t g = 0; g < count; ++g) out[g] = point_to_point(w, disorder, t, grid_points.subspan(g * d, d));
    return out;
}

double brute_force_partition(const Environment& env, const Disorder& disorder, double s, std::span<const double> x0,
                             double t, std::span<const double> y) {
    const auto start = start_point(env, x0);
    const bool free = y.empty();
    if (!free && static_cast<int>(y.size()) != env.dim()) throw DomainError("end point has wrong dimension");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < env.size(); ++i)
        if (env.t[i] > s && env.t[i] < t) idx.push_back(i);
    if (idx.size() > kBruteForceMaxAtoms) throw DomainError("too many atoms for subset enumeration");
    const std::size_t m = idx.size();
    const auto d = static_cast<std::size_t>(env.dim());
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double term = 1.0;
        double prev_t = s;
        std::span<const double> prev_x = start;
        for (std::size_t k = 0; k < m; ++k) {
            if (!(mask & (std::uint64_t{1} << k))) continue;
            const std::size_t i = idx[k];
            const auto xi = env.position(i);
            std::vector<double> diff(d);
            for (std::size_t c = 0; c < d; ++c) diff[c] = xi[c] - prev_x[c];
            term *= disorder.beta * env.z[i] * rho(env.t[i] - prev_t, diff);
            prev_t = env.t[i];
            prev_x = xi;
        }
        if (!free) {
            std::vector<double> diff(d);
            for (std::size_t c = 0; c < d; ++c) diff[c] = y[c] - prev_x[c];
            term *= rho(t - prev_t, diff);
        }
        total += term;
    }
    return std::exp(-disorder.beta * disorder.kappa_a * (t - s)) * total;
}

double mild_residual_free_end(const Environment& env, const Disorder& disorder, double t, int quadrature_points) {
    if (quadrature_points < 1) throw DomainError("need at least one quadrature point");
    const auto w = forward_weights(env, disorder.beta);
    check_horizon(w, t);
    const double b = disorder.beta;
    const double kappa = disorder.kappa_a;
    const std::size_t last = w.end_before(t);

    const double z_end = free_end(w, disorder, t).value();

    double jump_sum = 0.0;
    for (std::size_t j = w.first; j < last; ++j)
        jump_sum += b * env.z[j] * std::exp(-b * kappa * env.t[j] + w.log_forward[j]);

    // Z(s,*) = e^{-b kappa s} C_k on the k-th inter-atom interval, C_k = 1 + b sum_{j<k} z_j V_j.
    double integral = 0.0;
    if (b * kappa != 0.0) {
        constexpr int kOrder = 10;
        const std::size_t intervals = last - w.first + 1;
        const int sub = std::max(1, quadrature_points / static_cast<int>(kOrder * intervals));
        double level = 1.0;
        double lo = 0.0;
        for (std::size_t k = 0; k < intervals; ++k) {
            const std::size_t j = w.first + k;
            const double hi = j < last ? env.t[j] : t;
            const double h = (hi - lo) / sub;
            for (int q = 0; q < sub; ++q) {
                const double a0 = lo + q * h;
                integral += level * boost::math::quadrature::gauss<double, kOrder>::integrate(
                                        [&](double u) { return std::exp(-b * kappa * u); }, a0, a0 + h);
            }
            if (j < last) level += b * env.z[j] * std::exp(w.log_forward[j]);
            lo = hi;
        }
    }
    return std::abs(z_end - 1.0 - jump_sum + b * kappa * integral);
}

} // namespace levyshe
