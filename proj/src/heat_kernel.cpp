#include "levyshe/heat_kernel.hpp"

#include "levyshe/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace levyshe {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void require_positive_time(double t) {
    if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
}

} // namespace

double log_rho(double t, std::span<const double> x) {
    require_positive_time(t);
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double d = static_cast<double>(x.size());
    return -0.5 * d * (kLogTwoPi + std::log(t)) - r2 / (2.0 * t);
}

double rho(double t, std::span<const double> x) { return std::exp(log_rho(t, x)); }

double log_rho_between(double t, std::span<const double> x, std::span<const double> y) {
    require_positive_time(t);
    double r2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = y[k] - x[k];
        r2 += dx * dx;
    }
    const double d = static_cast<double>(x.size());
    return -0.5 * d * (kLogTwoPi + std::log(t)) - r2 / (2.0 * t);
}

double nu(double p, int d) { return 1.0 - 0.5 * d * (p - 1.0); }

double theta(double p, int d) {
    return std::pow(2.0 * std::numbers::pi, nu(p, d) - 1.0) * std::pow(p, -0.5 * d);
}

std::pair<double, double> rho_power_identity(double p, double t, std::span<const double> x) {
    if (!(p > 0.0)) throw DomainError("power identity needs p > 0");
    const int d = static_cast<int>(x.size());
    const double lhs = std::exp(p * log_rho(t, x));
    const double rhs = std::pow(t, nu(p, d) - 1.0) * theta(p, d) * rho(t / p, x);
    return {lhs, rhs};
}

double log_chain_density(double s, std::span<const double> x0, double t, std::span<const double> y,
                         std::span<const double> times, std::span<const double> points) {
    const std::size_t d = x0.size();
    const std::size_t k = times.size();
    if (points.size() != k * d || y.size() != d) throw DomainError("chain points have inconsistent dimension");
    double prev_t = s;
    std::span<const double> prev_x = x0;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(times[i] > prev_t)) throw DomainError("chain times must increase strictly");
        const auto xi = points.subspan(i * d, d);
        total += log_rho_between(times[i] - prev_t, prev_x, xi);
        prev_t = times[i];
        prev_x = xi;
    }
    if (!(t > prev_t)) throw DomainError("chain times must increase strictly");
    return total + log_rho_between(t - prev_t, prev_x, y);
}

double log_dirichlet_simplex_integral(std::span<const double> zetas, double t) {
    if (zetas.empty()) throw DomainError("need at least one exponent");
    if (!(t > 0.0)) throw DomainError("simplex integral needs t > 0");
    double sum = 0.0;
    double log_num = 0.0;
    for (double z : zetas) {
        if (!(z > 0.0)) throw DomainError("simplex exponents must be positive");
        sum += z;
        log_num += boost::math::lgamma(z);
    }
    return (sum - 1.0) * std::log(t) + log_num - boost::math::lgamma(sum);
}

double dirichlet_simplex_integral(std::span<const double> zetas, double t) {
    return std::exp(log_dirichlet_simplex_integral(zetas, t));
}

double log_gamma_series(double alpha, double delta, double gamma_exp, double x) {
    if (!(alpha > 0.0 && delta > 0.0 && gamma_exp > 0.0)) throw DomainError("gamma series parameters must be > 0");
    if (!(x >= 0.0)) throw DomainError("gamma series argument must be >= 0");
    if (x == 0.0) return -gamma_exp * boost::math::lgamma(delta);
    const double log_x = std::log(x);
    std::vector<double> terms;
    double running_max = -std::numeric_limits<double>::infinity();
    double prev = running_max;
    for (int m = 0; m < 10'000'000; ++m) {
        const double lt = m * log_x - gamma_exp * boost::math::lgamma(alpha * m + delta);
        terms.push_back(lt);
        running_max = std::max(running_max, lt);
        // Terms decay super-exponentially once past the peak.
        if (m > 2 && lt < prev && lt < running_max + std::log(1e-17)) break;
        prev = lt;
    }
    double acc = 0.0;
    for (double lt : terms) acc += std::exp(lt - running_max);
    return running_max + std::log(acc);
}

double gamma_series(double alpha, double delta, double gamma_exp, double x) {
    return std::exp(log_gamma_series(alpha, delta, gamma_exp, x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace levyshe
