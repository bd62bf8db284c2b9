#include "levyshe/moments.hpp"

#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"
#include "levyshe/replicas.hpp"
#include "levyshe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levyshe {

namespace {

constexpr double kDefaultBridgeRadius = 6.0;

std::vector<double> end_point(const MomentConfig& cfg) {
    if (cfg.x.empty()) return std::vector<double>(static_cast<std::size_t>(cfg.d), 0.0);
    if (static_cast<int>(cfg.x.size()) != cfg.d) throw DomainError("end point has wrong dimension");
    return cfg.x;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

double log_value_on(const Environment& env, const MomentConfig& cfg, const Disorder& disorder,
                    const std::vector<double>& y) {
    const auto w = forward_weights(env, cfg.beta);
    PartitionValue v = cfg.point_to_point ? point_to_point(w, disorder, cfg.t, y) : free_end(w, disorder, cfg.t);
    v = normalized(std::move(v), disorder.mu, cfg.beta);
    double out = v.log_value;
    if (cfg.point_to_point && cfg.rho_scaled) out -= log_rho(cfg.t, y);
    return out;
}

} // namespace

std::string to_string(WindowPolicy policy) {
    switch (policy) {
    case WindowPolicy::automatic: return "auto";
    case WindowPolicy::explicit_box: return "explicit";
    case WindowPolicy::bridge: return "bridge";
    }
    return "auto";
}

WindowPolicy window_policy_from_string(const std::string& name) {
    if (name == "auto") return WindowPolicy::automatic;
    if (name == "explicit") return WindowPolicy::explicit_box;
    if (name == "bridge") return WindowPolicy::bridge;
    throw ConfigError("unknown window policy '" + name + "' (expected auto, explicit or bridge)");
}

Window moment_window(const MomentConfig& cfg) {
    if (cfg.d < 1) throw DomainError("dimension must be >= 1");
    if (!(cfg.t > 0.0)) throw DomainError("horizon must be > 0");
    const auto y = end_point(cfg);
    switch (cfg.window) {
    case WindowPolicy::automatic:
        return Window::box(cfg.d, cfg.t, default_half_width(cfg.t, cfg.point_to_point ? sup_norm(y) : 0.0));
    case WindowPolicy::explicit_box:
        if (!(cfg.half_width > 0.0)) throw DomainError("explicit window needs a positive half-width");
        return Window::box(cfg.d, cfg.t, cfg.half_width);
    case WindowPolicy::bridge:
        if (!cfg.point_to_point) throw DomainError("bridge window is only defined for point-to-point values");
        return Window::bridge(std::vector<double>(static_cast<std::size_t>(cfg.d), 0.0), y, cfg.t,
                              cfg.half_width > 0.0 ? cfg.half_width : kDefaultBridgeRadius);
    }
    throw DomainError("unknown window policy");
}

bool moment_divergent(const LevyMeasure& measure, int d, double p) {
    if (p >= 1.0 + 2.0 / d) return true;
    try {
        return std::isinf(measure.partial_moment(1.0, kInfinity, p));
    } catch (const DivergentIntegral&) {
        return true;
    }
}

std::vector<double> sample_log_values(const LevyMeasure& measure, const MomentConfig& cfg, bool parallel) {
    if (cfg.n < 1) throw DomainError("need at least one replica");
    const Window window = moment_window(cfg);
    const Disorder disorder = Disorder::from_measure(measure, cfg.beta, cfg.a);
    if (std::isinf(disorder.mu)) throw DivergentIntegral("normalization needs mu_{1,inf}(1) < inf");
    const auto y = end_point(cfg);
    auto one = [&](std::size_t, std::uint64_t seed) {
        const Environment env = sample_environment(measure, window, cfg.a, seed, cfg.atom_cap);
        return log_value_on(env, cfg, disorder, y);
    };
    return parallel ? map_replicas(cfg.n, cfg.seed, one) : map_replicas_serial(cfg.n, cfg.seed, one);
}

MCEstimate estimate_moment(std::span<const double> log_values, const MomentConfig& cfg, double p) {
    if (!(p > 0.0)) throw DomainError("moment order must be > 0");
    std::vector<double> v(log_values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(p * log_values[i]);
    const auto s = stats::summarize(v);
    MCEstimate e;
    e.mean = s.mean;
    e.std_error = s.std_error;
    e.n = s.n;
    e.p = p;
    e.t = cfg.t;
    e.beta = cfg.beta;
    e.median = s.median;
    e.q05 = s.q05;
    e.q95 = s.q95;
    e.seed = cfg.seed;
    return e;
}

MCEstimate mc_moment(const LevyMeasure& measure, const MomentConfig& cfg, bool parallel) {
    if (!(cfg.p > 0.0)) throw DomainError("moment order must be > 0");
    if (cfg.n < 2) throw DomainError("need at least two replicas");
    const auto logs = sample_log_values(measure, cfg, parallel);
    MCEstimate e = estimate_moment(logs, cfg, cfg.p);
    e.divergent = moment_divergent(measure, cfg.d, cfg.p);
    return e;
}

double second_moment_series_d1(double beta, double mu2, double t) {
    if (!(t >= 0.0) || !(mu2 >= 0.0)) throw DomainError("second moment needs t >= 0 and mu2 >= 0");
    const double x = 0.5 * beta * beta * mu2 * std::sqrt(t);
    return std::sqrt(std::numbers::pi) * gamma_series(0.5, 0.5, 1.0, x);
}

double log_second_moment_closed_d1(double beta, double mu2, double t) {
    if (!(t >= 0.0) || !(mu2 >= 0.0)) throw DomainError("second moment needs t >= 0 and mu2 >= 0");
    const double c = beta * beta * mu2;
    if (c == 0.0 || t == 0.0) return 0.0;
    const double log_tail = std::log(c) + 0.5 * std::log(std::numbers::pi * t) + 0.25 * c * c * t +
                            std::log(normal_cdf(c * std::sqrt(0.5 * t)));
    return log_tail > 0.0 ? log_tail + std::log1p(std::exp(-log_tail)) : std::log1p(std::exp(log_tail));
}

double second_moment_closed_d1(double beta, double mu2, double t) {
    return std::exp(log_second_moment_closed_d1(beta, mu2, t));
}

double exact_second_moment_d1(double beta, double mu2, double t) {
    const double closed = second_moment_closed_d1(beta, mu2, t);
    const double series = second_moment_series_d1(beta, mu2, t);
    if (std::abs(series - closed) > 1e-10 * std::abs(closed))
        throw ConsistencyError("second-moment series and closed form disagree");
    return closed;
}

LyapunovResult lyapunov_estimate(const LevyMeasure& measure, MomentConfig cfg, const std::vector<double>& t_grid,
                                 std::size_t n_per_t) {
    if (t_grid.size() < 3) throw DomainError("Lyapunov fit needs at least three times");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw DomainError("time grid must increase");
    LyapunovResult r;
    const std::uint64_t master = cfg.seed;
    cfg.n = n_per_t;
    std::vector<double> xs, ys, sig;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        cfg.t = t_grid[k];
        cfg.seed = stream_seed(master, k);
        MCEstimate e = mc_moment(measure, cfg);
        if (!(e.mean > 0.0)) throw DomainError("non-positive moment estimate; increase the replica count");
        const double rel = e.std_error / e.mean;
        const bool use = rel < 0.2;
        r.used.push_back(use);
        if (use) {
            xs.push_back(e.t);
            ys.push_back(std::log(e.mean));
            sig.push_back(rel);
        }
        r.per_t.push_back(std::move(e));
    }
    if (xs.size() < 2) throw DomainError("fewer than two times with stderr/mean < 0.2; increase the replica count");
    const bool weighted = std::all_of(sig.begin(), sig.end(), [](double s) { return s > 0.0; });
    const auto fit = weighted ? stats::weighted_line(xs, ys, sig) : stats::ordinary_line(xs, ys);
    r.gamma_hat = fit.slope;
    r.slope_stderr = fit.slope_stderr;
    r.intercept = fit.intercept;
    r.fitted_points = fit.points;
    return r;
}

MultiplicativityReport multiplicativity_test(const LevyMeasure& measure, MomentConfig cfg, double s, double t,
                                             double p) {
    if (!(p > 0.0)) throw DomainError("moment order must be > 0");
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("times must be > 0");
    MultiplicativityReport r;
    r.p = p;
    r.s = s;
    r.t = t;
    cfg.p = p;
    cfg.point_to_point = false;
    const std::uint64_t master = cfg.seed;
    auto run = [&](double horizon, std::uint64_t stream) {
        MomentConfig c = cfg;
        c.t = horizon;
        c.seed = stream_seed(master, stream);
        return mc_moment(measure, c);
    };
    r.joint = run(s + t, 0);
    r.first = run(s, 1);
    r.second = run(t, 2);
    const double prod = r.first.mean * r.second.mean;
    r.gap = r.joint.mean - prod;
    r.gap_stderr = std::sqrt(r.joint.std_error * r.joint.std_error +
                             std::pow(r.second.mean * r.first.std_error, 2) +
                             std::pow(r.first.mean * r.second.std_error, 2));
    r.z = r.gap_stderr > 0.0 ? r.gap / r.gap_stderr : 0.0;
    if (p == 1.0) {
        r.direction = "equal";
        r.consistent = std::abs(r.gap) <= 3.0 * r.gap_stderr;
    } else if (p > 1.0) {
        r.direction = "sub";
        r.consistent = r.gap <= 3.0 * r.gap_stderr;
    } else {
        r.direction = "super";
        r.consistent = r.gap >= -3.0 * r.gap_stderr;
    }
    return r;
}

} // namespace levyshe
