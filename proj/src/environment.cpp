#include "levyshe/environment.hpp"

#include "levyshe/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace levyshe {

Window Window::box(int d, double horizon, double half_width, std::vector<double> center) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (center.empty()) center.assign(static_cast<std::size_t>(d), 0.0);
    if (static_cast<int>(center.size()) != d) throw DomainError("box center has wrong dimension");
    Window w;
    w.shape = Shape::box;
    w.horizon = horizon;
    w.half_width = half_width;
    w.center = std::move(center);
    return w;
}

Window Window::bridge(std::vector<double> start, std::vector<double> end, double horizon, double radius) {
    if (start.empty() || start.size() != end.size()) throw DomainError("bridge endpoints need equal dimension >= 1");
    Window w;
    w.shape = Shape::bridge;
    w.horizon = horizon;
    w.half_width = radius;
    w.center = std::move(start);
    w.end = std::move(end);
    return w;
}

double Window::volume() const {
    const double d = dim();
    if (!(horizon > 0.0) || !(half_width > 0.0)) return 0.0;
    if (shape == Shape::box) return horizon * std::pow(2.0 * half_width, d);
    return std::pow(2.0 * half_width, d) * std::pow(horizon, 0.5 * d + 1.0) *
           boost::math::beta(0.5 * d + 1.0, 0.5 * d + 1.0);
}

bool Window::contains(double t, std::span<const double> x) const {
    if (!(t >= 0.0 && t <= horizon)) return false;
    if (shape == Shape::box) {
        for (std::size_t k = 0; k < center.size(); ++k)
            if (std::abs(x[k] - center[k]) > half_width) return false;
        return true;
    }
    const double h = half_width * std::sqrt(t * (horizon - t) / horizon);
    const double frac = t / horizon;
    for (std::size_t k = 0; k < center.size(); ++k) {
        const double c = center[k] + frac * (end[k] - center[k]);
        if (std::abs(x[k] - c) > h * (1.0 + 1e-12)) return false;
    }
    return true;
}

void Window::sample_point(Rng& rng, double& t, std::span<double> x) const {
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    if (shape == Shape::box) {
        t = horizon * uniform01(rng);
        for (std::size_t k = 0; k < center.size(); ++k) x[k] = center[k] + half_width * sym(rng);
        return;
    }
    // time density proportional to (s (T - s))^{d/2}: a scaled Beta(d/2 + 1, d/2 + 1)
    const double shape_param = 0.5 * dim() + 1.0;
    std::gamma_distribution<double> gamma(shape_param, 1.0);
    const double g1 = gamma(rng);
    const double g2 = gamma(rng);
    t = horizon * g1 / (g1 + g2);
    const double h = half_width * std::sqrt(t * (horizon - t) / horizon);
    const double frac = t / horizon;
    for (std::size_t k = 0; k < center.size(); ++k)
        x[k] = center[k] + frac * (end[k] - center[k]) + h * sym(rng);
}

double default_half_width(double horizon, double targets_sup_norm, double r_sigma) {
    return r_sigma * std::max(std::sqrt(horizon), 1.0) + targets_sup_norm;
}

Environment Environment::filter_by_jump(double a_new) const {
    if (!(a_new >= truncation_a)) throw DomainError("filter level must be >= the truncation level");
    Environment out;
    out.window = window;
    out.truncation_a = a_new;
    out.seed = seed;
    const std::size_t d = window.center.size();
    for (std::size_t i = 0; i < size(); ++i) {
        if (!(z[i] >= a_new)) continue;
        out.t.push_back(t[i]);
        out.z.push_back(z[i]);
        const auto xi = position(i);
        out.x.insert(out.x.end(), xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return out;
}

Environment Environment::restrict_to(const Window& w) const {
    if (w.dim() != dim()) throw DomainError("restriction window has wrong dimension");
    Environment out;
    out.window = w;
    out.truncation_a = truncation_a;
    out.seed = seed;
    for (std::size_t i = 0; i < size(); ++i) {
        const auto xi = position(i);
        if (!w.contains(t[i], xi)) continue;
        out.t.push_back(t[i]);
        out.z.push_back(z[i]);
        out.x.insert(out.x.end(), xi.begin(), xi.end());
    }
    return out;
}

void Environment::validate() const {
    const std::size_t d = window.center.size();
    if (z.size() != t.size() || x.size() != t.size() * d) throw DomainError("environment arrays have mismatched sizes");
    for (std::size_t i = 0; i < size(); ++i) {
        if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("atom times must increase strictly");
        if (!(z[i] >= truncation_a)) throw DomainError("atom jump below truncation level");
        if (!window.contains(t[i], position(i))) throw DomainError("atom outside sampling window");
    }
}

Environment make_environment(Window window, double truncation_a, std::uint64_t seed, std::vector<double> t,
                             std::vector<double> x, std::vector<double> z) {
    const std::size_t n = t.size();
    const std::size_t d = window.center.size();
    if (z.size() != n || x.size() != n * d) throw DomainError("atom arrays have mismatched sizes");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });

    Environment env;
    env.window = std::move(window);
    env.truncation_a = truncation_a;
    env.seed = seed;
    env.t.resize(n);
    env.z.resize(n);
    env.x.resize(n * d);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        env.t[k] = t[i];
        env.z[k] = z[i];
        std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(i * d), d, env.x.begin() + static_cast<std::ptrdiff_t>(k * d));
        if (k > 0 && !(env.t[k] > env.t[k - 1]))
            env.t[k] = std::nextafter(env.t[k - 1], std::numeric_limits<double>::infinity());
    }
    return env;
}

namespace {

std::size_t poisson_count(double mean, Rng& rng, std::size_t cap) {
    if (!(mean >= 0.0) || std::isinf(mean)) throw DivergentIntegral("infinite Poisson rate on the window");
    if (mean > static_cast<double>(cap))
        throw DomainError("expected atom count " + std::to_string(mean) + " exceeds the atom budget " +
                          std::to_string(cap) + " (truncation level too small for this measure/window)");
    if (mean == 0.0) return 0;
    const auto n = static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
    if (n > cap) throw DomainError("sampled atom count exceeds the atom budget");
    return n;
}

void append_cloud(const LevyMeasure& measure, const Window& window, double lo, double hi, std::size_t n, Rng& rng,
                  std::vector<double>& t, std::vector<double>& x, std::vector<double>& z) {
    const std::size_t d = window.center.size();
    std::vector<double> point(d);
    for (std::size_t i = 0; i < n; ++i) {
        double ti = 0.0;
        window.sample_point(rng, ti, point);
        t.push_back(ti);
        x.insert(x.end(), point.begin(), point.end());
        z.push_back(measure.sample_jump(lo, hi, rng));
    }
}

} // namespace

Environment sample_environment(const LevyMeasure& measure, const Window& window, double a, std::uint64_t seed,
                               std::size_t atom_cap) {
    if (!(a > 0.0)) throw DomainError("truncation level must be > 0");
    const double volume = window.volume();
    if (!(volume > 0.0)) throw DomainError("sampling window has zero volume");
    const double rate = measure.tail_mass(a, kInfinity);
    Rng rng = make_rng(seed);
    const std::size_t n = poisson_count(rate * volume, rng, atom_cap);
    std::vector<double> t, x, z;
    t.reserve(n);
    z.reserve(n);
    x.reserve(n * window.center.size());
    append_cloud(measure, window, a, kInfinity, n, rng, t, x, z);
    return make_environment(window, a, seed, std::move(t), std::move(x), std::move(z));
}

Environment augment_small_jumps(const Environment& env, double a_fine, const LevyMeasure& measure,
                                std::uint64_t seed, std::size_t atom_cap) {
    if (!(a_fine > 0.0) || !(a_fine <= env.truncation_a))
        throw DomainError("augmentation level must lie in (0, truncation level]");
    if (a_fine == env.truncation_a) return env;
    const double rate = measure.tail_mass(a_fine, env.truncation_a);
    Rng rng = make_rng(seed);
    const std::size_t n = poisson_count(rate * env.window.volume(), rng, atom_cap);
    std::vector<double> t = env.t;
    std::vector<double> x = env.x;
    std::vector<double> z = env.z;
    append_cloud(measure, env.window, a_fine, env.truncation_a, n, rng, t, x, z);
    return make_environment(env.window, a_fine, env.seed, std::move(t), std::move(x), std::move(z));
}

} // namespace levyshe
