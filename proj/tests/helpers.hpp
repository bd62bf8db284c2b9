#pragma once

#include "levyshe/environment.hpp"
#include "levyshe/random.hpp"

#include <cmath>
#include <vector>

namespace levyshe::testing {

// Atoms placed uniformly in a box window, jump sizes drawn from `measure` on [a, inf).
inline Environment random_environment(int d, std::size_t n, std::uint64_t seed, const LevyMeasure& measure, double a,
                                      double horizon = 1.0, double half_width = 2.0) {
    Rng rng = make_rng(seed);
    Window w = Window::box(d, horizon, half_width);
    std::vector<double> t(n), x(n * static_cast<std::size_t>(d)), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.sample_point(rng, t[i], std::span<double>(x).subspan(i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)));
        z[i] = measure.sample_jump(a, kInfinity, rng);
    }
    return make_environment(w, a, seed, std::move(t), std::move(x), std::move(z));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace levyshe::testing
