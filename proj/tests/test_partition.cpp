#include "helpers.hpp"

#include "levyshe/chain_kernels.hpp"
#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/partition.hpp"
#include "levyshe/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace levyshe;
using levyshe::testing::random_environment;
using levyshe::testing::rel_diff;

TEST_SUITE("partition") {

TEST_CASE("empty environment gives the heat kernel and one") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    const auto env = make_environment(Window::box(2, 1.0, 3.0), 0.5, 0, {}, {}, {});
    const auto dis = Disorder::from_measure(m, 1.0, 0.5);
    const std::vector<double> y{0.3, -0.2};
    const auto p2p = point_to_point(env, dis, 0.8, y);
    CHECK(p2p.log_value == doctest::Approx(log_rho(0.8, y) - dis.kappa_a * 0.8).epsilon(1e-14));
    CHECK(free_end(env, dis, 0.8).log_value == doctest::Approx(-dis.kappa_a * 0.8));
}

TEST_CASE("single atom by hand") {
    const auto env = make_environment(Window::box(1, 1.0, 2.0), 2.0, 0, {0.4}, {0.3}, {2.0});
    Disorder dis;
    dis.beta = 0.7;
    const double x1[1] = {0.3}, y[1] = {-0.1}, d[1] = {-0.4};
    const double expected = rho(1.0, y) + 0.7 * 2.0 * rho(0.4, x1) * rho(0.6, d);
    CHECK(point_to_point(env, dis, 1.0, y).value() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(free_end(env, dis, 1.0).value() == doctest::Approx(1.0 + 0.7 * 2.0 * rho(0.4, x1)).epsilon(1e-14));
    // atoms at or after t do not contribute
    CHECK(free_end(env, dis, 0.4).value() == doctest::Approx(1.0));
}

TEST_CASE("forward DP matches subset enumeration") {
    const std::vector<LevyMeasure> measures{LevyMeasure::alpha_stable(1.5), LevyMeasure::atom(1.0, 3.0),
                                            LevyMeasure::exponential_tail(2.0, 0.7),
                                            LevyMeasure::mixture({{0.6, 1.0}, {3.0, 0.2}})};
    Rng rng = make_rng(2024);
    for (int k = 0; k < 60; ++k) {
        const int d = 1 + k % 3;
        const auto& m = measures[static_cast<std::size_t>(k) % measures.size()];
        const std::size_t n = 1 + static_cast<std::size_t>(k % 12);
        const auto env = random_environment(d, n, 100 + static_cast<std::uint64_t>(k), m, 0.5, 1.0, 1.0);
        const double beta = std::array{0.5, 1.0, 2.0}[static_cast<std::size_t>(k) % 3];
        const auto dis = Disorder::from_measure(m, beta, 0.5);
        std::vector<double> y(static_cast<std::size_t>(d));
        for (auto& c : y) c = 2.0 * uniform01(rng) - 1.0;
        const double t = 0.5 + 0.5 * uniform01(rng);
        const double bf_p = brute_force_partition(env, dis, 0.0, {}, t, y);
        const double bf_f = brute_force_partition(env, dis, 0.0, {}, t, {});
        CHECK(rel_diff(point_to_point(env, dis, t, y).value(), bf_p) < 1e-12);
        CHECK(rel_diff(free_end(env, dis, t).value(), bf_f) < 1e-12);
    }
}

TEST_CASE("shifted start matches enumeration") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    const auto env = random_environment(2, 10, 77, m, 0.5, 1.0, 1.0);
    const auto dis = Disorder::from_measure(m, 1.3, 0.5);
    const std::vector<double> x0{0.2, -0.1}, y{0.0, 0.4};
    const auto w = forward_weights(env, 1.3, 0.35, x0);
    CHECK(rel_diff(point_to_point(w, dis, 0.9, y).value(), brute_force_partition(env, dis, 0.35, x0, 0.9, y)) < 1e-12);
    CHECK(rel_diff(free_end(w, dis, 0.9).value(), brute_force_partition(env, dis, 0.35, x0, 0.9, {})) < 1e-12);
}

TEST_CASE("optimized and reference kernels agree") {
    const auto m = LevyMeasure::alpha_stable(1.3);
    for (int d = 1; d <= 4; ++d) {
        const auto env = random_environment(d, 400, 5 + static_cast<std::uint64_t>(d), m, 0.2, 2.0, 2.0);
        const auto fast = forward_weights(env, 1.0);
        const auto ref = forward_weights_reference(env, 1.0);
        for (std::size_t j = 0; j < env.size(); ++j)
            CHECK(fast.log_forward[j] == doctest::Approx(ref.log_forward[j]).epsilon(1e-12));
    }
}

TEST_CASE("log_add") {
    CHECK(kernels::log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    CHECK(kernels::log_add(-kInfinity, 1.5) == 1.5);
    CHECK(kernels::log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("field integrates to the free-end value") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    const auto env = random_environment(1, 25, 8, m, 0.5, 1.0, 1.5);
    const auto dis = Disorder::from_measure(m, 1.0, 0.5);
    const auto w = forward_weights(env, 1.0);
    const std::size_t n = 4000;
    std::vector<double> grid(n);
    const double lo = -10.0, h = 20.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (static_cast<double>(i) + 0.5) * h;
    const auto values = field(w, dis, 1.0, grid);
    double sum = 0.0;
    for (const auto& v : values) sum += v.value() * h;
    CHECK(sum == doctest::Approx(free_end(w, dis, 1.0).value()).epsilon(1e-4));
    // the parallel field equals pointwise evaluation
    for (std::size_t i = 0; i < n; i += 397)
        CHECK(values[i].log_value == doctest::Approx(point_to_point(w, dis, 1.0, std::span(&grid[i], 1)).log_value));
}

TEST_CASE("mild equation residual") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto env = random_environment(1, 50, 300 + s, m, 0.5, 1.0, 1.0);
        const auto dis = Disorder::from_measure(m, 0.5, 0.5);
        CHECK(mild_residual_free_end(env, dis, 1.0, 10000) <= 1e-6);
    }
}

TEST_CASE("normalization and errors") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    const auto dis = Disorder::from_measure(m, 2.0, 0.25);
    CHECK(dis.kappa_a == doctest::Approx(3.0 * (2.0 - 1.0)));
    CHECK(dis.mu == doctest::Approx(3.0));
    const auto env = make_environment(Window::box(1, 1.0, 2.0), 0.25, 0, {}, {}, {});
    const auto v = normalized(free_end(env, dis, 1.0), dis.mu, 2.0);
    CHECK(v.log_value == doctest::Approx(-2.0 * 3.0 - 2.0 * 3.0));
    CHECK_THROWS_AS((void)normalized(free_end(env, dis, 1.0), kInfinity, 1.0), DivergentIntegral);
    CHECK_THROWS_AS((void)free_end(env, dis, 2.0), DomainError);
    CHECK(Disorder::from_measure(LevyMeasure::alpha_stable(0.8), 1.0, 0.5).mu == kInfinity);
    CHECK(Disorder::from_measure(m, 1.0, 2.0).kappa_a == 0.0);
}

TEST_CASE("normalized means: free end is one, point-to-point is the heat kernel") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    MomentConfig cfg;
    cfg.d = 1;
    cfg.a = 0.5;
    cfg.t = 0.7;
    cfg.n = 20000;
    cfg.seed = 4;
    auto e = mc_moment(m, cfg);
    CHECK(std::abs(e.mean - 1.0) < 3 * e.std_error);
    cfg.point_to_point = true;
    cfg.x = {0.4};
    cfg.window = WindowPolicy::bridge;
    e = mc_moment(m, cfg);
    CHECK(std::abs(e.mean - 1.0) < 3 * e.std_error);  // rho-scaled
}

}
