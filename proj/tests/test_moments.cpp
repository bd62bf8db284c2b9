#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/replicas.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace levyshe;

TEST_SUITE("moments") {

TEST_CASE("second moment: series and closed form agree") {
    for (double x = 0.0; x <= 20.0; x += 0.25) {
        // x = beta^2 mu2 sqrt(t) / 2 with beta = mu2 = 1
        const double t = 4.0 * x * x;
        const double s = second_moment_series_d1(1.0, 1.0, t);
        const double c = second_moment_closed_d1(1.0, 1.0, t);
        if (std::isfinite(c)) CHECK(std::abs(s - c) <= 1e-10 * c);
        CHECK(log_second_moment_closed_d1(1.0, 1.0, t) == doctest::Approx(std::log(s)).epsilon(1e-10));
    }
    CHECK(exact_second_moment_d1(0.0, 1.0, 3.0) == 1.0);
}

TEST_CASE("second moment series against direct summation") {
    // sqrt(pi) sum x^m / Gamma((m+1)/2) at x = 1/2
    double direct = 0.0;
    for (int m = 0; m < 200; ++m) direct += std::pow(0.5, m) / std::tgamma((m + 1) / 2.0);
    CHECK(second_moment_series_d1(1.0, 1.0, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi) * direct).epsilon(1e-13));
    CHECK(second_moment_closed_d1(1.0, 1.0, 1.0) == doctest::Approx(2.7302344337037).epsilon(1e-12));
}

TEST_CASE("Monte Carlo second moment at small t") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    MomentConfig cfg;
    cfg.a = 0.5;
    cfg.t = 0.5;
    cfg.p = 2.0;
    cfg.n = 20000;
    cfg.seed = 8;
    cfg.point_to_point = true;
    cfg.window = WindowPolicy::bridge;
    const auto e = mc_moment(m, cfg);
    CHECK(std::abs(e.mean - exact_second_moment_d1(1.0, 1.0, 0.5)) < 3 * e.std_error);
}

TEST_CASE("serial and parallel replica maps give identical values") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    MomentConfig cfg;
    cfg.n = 300;
    cfg.seed = 99;
    const auto a = sample_log_values(m, cfg, true);
    const auto b = sample_log_values(m, cfg, false);
    CHECK(a == b);
    const auto sq = map_replicas(50, 3, [](std::size_t i, std::uint64_t s) { return static_cast<double>(i) + static_cast<double>(s % 7); });
    const auto sq2 = map_replicas_serial(50, 3, [](std::size_t i, std::uint64_t s) { return static_cast<double>(i) + static_cast<double>(s % 7); });
    CHECK(sq == sq2);
}

TEST_CASE("replica map rethrows the lowest failing index") {
    auto f = [](std::size_t i, std::uint64_t) -> int {
        if (i == 7 || i == 30) throw DomainError("fail " + std::to_string(i));
        return 0;
    };
    try {
        (void)map_replicas(64, 1, f);
        FAIL("expected an exception");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()) == "fail 7");
    }
}

TEST_CASE("divergence flags") {
    const auto a15 = LevyMeasure::alpha_stable(1.5);
    CHECK(moment_divergent(a15, 1, 3.0));
    CHECK(moment_divergent(a15, 1, 1.6));  // mu_{1,inf}(p) infinite for p >= alpha
    CHECK_FALSE(moment_divergent(a15, 1, 1.2));
    CHECK(moment_divergent(LevyMeasure::atom(1.0, 1.0), 2, 2.0));
    CHECK_FALSE(moment_divergent(LevyMeasure::atom(1.0, 1.0), 2, 1.9));
    MomentConfig cfg;
    cfg.n = 10;
    cfg.p = 1.7;
    CHECK(mc_moment(a15, cfg).divergent);
}

TEST_CASE("window policies") {
    MomentConfig cfg;
    cfg.t = 4.0;
    auto w = moment_window(cfg);
    CHECK(w.shape == Window::Shape::box);
    CHECK(w.half_width == doctest::Approx(12.0));
    cfg.point_to_point = true;
    cfg.x = {1.0};
    CHECK(moment_window(cfg).half_width == doctest::Approx(13.0));
    cfg.window = WindowPolicy::bridge;
    w = moment_window(cfg);
    CHECK(w.shape == Window::Shape::bridge);
    CHECK(w.half_width == 6.0);
    cfg.point_to_point = false;
    CHECK_THROWS((void)moment_window(cfg));
    CHECK(window_policy_from_string(to_string(WindowPolicy::explicit_box)) == WindowPolicy::explicit_box);
}

TEST_CASE("normalized first moment has zero growth rate") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    MomentConfig cfg;
    cfg.a = 0.5;
    cfg.p = 1.0;
    const auto r = lyapunov_estimate(m, cfg, {0.5, 1.0, 1.5}, 4000);
    // p = 1 normalized: exponent 0
    CHECK(std::abs(r.gamma_hat) < 3 * r.slope_stderr + 1e-12);
    CHECK(r.per_t.size() == 3);
    CHECK_THROWS((void)lyapunov_estimate(m, cfg, {1.0, 2.0}, 100));
}

TEST_CASE("sub- and supermultiplicativity") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    MomentConfig cfg;
    cfg.a = 0.5;
    cfg.n = 20000;
    cfg.seed = 12;
    const auto half = multiplicativity_test(m, cfg, 1.0, 1.0, 0.5);
    CHECK(half.direction == "super");
    CHECK(half.consistent);
    const auto one = multiplicativity_test(m, cfg, 1.0, 1.0, 1.0);
    CHECK(one.direction == "equal");
    CHECK(one.consistent);
}

}
