#include "levyshe/errors.hpp"
#include "levyshe/sizebias.hpp"
#include "levyshe/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace levyshe;

TEST_SUITE("sizebias") {

TEST_CASE("spine count is Poisson with mean beta z0 mass T") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    std::vector<double> n;
    for (std::uint64_t s = 0; s < 100'000; ++s) n.push_back(static_cast<double>(sample_spine(m, 1, 2.0, 0.5, 1.0, s).size()));
    const auto sm = stats::summarize(n);
    CHECK(std::abs(sm.mean - 2.0) < 3 * sm.std_error);
}

TEST_CASE("spine marks follow the size-biased law") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    std::vector<double> zeta;
    for (std::uint64_t s = 0; zeta.size() < 20000; ++s)
        for (double z : sample_spine(m, 1, 1.0, 1.0, 5.0, s).zeta) zeta.push_back(z);
    const auto r = stats::ks_test(zeta, [](double z) { return z <= 1.0 ? 0.0 : 1.0 - 1.0 / std::sqrt(z); });
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("spine positions are Brownian") {
    // B_tau / sqrt(tau) is standard normal
    const auto m = LevyMeasure::atom(1.0, 1.0);
    std::vector<double> w;
    for (std::uint64_t s = 0; w.size() < 20000; ++s) {
        const auto sp = sample_spine(m, 2, 1.0, 0.5, 3.0, s);
        for (std::size_t i = 0; i < sp.size(); ++i) w.push_back(sp.position[2 * i + 1] / std::sqrt(sp.tau[i]));
    }
    const auto r = stats::ks_test(w, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("one-body count moments") {
    const auto m = LevyMeasure::atom(0.5, 1.0);
    CountingBox box{1.0, 0.1, 1.0, 1.0};
    CHECK(one_body_mean(m, 1, box) == doctest::Approx(2.0));
    const Window w = Window::box(1, 1.0, 3.0);
    std::vector<double> f;
    for (std::uint64_t s = 0; s < 100'000; ++s)
        f.push_back(static_cast<double>(one_body_counts(sample_environment(m, w, 0.1, s), box).count));
    const auto sm = stats::summarize(f);
    CHECK(std::abs(sm.mean - 2.0) < 3 * sm.std_error);
    // variance of a Poisson(2) count; its standard error is about sqrt((mu4 - sigma^4) / n)
    const double var_se = std::sqrt((2.0 + 3 * 4.0 - 4.0) / 100'000.0);
    CHECK(std::abs(sm.sd * sm.sd - 2.0) < 3 * var_se);

    CHECK(spine_count_mean(m, 2.0, box) == doctest::Approx(1.0));
    std::vector<double> g;
    for (std::uint64_t s = 0; s < 100'000; ++s)
        g.push_back(static_cast<double>(one_body_counts(sample_spine(m, 1, 2.0, 0.1, 1.0, s), box).count));
    const auto sg = stats::summarize(g);
    CHECK(std::abs(sg.mean - 1.0) < 3 * sg.std_error);
}

TEST_CASE("functionals and guards") {
    const auto env = make_environment(Window::box(1, 1.0, 3.0), 0.1, 0, {0.2, 0.5}, {0.5, 2.5}, {0.7, 0.7});
    CountingBox box{1.0, 0.1, 1.0, 1.0};
    CHECK(evaluate_functional(Functional::one, box, env) == 1.0);
    CHECK(evaluate_functional(Functional::one_body_count, box, env) == 1.0);
    CHECK(evaluate_functional(Functional::one_body_exp, box, env) == doctest::Approx(std::exp(-1.0)));
    CHECK(evaluate_functional(Functional::window_empty, box, env) == 0.0);
    CHECK(functional_from_string("window_empty") == Functional::window_empty);
    CHECK_THROWS_AS((void)functional_from_string("nope"), ConfigError);
    CountingBox wide{5.0, 0.1, 1.0, 1.0};
    CHECK_THROWS((void)one_body_counts(env, wide));
}

TEST_CASE("merged spine atoms stay in the window") {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    const Window w = Window::box(1, 1.0, 0.5);
    const auto env = sample_environment(m, w, 0.5, 1);
    const auto sp = sample_spine(m, 1, 5.0, 0.5, 1.0, 2);
    const auto merged = merge_spine(env, sp);
    CHECK_NOTHROW(merged.validate());
    CHECK(merged.size() >= env.size());
    CHECK(merged.size() <= env.size() + sp.size());
}

TEST_CASE("size-bias identity for the exponential one-body functional") {
    SizeBiasConfig cfg;
    cfg.n = 20000;
    cfg.seed = 5;
    cfg.box = {1.0, 0.5, 2.0, 1.0};
    const auto r = sizebias_identity_check(LevyMeasure::atom(1.0, 1.0), cfg);
    CHECK(std::abs(r.z_score) < 3.0);
    cfg.g = Functional::one;
    const auto one = sizebias_identity_check(LevyMeasure::atom(1.0, 1.0), cfg);
    CHECK(one.rhs == 1.0);
    CHECK(std::abs(one.z_score) < 3.0);
}

}
