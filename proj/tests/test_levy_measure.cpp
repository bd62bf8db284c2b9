#include "levyshe/errors.hpp"
#include "levyshe/levy_measure.hpp"
#include "levyshe/stats.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace levyshe;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

} // namespace

TEST_SUITE("levy_measure") {

TEST_CASE("partial moments of the alpha-stable measure") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    CHECK(m.partial_moment(0.01, 1.0, 1.0) == doctest::Approx(27.0).epsilon(1e-12));
    CHECK(m.compensator(0.01) == doctest::Approx(27.0).epsilon(1e-12));
    CHECK(m.tail_mass(0.04) == doctest::Approx(125.0).epsilon(1e-12));
    // independent check by quadrature of the density
    const double q = quad([](double z) { return 1.5 * std::pow(z, -1.5); }, 0.01, 1.0);
    CHECK(m.partial_moment(0.01, 1.0, 1.0) == doctest::Approx(q).epsilon(1e-10));
    CHECK(m.partial_moment(0.3, 2.0, 0.7) ==
          doctest::Approx(quad([](double z) { return 1.5 * std::pow(z, -1.8); }, 0.3, 2.0)).epsilon(1e-10));
}

TEST_CASE("divergent integrals throw") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    CHECK_THROWS_AS((void)m.partial_moment(1.0, kInfinity, 1.5), DivergentIntegral);
    CHECK_THROWS_AS((void)m.partial_moment(0.0, 1.0, 1.0), DivergentIntegral);
    CHECK_NOTHROW((void)m.mean_large_jumps());
    CHECK(m.mean_large_jumps() == doctest::Approx(3.0));
}

TEST_CASE("atomic and mixture measures") {
    const auto a = LevyMeasure::atom(1.0, 2.0);
    CHECK(a.partial_moment(0.5, kInfinity, 2.0) == doctest::Approx(2.0));
    CHECK(a.partial_moment(0.5, 1.0, 1.0) == 0.0);  // half-open interval
    CHECK(a.tail_mass(1.0) == doctest::Approx(2.0));
    CHECK(a.compensator(0.5) == 0.0);
    const auto mix = LevyMeasure::mixture({{0.5, 1.0}, {2.0, 0.25}});
    CHECK(mix.partial_moment(0.1, kInfinity, 1.0) == doctest::Approx(0.5 + 0.5));
    CHECK(mix.compensator(0.1) == doctest::Approx(0.5));
}

TEST_CASE("exponential tail quadrature matches the incomplete gamma closed form") {
    const auto m = LevyMeasure::exponential_tail(2.0, 0.5);
    // mu_{a,b}(p) = rate * scale^p * (Gamma(p+1, a/s) - Gamma(p+1, b/s))
    const double expected = 2.0 * 0.25 * (std::tgamma(3.0) * (std::exp(-0.2) * (1 + 0.2 + 0.02) - std::exp(-6.0) * (1 + 6 + 18)));
    CHECK(m.partial_moment(0.1, 3.0, 2.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(m.tail_mass(0.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("conditional mean of alpha-stable jumps") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    Rng rng = make_rng(11);
    const std::size_t n = 1'000'000;
    std::vector<double> draws(n);
    for (auto& v : draws) v = m.sample_jump(0.04, kInfinity, rng);
    const auto s = stats::summarize(draws);
    const double target = 3.0 * (std::pow(0.04, -0.5)) / 125.0;
    CHECK(target == doctest::Approx(0.12).epsilon(1e-12));
    // heavy tail: the variance is infinite, so compare with a generous multiple of the stderr
    CHECK(std::abs(s.mean - target) < 5 * s.std_error);
}

TEST_CASE("samplers follow the conditional law (KS)") {
    const auto m = LevyMeasure::power_tail(1.2, 0.1, 5.0);
    for (double tilt : {0.0, 1.0}) {
        Rng rng = make_rng(7 + static_cast<std::uint64_t>(tilt));
        std::vector<double> draws(20000);
        for (auto& v : draws) v = m.sample_tilted(0.2, 3.0, tilt, rng);
        // CDF of z^{tilt - 2.2} on [0.2, 3) by direct antidifferentiation
        const double e = tilt - 1.2;
        const auto r = stats::ks_test(draws, [&](double z) {
            if (z <= 0.2) return 0.0;
            if (z >= 3.0) return 1.0;
            return (std::pow(z, e) - std::pow(0.2, e)) / (std::pow(3.0, e) - std::pow(0.2, e));
        });
        CHECK(r.p_value > 1e-3);
    }
}

TEST_CASE("size-biased jumps on [1, inf) have density proportional to z^-1.5") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    Rng rng = make_rng(3);
    std::vector<double> draws(20000);
    for (auto& v : draws) v = m.sample_tilted(1.0, kInfinity, 1.0, rng);
    const auto r = stats::ks_test(draws, [](double z) { return z <= 1.0 ? 0.0 : 1.0 - 1.0 / std::sqrt(z); });
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("quantile inverts the conditional cdf") {
    const auto m = LevyMeasure::exponential_tail(1.0, 2.0);
    for (double u : {0.05, 0.3, 0.77, 0.999}) {
        const double z = m.quantile(0.1, 8.0, 1.0, u);
        CHECK(m.conditional_cdf(0.1, 8.0, 1.0, z) == doctest::Approx(u).epsilon(1e-8));
    }
}

TEST_CASE("construction guards") {
    CHECK_THROWS((void)LevyMeasure::alpha_stable(2.5));
    CHECK_THROWS((void)LevyMeasure::atom(-1.0, 1.0));
    // z^2 not integrable at 0: rejected unless flagged
    CHECK_THROWS((void)LevyMeasure::power_tail(2.5, 0.0, 1.0));
    CHECK_NOTHROW((void)LevyMeasure::power_tail(2.5, 0.0, 1.0, true));
    CHECK(LevyMeasure::alpha_stable(1.9).violates_nondegeneracy(3));
    CHECK_FALSE(LevyMeasure::alpha_stable(1.5).violates_nondegeneracy(1));
    CHECK(LevyMeasure::alpha_stable(1.5).satisfies_nondegeneracy(1));
}

}
