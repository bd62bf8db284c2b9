// Acceptance runner: `acceptance [A1 ... A10]` prints one PASS/FAIL line per criterion
// and exits nonzero if any selected criterion fails.

#include "levyshe/diagnostics.hpp"
#include "levyshe/heat_kernel.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/partition.hpp"
#include "levyshe/polymer.hpp"
#include "levyshe/sizebias.hpp"
#include "levyshe/stats.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace levyshe;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Environment random_env(int d, std::size_t n, const LevyMeasure& m, double a, Rng& rng, double half_width = 1.0) {
    Window w = Window::box(d, 1.0, half_width);
    std::vector<double> t(n), x(n * static_cast<std::size_t>(d)), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.sample_point(rng, t[i], std::span<double>(x).subspan(i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)));
        z[i] = m.sample_jump(a, kInfinity, rng);
    }
    return make_environment(w, a, 0, std::move(t), std::move(x), std::move(z));
}

const std::vector<LevyMeasure>& mixed_measures() {
    static const std::vector<LevyMeasure> ms{LevyMeasure::alpha_stable(1.5), LevyMeasure::atom(1.0, 2.0),
                                             LevyMeasure::exponential_tail(2.0, 0.7),
                                             LevyMeasure::mixture({{0.6, 1.0}, {3.0, 0.2}}),
                                             LevyMeasure::power_tail(1.2, 0.1, 5.0)};
    return ms;
}

// DP against exhaustive subset enumeration.
Outcome a1() {
    Timer timer;
    Rng rng = make_rng(101);
    double worst = 0.0;
    const std::array betas{0.5, 1.0, 2.0};
    for (int k = 0; k < 200; ++k) {
        const int d = 1 + k % 3;
        const auto& m = mixed_measures()[static_cast<std::size_t>(k) % mixed_measures().size()];
        const auto n = static_cast<std::size_t>(std::floor(uniform01(rng) * 13.0));
        const auto env = random_env(d, n, m, 0.5, rng);
        const auto dis = Disorder::from_measure(m, betas[static_cast<std::size_t>(k / 3) % 3], 0.5);
        std::vector<double> y(static_cast<std::size_t>(d));
        for (auto& c : y) c = 2.0 * uniform01(rng) - 1.0;
        const double t = 0.5 + 0.5 * uniform01(rng);
        const auto w = forward_weights(env, dis.beta);
        worst = std::max(worst, rel_diff(point_to_point(w, dis, t, y).value(), brute_force_partition(env, dis, 0.0, {}, t, y)));
        worst = std::max(worst, rel_diff(free_end(w, dis, t).value(), brute_force_partition(env, dis, 0.0, {}, t, {})));
    }
    const double secs = timer.seconds();
    return {worst <= 1e-12 && secs < 10.0, "max_rel_err=" + fmt(worst) + " runtime_s=" + fmt(secs, 3)};
}

// Nested quadrature of prod (dt_i)^{zeta_i - 1} over the ordered simplex in [0, t], written in
// the remaining length r: F_i(r) = int_0^r s^{zeta_i - 1} F_{i+1}(r - s) ds. tanh-sinh passes the
// distance to the nearer endpoint, which keeps both singular factors exact.
double nested_simplex(const std::vector<double>& zeta, double t) {
    boost::math::quadrature::tanh_sinh<double> ts;
    std::function<double(std::size_t, double)> f = [&](std::size_t i, double r) -> double {
        if (i + 1 == zeta.size()) return std::pow(r, zeta[i] - 1.0);
        if (r <= 0.0) return 0.0;
        return ts.integrate(
            [&](double s, double sc) {
                const double left = sc < 0 ? -sc : s, right = sc < 0 ? r - s : sc;
                if (left <= 0.0 || right <= 0.0) return 0.0;  // underflowed abscissa
                return std::pow(left, zeta[i] - 1.0) * f(i + 1, right);
            },
            0.0, r);
    };
    return f(0, t);
}

Outcome a2() {
    const std::vector<double> half{0.5, 0.5, 0.5};
    const double err0 = std::abs(dirichlet_simplex_integral(half, 1.0) - 2.0 * std::numbers::pi);
    Rng rng = make_rng(202);
    double worst = 0.0;
    for (int c = 0; c < 12; ++c) {
        const std::size_t k = static_cast<std::size_t>(c % 4);  // 0..3 pins, k + 1 exponents
        std::vector<double> zeta(k + 1);
        for (auto& z : zeta) z = 0.4 + 2.0 * uniform01(rng);
        const double t = 0.5 + 1.5 * uniform01(rng);
        worst = std::max(worst, rel_diff(dirichlet_simplex_integral(zeta, t), nested_simplex(zeta, t)));
    }
    return {err0 <= 1e-10 && worst <= 1e-6, "abs_err_2pi=" + fmt(err0) + " max_rel_err_vs_quadrature=" + fmt(worst)};
}

MomentConfig p2p_atom_config(double beta, double t, std::size_t n, std::uint64_t seed) {
    MomentConfig cfg;
    cfg.d = 1;
    cfg.beta = beta;
    cfg.a = 0.5;
    cfg.t = t;
    cfg.p = 2.0;
    cfg.n = n;
    cfg.seed = seed;
    cfg.point_to_point = true;
    cfg.x = {0.0};
    cfg.window = WindowPolicy::bridge;
    return cfg;
}

Outcome a3() {
    Timer timer;
    double worst = 0.0;
    for (double x = 0.0; x <= 20.0 + 1e-12; x += 0.05) {
        const double t = 4.0 * x * x;  // beta = mu2 = 1
        const double s = second_moment_series_d1(1.0, 1.0, t);
        const double c = second_moment_closed_d1(1.0, 1.0, t);
        worst = std::max(worst, std::isfinite(c) ? rel_diff(s, c)
                                                 : std::abs(std::log(s) - log_second_moment_closed_d1(1.0, 1.0, t)));
    }
    const auto e = mc_moment(LevyMeasure::atom(1.0, 1.0), p2p_atom_config(1.0, 0.5, 100'000, 303));
    const double exact = exact_second_moment_d1(1.0, 1.0, 0.5);
    const double z = (e.mean - exact) / e.std_error;
    const double secs = timer.seconds();
    return {worst <= 1e-10 && std::abs(z) < 3.0 && secs < 300.0,
            "series_vs_closed_max_rel=" + fmt(worst) + " mc=" + fmt(e.mean) + "+-" + fmt(e.std_error) +
                " exact=" + fmt(exact) + " z=" + fmt(z, 3) + " runtime_s=" + fmt(secs, 3)};
}

double log_exact_slope(double beta, double lo, double hi) {
    std::vector<double> ts, ys;
    for (int k = 0; k <= 150; ++k) {
        const double t = lo + (hi - lo) * k / 150.0;
        ts.push_back(t);
        ys.push_back(log_second_moment_closed_d1(beta, 1.0, t));
    }
    return stats::ordinary_line(ts, ys).slope;
}

Outcome a4() {
    // (a) growth rate of the exact second moment against the asymptotic value
    const double beta_a = 0.3;
    const double target = std::pow(beta_a, 4) / 4.0;
    const double slope = log_exact_slope(beta_a, 50.0, 200.0);
    const bool ok_a = std::abs(slope - target) <= 0.02 * target;
    const double slope_far = log_exact_slope(beta_a, 5e4, 2e5);

    // (b) Monte Carlo point-to-point slope against the exact slope on the same grid and weights
    const std::vector<double> grid{2.0, 4.0, 8.0};
    const auto r = lyapunov_estimate(LevyMeasure::atom(1.0, 1.0), p2p_atom_config(1.0, 2.0, 100'000, 404), grid, 100'000);
    std::vector<double> ts, ys, sig;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!r.used[k]) continue;
        ts.push_back(grid[k]);
        ys.push_back(log_second_moment_closed_d1(1.0, 1.0, grid[k]));
        sig.push_back(r.per_t[k].std_error / r.per_t[k].mean);
    }
    const double analytic = ts.size() >= 2 ? stats::weighted_line(ts, ys, sig).slope : std::nan("");
    const bool ok_b = std::abs(r.gamma_hat - analytic) <= 3.0 * r.slope_stderr;

    std::string detail = "(a) slope[50,200]=" + fmt(slope) + " target=" + fmt(target) + " rel_err=" +
                         fmt(std::abs(slope - target) / target, 3) + (ok_a ? " ok" : " FAIL") +
                         " [info: slope[5e4,2e5]=" + fmt(slope_far) + " rel_err=" +
                         fmt(std::abs(slope_far - target) / target, 3) + "]; (b) mc_slope=" + fmt(r.gamma_hat) + "+-" +
                         fmt(r.slope_stderr) + " exact_slope=" + fmt(analytic) + " points=" +
                         std::to_string(r.fitted_points) + (ok_b ? " ok" : " FAIL");
    return {ok_a && ok_b, detail};
}

Outcome a5() {
    const auto atom = LevyMeasure::atom(1.0, 1.0);
    bool ok = true;
    std::string detail;
    struct Case {
        int d;
        bool p2p;
        std::vector<double> x;
    };
    const std::vector<Case> cases{{1, false, {}}, {1, true, {0.5}}, {2, false, {}}, {2, true, {0.3, -0.4}}};
    std::uint64_t seed = 500;
    for (const auto& c : cases) {
        MomentConfig cfg;
        cfg.d = c.d;
        cfg.a = 0.5;
        cfg.t = 1.0;
        cfg.n = 100'000;
        cfg.seed = ++seed;
        cfg.point_to_point = c.p2p;
        cfg.x = c.x;
        if (c.p2p) cfg.window = WindowPolicy::bridge;
        const auto e = mc_moment(atom, cfg);
        const double z = (e.mean - 1.0) / e.std_error;
        ok = ok && std::abs(z) < 3.0;
        detail += "d" + std::to_string(c.d) + (c.p2p ? "_p2p/rho" : "_free") + "=" + fmt(e.mean) + "(z=" + fmt(z, 3) + ") ";
    }
    TruncationConfig tc;
    tc.n = 2000;
    tc.seed = 510;
    const auto r = truncation_convergence(LevyMeasure::power_tail(1.5, 1e-6, 1.0), tc);
    const bool tr = r.json["verdict"]["mean_preserved_at_every_level"].get<bool>();
    detail += "truncation_levels_mean_preserved=" + std::string(tr ? "true" : "false");
    return {ok && tr, detail};
}

Outcome a6() {
    SizeBiasConfig cfg;
    cfg.d = 1;
    cfg.beta = 1.0;
    cfg.a = 0.5;
    cfg.t = 1.0;
    cfg.n = 100'000;
    cfg.seed = 606;
    cfg.g = Functional::one_body_exp;
    cfg.box = {1.0, 0.5, 2.0, 1.0};
    const auto r = sizebias_identity_check(LevyMeasure::atom(1.0, 1.0), cfg);
    const bool ok_id = std::abs(r.z_score) < 3.0;

    // one-body exact moments
    const auto m = LevyMeasure::atom(0.5, 1.0);
    const CountingBox box{1.0, 0.1, 1.0, 1.0};
    const double mean_f = one_body_mean(m, 1, box);
    const Window w = Window::box(1, 1.0, 2.0);
    std::vector<double> f, g;
    for (std::uint64_t s = 0; s < 100'000; ++s) {
        f.push_back(static_cast<double>(one_body_counts(sample_environment(m, w, 0.1, replica_seed(607, s)), box).count));
        g.push_back(static_cast<double>(one_body_counts(sample_spine(m, 1, 2.0, 0.1, 1.0, replica_seed(608, s)), box).count));
    }
    const auto sf = stats::summarize(f), sg = stats::summarize(g);
    const double var_se = std::sqrt((mean_f + 2.0 * mean_f * mean_f) / static_cast<double>(f.size()));
    const double spine_mean = spine_count_mean(m, 2.0, box);
    const bool ok_f = std::abs(sf.mean - mean_f) < 3 * sf.std_error && std::abs(sf.sd * sf.sd - mean_f) < 3 * var_se;
    const bool ok_g = std::abs(sg.mean - spine_mean) < 3 * sg.std_error;
    return {ok_id && ok_f && ok_g, "identity lhs=" + fmt(r.lhs) + " rhs=" + fmt(r.rhs) + " z=" + fmt(r.z_score, 3) +
                                      "; E[f]=" + fmt(sf.mean) + " Var[f]=" + fmt(sf.sd * sf.sd) + " (exact " +
                                      fmt(mean_f) + "); spine E=" + fmt(sg.mean) + " (exact " + fmt(spine_mean) + ")"};
}

Outcome a7() {
    Rng env_rng = make_rng(707);
    double min_subset_p = 1.0, min_endpoint_p = 1.0;
    for (int e = 0; e < 20; ++e) {
        const auto& m = mixed_measures()[static_cast<std::size_t>(e) % mixed_measures().size()];
        const std::size_t n = 1 + static_cast<std::size_t>(e % 10);
        const auto env = random_env(1, n, m, 0.5, env_rng);
        const auto dis = Disorder::from_measure(m, 1.0, 0.5);
        const auto w = forward_weights(env, 1.0);
        const std::size_t outcomes = std::size_t{1} << n;
        std::vector<double> probs(outcomes);
        for (std::size_t mask = 0; mask < outcomes; ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t k = 0; k < n; ++k)
                if (mask >> k & 1U) s.push_back(k);
            probs[mask] = std::exp(subset_log_probability(w, dis, 1.0, s));
        }
        std::vector<double> edges;
        for (int k = 0; k <= 18; ++k) edges.push_back(-3.0 + k / 3.0);
        const auto bins = endpoint_bin_probabilities_d1(w, 1.0, edges);

        Rng rng = make_rng(replica_seed(708, static_cast<std::uint64_t>(e)));
        std::vector<std::uint64_t> counts(outcomes, 0), ends(bins.size(), 0);
        const std::vector<double> grid{1.0};
        for (int i = 0; i < 100'000; ++i) {
            const auto path = sample_path(w, 1.0, grid, rng);
            std::size_t mask = 0;
            for (std::size_t k : path.pinned.atoms) mask |= std::size_t{1} << k;
            ++counts[mask];
            const auto it = std::upper_bound(edges.begin(), edges.end(), path.at(0)[0]);
            ++ends[static_cast<std::size_t>(it - edges.begin())];
        }
        min_subset_p = std::min(min_subset_p, stats::chi_square_test(counts, probs).p_value);
        min_endpoint_p = std::min(min_endpoint_p, stats::chi_square_test(ends, bins).p_value);
    }
    return {min_subset_p > 1e-3 && min_endpoint_p > 1e-3,
            "min_subset_p=" + fmt(min_subset_p, 4) + " min_endpoint_p=" + fmt(min_endpoint_p, 4) + " (20 environments)"};
}

Outcome a8() {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    IntermittencyConfig ic;
    ic.d = 1;
    ic.beta = 1.0;
    ic.a = 0.5;
    ic.t_list = {2.0, 4.0, 8.0};
    ic.n = 200'000;
    ic.seed = 808;
    const auto r = intermittency_report(m, ic);
    const bool dec = r.json["verdict"]["strong_intermittency_signature"].get<bool>();
    std::string detail = "E[Zbar^1/2]:";
    for (const auto& p : r.json["points"]) detail += " t=" + fmt(p["t"].get<double>()) + ":" + fmt(p["sqrt_moment"]["mean"].get<double>());

    MomentConfig mc;
    mc.d = 1;
    mc.a = 0.5;
    mc.n = 200'000;
    mc.seed = 809;
    const auto g = multiplicativity_test(m, mc, 2.0, 2.0, 0.5);
    detail += "; super gap=" + fmt(g.gap) + "+-" + fmt(g.gap_stderr);
    return {dec && g.consistent, detail};
}

Outcome a9() {
    Timer timer;
    DegeneracyConfig cfg;
    cfg.d = 3;
    cfg.beta = 1.0;
    cfg.t = 1.0;
    cfg.a_grid = {0.2, 0.1, 0.05};
    cfg.n = 2000;
    cfg.seed = 909;
    const auto r = degeneracy_scan(LevyMeasure::alpha_stable(1.9), cfg);
    const bool dec = r.json["verdict"]["medians_strictly_decreasing"].get<bool>();
    std::string detail = "d3 medians:";
    for (const auto& lv : r.json["levels"]) detail += " " + fmt(lv["Z"]["median"].get<double>());

    cfg.d = 1;
    cfg.seed = 910;
    const auto c = degeneracy_scan(LevyMeasure::alpha_stable(1.5), cfg);
    const bool stable = c.json["verdict"]["medians_within_quartile_bands"].get<bool>();
    detail += "; d1 control medians:";
    for (const auto& lv : c.json["levels"]) detail += " " + fmt(lv["Z"]["median"].get<double>());
    const double secs = timer.seconds();
    detail += " runtime_s=" + fmt(secs, 4);
    return {dec && stable && secs < 900.0, detail};
}

// Atoms spread over the default window, so the field stays at realistic magnitudes
// and the absolute tolerance measures the quadrature rather than roundoff in Z.
Outcome a10() {
    Rng rng = make_rng(1010);
    double worst = 0.0, largest = 0.0;
    for (int e = 0; e < 100; ++e) {
        const int d = 1 + e % 3;
        const auto& m = mixed_measures()[static_cast<std::size_t>(e) % mixed_measures().size()];
        const auto env = random_env(d, 50, m, 0.5, rng, default_half_width(1.0));
        const auto dis = Disorder::from_measure(m, 0.5 + 0.5 * (e % 2), 0.5);
        worst = std::max(worst, mild_residual_free_end(env, dis, 1.0, 10'000));
        largest = std::max(largest, free_end(env, dis, 1.0).value());
    }
    return {worst <= 1e-6, "max_residual=" + fmt(worst) + " max_Z=" + fmt(largest)};
}

} // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<Outcome()>> criteria{
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
        {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) selected.emplace_back(argv[i]);
    if (selected.empty()) selected = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"};

    bool all = true;
    for (const auto& name : selected) {
        const auto it = criteria.find(name);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << name << '\n';
            return 2;
        }
        Outcome o;
        try {
            o = it->second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
