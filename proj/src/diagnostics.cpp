#include "levyshe/diagnostics.hpp"

#include "levyshe/chain_kernels.hpp"
#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"
#include "levyshe/polymer.hpp"
#include "levyshe/replicas.hpp"
#include "levyshe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace levyshe {

using nlohmann::json;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

json summary_json(const stats::Summary& s) {
    return {{"n", s.n},           {"mean", s.mean},     {"stderr", s.std_error}, {"median", s.median},
            {"q05", s.q05},       {"q25", s.q25},       {"q75", s.q75},          {"q95", s.q95}};
}

json base_report(const std::string& id, const LevyMeasure& measure) {
    return {{"schema_version", kReportSchemaVersion}, {"experiment", id}, {"measure_kind", measure.kind_name()}};
}

struct Csv {
    std::ostringstream out;
    Csv() { out << std::setprecision(17); }
    template <class... Ts>
    void row(const Ts&... cols) {
        std::size_t k = 0;
        ((out << (k++ ? "," : "") << cols), ...);
        out << '\n';
    }
};

void require_decreasing(const std::vector<double>& a_grid) {
    if (a_grid.empty()) throw DomainError("truncation grid is empty");
    for (std::size_t k = 1; k < a_grid.size(); ++k)
        if (!(a_grid[k] < a_grid[k - 1])) throw DomainError("truncation grid must be strictly decreasing");
    if (!(a_grid.back() > 0.0)) throw DomainError("truncation levels must be > 0");
}

double log_flat_prefactor(const Disorder& disorder, double t) {
    if (std::isinf(disorder.mu)) throw DivergentIntegral("flat initial field needs mu_{1,inf}(1) < inf");
    return -disorder.beta * (disorder.kappa_a + disorder.mu) * t;
}

} // namespace

std::vector<double> flat_initial_field(const Environment& env, const Disorder& disorder, double t,
                                       std::span<const double> grid_points) {
    const auto d = static_cast<std::size_t>(env.dim());
    if (grid_points.size() % d != 0) throw DomainError("grid points have wrong dimension");
    const double pre = log_flat_prefactor(disorder, t);
    const auto last =
        static_cast<std::size_t>(std::lower_bound(env.t.begin(), env.t.end(), t) - env.t.begin());
    const std::span<const double> ts(env.t.data(), last);
    const std::span<const double> xs(env.x.data(), last * d);
    std::vector<double> log_bz(last), log_base(last, 0.0), log_w(last), log_weight(last);
    for (std::size_t j = 0; j < last; ++j)
        log_bz[j] = disorder.beta > 0.0 ? std::log(disorder.beta * env.z[j]) : kNegInf;
    kernels::forward_chain(ts, xs, env.dim(), log_bz, log_base, 0, log_w);
    for (std::size_t j = 0; j < last; ++j) log_weight[j] = log_bz[j] + log_w[j];

    const std::size_t count = grid_points.size() / d;
    std::vector<double> out(count);
#pragma omp parallel for schedule(static)
    for (std::size_t g = 0; g < count; ++g) {
        const double chained =
            kernels::terminal_sum(ts, xs, env.dim(), log_weight, 0, last, t, grid_points.subspan(g * d, d));
        out[g] = std::exp(pre + kernels::log_add(0.0, chained));
    }
    return out;
}

std::vector<double> flat_initial_field_reference(const Environment& env, const Disorder& disorder, double t,
                                                 std::span<const double> grid_points) {
    const auto d = static_cast<std::size_t>(env.dim());
    if (grid_points.size() % d != 0) throw DomainError("grid points have wrong dimension");
    const double pre = log_flat_prefactor(disorder, t);
    std::size_t last = 0;
    while (last < env.size() && env.t[last] < t) ++last;
    const std::size_t count = grid_points.size() / d;
    std::vector<double> out(count);
    std::vector<double> log_back(last);
    for (std::size_t g = 0; g < count; ++g) {
        const auto x = grid_points.subspan(g * d, d);
        // Vbar_j = rho(t - t_j, x - x_j) + beta sum_{i > j} z_i Vbar_i rho(t_i - t_j, x_i - x_j)
        for (std::size_t jj = last; jj-- > 0;) {
            std::vector<double> terms{log_rho_between(t - env.t[jj], env.position(jj), x)};
            for (std::size_t i = jj + 1; i < last; ++i)
                terms.push_back(std::log(disorder.beta * env.z[i]) + log_back[i] +
                                log_rho_between(env.t[i] - env.t[jj], env.position(jj), env.position(i)));
            const double m = *std::max_element(terms.begin(), terms.end());
            double s = 0.0;
            for (double v : terms) s += std::exp(v - m);
            log_back[jj] = m + std::log(s);
        }
        double total = 1.0;
        for (std::size_t j = 0; j < last; ++j) total += disorder.beta * env.z[j] * std::exp(log_back[j]);
        out[g] = std::exp(pre) * total;
    }
    return out;
}

ExperimentReport mass_concentration_report(const LevyMeasure& measure, const MassConcentrationConfig& cfg) {
    const Disorder disorder = Disorder::from_measure(measure, cfg.beta, cfg.a);
    const Grid grid = Grid::cube(cfg.d, cfg.grid_half_width, cfg.grid_cells);
    const auto pts = grid.points();
    const Window window = Window::box(cfg.d, cfg.t, default_half_width(cfg.t, cfg.grid_half_width));
    const double threshold = std::exp(cfg.alpha * cfg.t);

    struct PerEnv {
        double average = 0.0, mass_high = 0.0, volume_high = 0.0;
    };
    const auto rows = map_replicas(cfg.n_env, cfg.seed, [&](std::size_t, std::uint64_t seed) {
        const Environment env = sample_environment(measure, window, cfg.a, seed);
        const auto u = flat_initial_field(env, disorder, cfg.t, pts);
        PerEnv r;
        double total = 0.0, high = 0.0;
        std::size_t high_sites = 0;
        for (double v : u) {
            total += v;
            if (v >= threshold) {
                high += v;
                ++high_sites;
            }
        }
        r.average = total / static_cast<double>(u.size());
        r.mass_high = total > 0.0 ? high / total : 0.0;
        r.volume_high = static_cast<double>(high_sites) / static_cast<double>(u.size());
        return r;
    });

    std::vector<double> avg, mass, vol;
    Csv csv;
    csv.row("env", "site_average", "mass_fraction_high", "volume_fraction_high");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        avg.push_back(rows[i].average);
        mass.push_back(rows[i].mass_high);
        vol.push_back(rows[i].volume_high);
        csv.row(i, rows[i].average, rows[i].mass_high, rows[i].volume_high);
    }
    const auto sa = stats::summarize(avg), sm = stats::summarize(mass), sv = stats::summarize(vol);
    const double markov = std::exp(-cfg.alpha * cfg.t);

    json j = base_report("mass-concentration", measure);
    j["config"] = {{"d", cfg.d},           {"beta", cfg.beta},
                   {"a", cfg.a},           {"t", cfg.t},
                   {"alpha", cfg.alpha},   {"grid_half_width", cfg.grid_half_width},
                   {"grid_cells", cfg.grid_cells}, {"n_env", cfg.n_env},
                   {"seed", cfg.seed}};
    j["spatial_average"] = summary_json(sa);
    j["mass_fraction_high"] = summary_json(sm);
    j["volume_fraction_high"] = summary_json(sv);
    j["threshold"] = threshold;
    j["markov_bound"] = markov;
    j["verdict"] = {{"average_is_one", std::abs(sa.mean - 1.0) <= 3.0 * sa.std_error},
                    {"volume_below_markov_bound", sv.mean <= markov + 3.0 * sv.std_error}};
    j["seeds"] = {{"master", cfg.seed}};
    return {std::move(j), csv.out.str()};
}

ExperimentReport intermittency_report(const LevyMeasure& measure, const IntermittencyConfig& cfg) {
    if (cfg.t_list.empty()) throw DomainError("need at least one time");
    for (std::size_t k = 1; k < cfg.t_list.size(); ++k)
        if (!(cfg.t_list[k] > cfg.t_list[k - 1])) throw DomainError("time list must increase");
    const Disorder disorder = Disorder::from_measure(measure, cfg.beta, cfg.a);
    if (std::isinf(disorder.mu)) throw DivergentIntegral("normalization needs mu_{1,inf}(1) < inf");
    const double t_max = cfg.t_list.back();
    const Window window = Window::box(cfg.d, t_max, default_half_width(t_max));
    const std::size_t m = cfg.t_list.size();

    const auto logs = map_replicas(cfg.n, cfg.seed, [&](std::size_t, std::uint64_t seed) {
        const Environment env = sample_environment(measure, window, cfg.a, seed);
        const auto w = forward_weights(env, cfg.beta);
        std::vector<double> out(m);
        for (std::size_t k = 0; k < m; ++k)
            out[k] = normalized(free_end(w, disorder, cfg.t_list[k]), disorder.mu, cfg.beta).log_value;
        return out;
    });

    std::vector<stats::Summary> half(m), one(m), diff(m > 0 ? m - 1 : 0);
    std::vector<double> v(cfg.n);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = std::exp(0.5 * logs[i][k]);
        half[k] = stats::summarize(v);
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = std::exp(logs[i][k]);
        one[k] = stats::summarize(v);
        if (k + 1 < m) {
            for (std::size_t i = 0; i < cfg.n; ++i) v[i] = std::exp(0.5 * logs[i][k]) - std::exp(0.5 * logs[i][k + 1]);
            diff[k] = stats::summarize(v);
        }
    }

    bool decreasing = m > 1;
    bool control = true;
    json points = json::array();
    Csv csv;
    csv.row("t", "mean_sqrt", "stderr_sqrt", "mean_p1", "stderr_p1", "drop_to_next", "drop_stderr");
    for (std::size_t k = 0; k < m; ++k) {
        json pt = {{"t", cfg.t_list[k]}, {"sqrt_moment", summary_json(half[k])}, {"first_moment", summary_json(one[k])}};
        control = control && std::abs(one[k].mean - 1.0) <= 3.0 * one[k].std_error;
        if (k + 1 < m) {
            const bool strict = diff[k].mean > 3.0 * diff[k].std_error;
            decreasing = decreasing && strict;
            pt["drop_to_next"] = {{"mean", diff[k].mean}, {"stderr", diff[k].std_error}, {"beyond_3sigma", strict}};
            csv.row(cfg.t_list[k], half[k].mean, half[k].std_error, one[k].mean, one[k].std_error, diff[k].mean,
                    diff[k].std_error);
        } else {
            csv.row(cfg.t_list[k], half[k].mean, half[k].std_error, one[k].mean, one[k].std_error, "", "");
        }
        points.push_back(std::move(pt));
    }

    json j = base_report("intermittency", measure);
    j["config"] = {{"d", cfg.d}, {"beta", cfg.beta}, {"a", cfg.a}, {"t_list", cfg.t_list}, {"n", cfg.n},
                   {"seed", cfg.seed}, {"box_half_width", window.half_width}};
    j["points"] = std::move(points);
    j["verdict"] = {{"strong_intermittency_signature", decreasing}, {"first_moment_control_is_one", control}};
    j["seeds"] = {{"master", cfg.seed}};
    return {std::move(j), csv.out.str()};
}

ExperimentReport degeneracy_scan(const LevyMeasure& measure, const DegeneracyConfig& cfg) {
    require_decreasing(cfg.a_grid);
    MomentConfig mc;
    mc.d = cfg.d;
    mc.beta = cfg.beta;
    mc.a = cfg.a_grid.back();
    mc.t = cfg.t;
    mc.x = cfg.x.empty() ? std::vector<double>(static_cast<std::size_t>(cfg.d), 0.0) : cfg.x;
    mc.point_to_point = true;
    mc.window = cfg.window;
    mc.half_width = cfg.half_width;
    const Window window = moment_window(mc);
    const std::size_t m = cfg.a_grid.size();
    std::vector<Disorder> dis;
    for (double a : cfg.a_grid) dis.push_back(Disorder::from_measure(measure, cfg.beta, a));

    struct Row {
        std::vector<double> value;
        std::size_t atoms = 0;
    };
    const auto rows = map_replicas(cfg.n, cfg.seed, [&](std::size_t, std::uint64_t seed) {
        const Environment fine = sample_environment(measure, window, mc.a, seed, cfg.atom_cap);
        Row r;
        r.atoms = fine.size();
        r.value.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            const Environment env = k + 1 == m ? fine : fine.filter_by_jump(cfg.a_grid[k]);
            r.value[k] = point_to_point(env, dis[k], cfg.t, mc.x).value();
        }
        return r;
    });

    std::vector<stats::Summary> s(m);
    std::vector<double> v(cfg.n), atoms(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) atoms[i] = static_cast<double>(rows[i].atoms);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = rows[i].value[k];
        s[k] = stats::summarize(v);
    }
    bool decreasing = m > 1;
    for (std::size_t k = 1; k < m; ++k) decreasing = decreasing && s[k].median < s[k - 1].median;
    bool stable = true;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
            stable = stable && s[k].median >= s[l].q25 && s[k].median <= s[l].q75;

    json levels = json::array();
    Csv csv;
    csv.row("a", "kappa_a", "median", "q25", "q75", "mean", "stderr");
    for (std::size_t k = 0; k < m; ++k) {
        levels.push_back({{"a", cfg.a_grid[k]}, {"kappa_a", dis[k].kappa_a}, {"Z", summary_json(s[k])}});
        csv.row(cfg.a_grid[k], dis[k].kappa_a, s[k].median, s[k].q25, s[k].q75, s[k].mean, s[k].std_error);
    }
    json j = base_report("degeneracy", measure);
    j["config"] = {{"d", cfg.d},           {"beta", cfg.beta}, {"t", cfg.t}, {"x", mc.x}, {"a_grid", cfg.a_grid},
                   {"n", cfg.n},           {"seed", cfg.seed}, {"window", to_string(cfg.window)},
                   {"half_width", cfg.half_width}, {"atom_cap", cfg.atom_cap}};
    j["levels"] = std::move(levels);
    j["atoms_at_finest_level"] = summary_json(stats::summarize(atoms));
    j["measure_violates_nondegeneracy"] = measure.violates_nondegeneracy(cfg.d);
    j["measure_satisfies_nondegeneracy"] = measure.satisfies_nondegeneracy(cfg.d);
    j["verdict"] = {{"medians_strictly_decreasing", decreasing}, {"medians_within_quartile_bands", stable}};
    j["seeds"] = {{"master", cfg.seed}};
    return {std::move(j), csv.out.str()};
}

ExperimentReport truncation_convergence(const LevyMeasure& measure, const TruncationConfig& cfg) {
    require_decreasing(cfg.a_grid);
    if (!(cfg.p > 0.0)) throw DomainError("gap exponent must be > 0");
    MomentConfig mc;
    mc.d = cfg.d;
    mc.beta = cfg.beta;
    mc.a = cfg.a_grid.back();
    mc.t = cfg.t;
    mc.x = cfg.x.empty() ? std::vector<double>(static_cast<std::size_t>(cfg.d), 0.0) : cfg.x;
    mc.point_to_point = true;
    mc.window = cfg.window;
    mc.half_width = cfg.half_width;
    const Window window = moment_window(mc);
    const std::size_t m = cfg.a_grid.size();
    std::vector<Disorder> dis;
    for (double a : cfg.a_grid) dis.push_back(Disorder::from_measure(measure, cfg.beta, a));
    if (std::isinf(dis.front().mu)) throw DivergentIntegral("normalization needs mu_{1,inf}(1) < inf");
    const double log_rho_x = log_rho(cfg.t, mc.x);

    const auto rows = map_replicas(cfg.n, cfg.seed, [&](std::size_t, std::uint64_t seed) {
        const Environment fine = sample_environment(measure, window, mc.a, seed, cfg.atom_cap);
        std::vector<double> y(m);
        for (std::size_t k = 0; k < m; ++k) {
            const Environment env = k + 1 == m ? fine : fine.filter_by_jump(cfg.a_grid[k]);
            const auto v = normalized(point_to_point(env, dis[k], cfg.t, mc.x), dis[k].mu, cfg.beta);
            y[k] = std::exp(v.log_value - log_rho_x);
        }
        return y;
    });

    std::vector<stats::Summary> mean(m), gap(m), drop(m);
    std::vector<double> v(cfg.n);
    auto gap_of = [&](std::size_t i, std::size_t k) { return std::pow(std::abs(rows[i][k] - rows[i][m - 1]), cfg.p); };
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = rows[i][k];
        mean[k] = stats::summarize(v);
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = gap_of(i, k);
        gap[k] = stats::summarize(v);
        if (k + 2 < m) {
            for (std::size_t i = 0; i < cfg.n; ++i) v[i] = gap_of(i, k) - gap_of(i, k + 1);
            drop[k] = stats::summarize(v);
        }
    }
    bool means_ok = true;
    bool gaps_decreasing = m > 2;
    json levels = json::array();
    Csv csv;
    csv.row("a", "mean_scaled", "mean_stderr", "gap", "gap_stderr");
    for (std::size_t k = 0; k < m; ++k) {
        const bool ok = std::abs(mean[k].mean - 1.0) <= 3.0 * mean[k].std_error;
        means_ok = means_ok && ok;
        json lv = {{"a", cfg.a_grid[k]},
                   {"kappa_a", dis[k].kappa_a},
                   {"scaled_mean", summary_json(mean[k])},
                   {"mean_preserved", ok},
                   {"gap", {{"mean", gap[k].mean}, {"stderr", gap[k].std_error}}}};
        if (k + 2 < m) {
            const bool strict = drop[k].mean > 3.0 * drop[k].std_error;
            gaps_decreasing = gaps_decreasing && strict;
            lv["gap_drop_to_next"] = {{"mean", drop[k].mean}, {"stderr", drop[k].std_error}, {"beyond_3sigma", strict}};
        }
        levels.push_back(std::move(lv));
        csv.row(cfg.a_grid[k], mean[k].mean, mean[k].std_error, gap[k].mean, gap[k].std_error);
    }
    json j = base_report("truncation", measure);
    j["config"] = {{"d", cfg.d}, {"beta", cfg.beta}, {"t", cfg.t}, {"x", mc.x}, {"a_grid", cfg.a_grid},
                   {"p", cfg.p}, {"n", cfg.n}, {"seed", cfg.seed}, {"window", to_string(cfg.window)},
                   {"half_width", cfg.half_width}, {"atom_cap", cfg.atom_cap}};
    j["levels"] = std::move(levels);
    j["verdict"] = {{"mean_preserved_at_every_level", means_ok}, {"gaps_decreasing_beyond_3sigma", gaps_decreasing}};
    j["seeds"] = {{"master", cfg.seed}};
    return {std::move(j), csv.out.str()};
}

ExperimentReport box_convergence(const LevyMeasure& measure, const BoxConfig& cfg) {
    const double l0 = default_half_width(cfg.t);
    std::vector<double> ls = cfg.l_grid.empty() ? std::vector<double>{l0 / 4, l0 / 2, l0, 2 * l0} : cfg.l_grid;
    for (std::size_t k = 1; k < ls.size(); ++k)
        if (!(ls[k] > ls[k - 1])) throw DomainError("box grid must increase");
    if (ls.empty() || !(ls.front() > 0.0)) throw DomainError("box half-widths must be > 0");
    const Disorder disorder = Disorder::from_measure(measure, cfg.beta, cfg.a);
    if (std::isinf(disorder.mu)) throw DivergentIntegral("normalization needs mu_{1,inf}(1) < inf");
    const Window outer = Window::box(cfg.d, cfg.t, ls.back());
    const std::size_t m = ls.size();

    const auto rows = map_replicas(cfg.n, cfg.seed, [&](std::size_t, std::uint64_t seed) {
        const Environment big = sample_environment(measure, outer, cfg.a, seed);
        std::vector<double> y(m);
        for (std::size_t k = 0; k < m; ++k) {
            const Environment env = k + 1 == m ? big : big.restrict_to(Window::box(cfg.d, cfg.t, ls[k]));
            y[k] = normalized(free_end(env, disorder, cfg.t), disorder.mu, cfg.beta).value();
        }
        return y;
    });

    std::vector<stats::Summary> s(m), step(m);
    std::vector<double> v(cfg.n);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < cfg.n; ++i) v[i] = rows[i][k];
        s[k] = stats::summarize(v);
        if (k + 1 < m) {
            for (std::size_t i = 0; i < cfg.n; ++i) v[i] = rows[i][k + 1] - rows[i][k];
            step[k] = stats::summarize(v);
        }
    }
    json levels = json::array();
    Csv csv;
    csv.row("L", "mean", "stderr", "relative_change_to_next");
    double change_at_default = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < m; ++k) {
        json lv = {{"L", ls[k]}, {"Zbar", summary_json(s[k])}};
        double rel = std::numeric_limits<double>::quiet_NaN();
        if (k + 1 < m) {
            rel = std::abs(step[k].mean) / s[k].mean;
            lv["relative_change_to_next"] = rel;
            lv["change_to_next"] = {{"mean", step[k].mean}, {"stderr", step[k].std_error}};
            if (std::abs(ls[k] - l0) <= 1e-12 * l0) change_at_default = rel;
            csv.row(ls[k], s[k].mean, s[k].std_error, rel);
        } else {
            csv.row(ls[k], s[k].mean, s[k].std_error, "");
        }
        levels.push_back(std::move(lv));
    }
    if (std::isnan(change_at_default) && m > 1) change_at_default = std::abs(step[m - 2].mean) / s[m - 2].mean;
    json j = base_report("box", measure);
    j["config"] = {{"d", cfg.d}, {"beta", cfg.beta}, {"a", cfg.a}, {"t", cfg.t}, {"l_grid", ls},
                   {"n", cfg.n}, {"seed", cfg.seed}, {"default_L", l0}};
    j["levels"] = std::move(levels);
    j["verdict"] = {{"plateau_below_1e-3", change_at_default < 1e-3},
                    {"relative_change_at_default", change_at_default}};
    j["seeds"] = {{"master", cfg.seed}};
    return {std::move(j), csv.out.str()};
}

} // namespace levyshe
