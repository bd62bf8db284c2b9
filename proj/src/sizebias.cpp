#include "levyshe/sizebias.hpp"

#include "levyshe/errors.hpp"
#include "levyshe/partition.hpp"
#include "levyshe/replicas.hpp"
#include "levyshe/stats.hpp"

#include <algorithm>
#include <cmath>

namespace levyshe {

SpineRealization sample_spine(const LevyMeasure& measure, int d, double beta, double a, double horizon,
                              std::uint64_t seed) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!(beta >= 0.0) || !(horizon > 0.0) || !(a > 0.0)) throw DomainError("spine needs beta >= 0, T > 0, a > 0");
    SpineRealization s;
    s.d = d;
    s.brownian_seed = stream_seed(seed, 1);
    if (beta == 0.0) return s;
    const double rate = beta * measure.partial_moment(a, kInfinity, 1.0) * horizon;
    if (std::isinf(rate)) throw DivergentIntegral("spine intensity beta mu_{a,inf}(1) T is infinite");
    Rng rng = make_rng(stream_seed(seed, 0));
    const auto n = static_cast<std::size_t>(std::poisson_distribution<long long>(rate)(rng));
    s.tau.resize(n);
    for (auto& v : s.tau) v = horizon * uniform01(rng);
    std::sort(s.tau.begin(), s.tau.end());
    s.zeta.resize(n);
    for (auto& z : s.zeta) z = measure.sample_tilted(a, kInfinity, 1.0, rng);

    Rng path = make_rng(s.brownian_seed);
    std::normal_distribution<double> gauss;
    const auto ud = static_cast<std::size_t>(d);
    s.position.assign(n * ud, 0.0);
    std::vector<double> b(ud, 0.0);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sd = std::sqrt(s.tau[i] - prev);
        for (std::size_t k = 0; k < ud; ++k) {
            b[k] += sd * gauss(path);
            s.position[i * ud + k] = b[k];
        }
        prev = s.tau[i];
    }
    return s;
}

Environment merge_spine(const Environment& env, const SpineRealization& spine) {
    if (spine.d != env.dim()) throw DomainError("spine and environment dimensions differ");
    std::vector<double> t = env.t, x = env.x, z = env.z;
    const auto ud = static_cast<std::size_t>(spine.d);
    for (std::size_t i = 0; i < spine.size(); ++i) {
        const std::span<const double> pos(spine.position.data() + i * ud, ud);
        if (!env.window.contains(spine.tau[i], pos)) continue;
        t.push_back(spine.tau[i]);
        x.insert(x.end(), pos.begin(), pos.end());
        z.push_back(spine.zeta[i]);
    }
    return make_environment(env.window, env.truncation_a, env.seed, std::move(t), std::move(x), std::move(z));
}

std::string to_string(Functional g) {
    switch (g) {
    case Functional::one: return "one";
    case Functional::one_body_exp: return "one_body_exp";
    case Functional::one_body_count: return "one_body_count";
    case Functional::window_empty: return "window_empty";
    }
    return "one";
}

Functional functional_from_string(const std::string& name) {
    if (name == "one") return Functional::one;
    if (name == "one_body_exp") return Functional::one_body_exp;
    if (name == "one_body_count") return Functional::one_body_count;
    if (name == "window_empty") return Functional::window_empty;
    throw ConfigError("unknown functional '" + name +
                      "' (expected one, one_body_exp, one_body_count or window_empty)");
}

namespace {

bool in_counting_box(const CountingBox& box, double t, std::span<const double> x, double z) {
    if (!(t >= 0.0 && t <= box.horizon) || !(z >= box.a_z && z < box.b_z)) return false;
    const double r = box.radius * std::sqrt(box.horizon);
    return std::all_of(x.begin(), x.end(), [r](double c) { return std::abs(c) <= r; });
}

} // namespace

OneBodyStatistic one_body_counts(const Environment& env, const CountingBox& box) {
    if (env.window.shape == Window::Shape::box) {
        const double r = box.radius * std::sqrt(box.horizon);
        for (double c : env.window.center)
            if (std::abs(c) + r > env.window.half_width * (1.0 + 1e-12))
                throw DomainError("counting box exceeds the sampled window");
    }
    if (box.horizon > env.window.horizon * (1.0 + 1e-12)) throw DomainError("counting horizon exceeds the window");
    OneBodyStatistic s{box, 0};
    for (std::size_t i = 0; i < env.size(); ++i)
        if (in_counting_box(box, env.t[i], env.position(i), env.z[i])) ++s.count;
    return s;
}

OneBodyStatistic one_body_counts(const SpineRealization& spine, const CountingBox& box) {
    OneBodyStatistic s{box, 0};
    // the spine count has no spatial constraint: every spine atom sits on the path
    for (std::size_t i = 0; i < spine.size(); ++i)
        if (spine.tau[i] <= box.horizon && spine.zeta[i] >= box.a_z && spine.zeta[i] < box.b_z) ++s.count;
    return s;
}

double evaluate_functional(Functional g, const CountingBox& box, const Environment& env) {
    if (g == Functional::one) return 1.0;
    const auto f = static_cast<double>(one_body_counts(env, box).count);
    switch (g) {
    case Functional::one_body_exp: return std::exp(-f);
    case Functional::one_body_count: return f;
    case Functional::window_empty: return f == 0.0 ? 1.0 : 0.0;
    default: return 1.0;
    }
}

double one_body_mean(const LevyMeasure& measure, int d, const CountingBox& box) {
    if (box.a_z >= box.b_z) return 0.0;
    return measure.tail_mass(box.a_z, box.b_z) * std::pow(2.0 * box.radius * std::sqrt(box.horizon), d) * box.horizon;
}

double spine_count_mean(const LevyMeasure& measure, double beta, const CountingBox& box) {
    if (box.a_z >= box.b_z) return 0.0;
    return beta * measure.partial_moment(box.a_z, box.b_z, 1.0) * box.horizon;
}

SizeBiasReport sizebias_identity_check(const LevyMeasure& measure, const SizeBiasConfig& cfg) {
    if (cfg.n < 2) throw DomainError("need at least two replicas");
    const double hw = cfg.half_width > 0.0 ? cfg.half_width : default_half_width(cfg.t);
    const Window window = Window::box(cfg.d, cfg.t, hw);
    const Disorder disorder = Disorder::from_measure(measure, cfg.beta, cfg.a);
    if (std::isinf(disorder.mu)) throw DivergentIntegral("normalization needs mu_{1,inf}(1) < inf");

    const auto lhs_vals = map_replicas(cfg.n, stream_seed(cfg.seed, 0), [&](std::size_t, std::uint64_t seed) {
        const Environment env = sample_environment(measure, window, cfg.a, seed);
        const double zbar = normalized(free_end(env, disorder, cfg.t), disorder.mu, cfg.beta).value();
        return zbar * evaluate_functional(cfg.g, cfg.box, env);
    });
    const auto rhs_vals = map_replicas(cfg.n, stream_seed(cfg.seed, 1), [&](std::size_t, std::uint64_t seed) {
        const Environment env = sample_environment(measure, window, cfg.a, stream_seed(seed, 0));
        const SpineRealization spine = sample_spine(measure, cfg.d, cfg.beta, cfg.a, cfg.t, stream_seed(seed, 1));
        return evaluate_functional(cfg.g, cfg.box, merge_spine(env, spine));
    });
    const auto l = stats::summarize(lhs_vals);
    const auto r = stats::summarize(rhs_vals);
    SizeBiasReport rep;
    rep.lhs = l.mean;
    rep.lhs_stderr = l.std_error;
    rep.rhs = r.mean;
    rep.rhs_stderr = r.std_error;
    rep.z_score = stats::z_score(l.mean, l.std_error, r.mean, r.std_error);
    rep.n = cfg.n;
    rep.seed = cfg.seed;
    return rep;
}

} // namespace levyshe
