#include "levyshe/polymer.hpp"

#include "levyshe/errors.hpp"
#include "levyshe/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyshe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Index drawn with probability exp(logw[k]) / sum exp(logw); also returns the log-probability.
std::pair<std::size_t, double> pick_categorical(const std::vector<double>& logw, Rng& rng) {
    const double m = *std::max_element(logw.begin(), logw.end());
    if (m == kNegInf) throw DomainError("categorical draw with all-zero weights");
    double total = 0.0;
    for (double v : logw) total += std::exp(v - m);
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t chosen = logw.size() - 1;
    for (std::size_t k = 0; k < logw.size(); ++k) {
        acc += std::exp(logw[k] - m);
        if (target < acc) {
            chosen = k;
            break;
        }
    }
    // rounding can leave `target` just past the last bucket; fall back to the last positive one
    while (logw[chosen] == kNegInf) --chosen;
    return {chosen, logw[chosen] - m - std::log(total)};
}

} // namespace

PinnedSubset sample_pinned_subset(const ChainWeights& w, double horizon, Rng& rng) {
    if (w.env == nullptr) throw DomainError("chain weights are not bound to an environment");
    const Environment& env = *w.env;
    const std::size_t last = w.end_before(horizon);
    PinnedSubset out;

    // last pin: the empty set has weight 1, atom j has weight beta z_j V_j
    std::vector<double> logw{0.0};
    for (std::size_t j = w.first; j < last; ++j) logw.push_back(w.log_weight(j));
    auto [k, lp] = pick_categorical(logw, rng);
    out.log_prob = lp;
    if (k == 0) return out;

    std::size_t j = w.first + k - 1;
    out.atoms.push_back(j);
    while (true) {
        // stop at the start with rho(t_j - s, x_j - x0), or step back to i with beta z_i V_i rho(...)
        logw.assign(1, log_rho_between(env.t[j] - w.s, w.x0, env.position(j)));
        const auto xj = env.position(j);
        for (std::size_t i = w.first; i < j; ++i)
            logw.push_back(w.log_weight(i) + log_rho_between(env.t[j] - env.t[i], env.position(i), xj));
        std::tie(k, lp) = pick_categorical(logw, rng);
        out.log_prob += lp;
        if (k == 0) break;
        j = w.first + k - 1;
        out.atoms.push_back(j);
    }
    std::reverse(out.atoms.begin(), out.atoms.end());
    return out;
}

std::vector<double> interpolate_pins(std::span<const double> start, double s, const std::vector<double>& pin_times,
                                     const std::vector<double>& pin_points, double horizon,
                                     const std::vector<double>& grid, Rng& rng) {
    const std::size_t d = start.size();
    if (pin_points.size() != pin_times.size() * d) throw DomainError("pin arrays have mismatched sizes");
    std::normal_distribution<double> gauss;
    std::vector<double> out(grid.size() * d);
    double cur_t = s;
    std::vector<double> cur(start.begin(), start.end());
    std::size_t p = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double u = grid[g];
        if (u < s || u > horizon * (1.0 + 1e-12)) throw DomainError("time grid must lie in [s, T]");
        if (g > 0 && u < grid[g - 1]) throw DomainError("time grid must be sorted");
        while (p < pin_times.size() && pin_times[p] <= u) {
            cur_t = pin_times[p];
            std::copy_n(pin_points.begin() + static_cast<std::ptrdiff_t>(p * d), d, cur.begin());
            ++p;
        }
        if (u > cur_t) {
            if (p < pin_times.size()) {
                const double tp = pin_times[p];
                const double frac = (u - cur_t) / (tp - cur_t);
                const double sd = std::sqrt((u - cur_t) * (tp - u) / (tp - cur_t));
                for (std::size_t c = 0; c < d; ++c)
                    cur[c] = cur[c] + frac * (pin_points[p * d + c] - cur[c]) + sd * gauss(rng);
            } else {
                const double sd = std::sqrt(u - cur_t);
                for (std::size_t c = 0; c < d; ++c) cur[c] += sd * gauss(rng);
            }
            cur_t = u;
        }
        std::copy(cur.begin(), cur.end(), out.begin() + static_cast<std::ptrdiff_t>(g * d));
    }
    return out;
}

PolymerPath sample_path(const ChainWeights& w, double horizon, const std::vector<double>& grid, Rng& rng) {
    PolymerPath path;
    path.d = w.env->dim();
    path.grid = grid;
    path.pinned = sample_pinned_subset(w, horizon, rng);
    std::vector<double> times, points;
    for (std::size_t j : path.pinned.atoms) {
        times.push_back(w.env->t[j]);
        const auto xj = w.env->position(j);
        points.insert(points.end(), xj.begin(), xj.end());
    }
    path.trajectory = interpolate_pins(w.x0, w.s, times, points, horizon, grid, rng);
    return path;
}

double subset_log_probability(const ChainWeights& w, const Disorder& disorder, double horizon,
                              const std::vector<std::size_t>& subset) {
    const Environment& env = *w.env;
    const PartitionValue total = free_end(w, disorder, horizon);
    double lp = 0.0;
    double prev_t = w.s;
    std::span<const double> prev_x = w.x0;
    for (std::size_t j : subset) {
        if (!(env.t[j] > prev_t) || !(env.t[j] < horizon)) return kNegInf;
        lp += std::log(w.beta * env.z[j]) + log_rho_between(env.t[j] - prev_t, prev_x, env.position(j));
        prev_t = env.t[j];
        prev_x = env.position(j);
    }
    return lp - (total.log_value - total.log_compensator);
}

Grid Grid::cube(int d, double half_width, std::size_t cells_per_axis) {
    if (d < 1 || cells_per_axis < 1 || !(half_width > 0.0)) throw DomainError("invalid grid");
    Grid g;
    g.lo.assign(static_cast<std::size_t>(d), -half_width);
    g.hi.assign(static_cast<std::size_t>(d), half_width);
    g.cells.assign(static_cast<std::size_t>(d), cells_per_axis);
    return g;
}

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (auto c : cells) n *= c;
    return n;
}

double Grid::spacing(int k) const {
    const auto i = static_cast<std::size_t>(k);
    return (hi[i] - lo[i]) / static_cast<double>(cells[i]);
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dim(); ++k) v *= spacing(k);
    return v;
}

std::vector<double> Grid::points() const {
    const auto d = static_cast<std::size_t>(dim());
    const std::size_t n = size();
    std::vector<double> out(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rem = i;
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t idx = rem % cells[k];
            rem /= cells[k];
            out[i * d + k] = lo[k] + (static_cast<double>(idx) + 0.5) * spacing(static_cast<int>(k));
        }
    }
    return out;
}

EndpointDensity endpoint_measure(const ChainWeights& w, const Disorder& disorder, double t, const Grid& grid) {
    if (grid.dim() != w.env->dim()) throw DomainError("grid has wrong dimension");
    const auto pts = grid.points();
    const auto values = field(w, disorder, t, pts);
    const double log_total = free_end(w, disorder, t).log_value;
    EndpointDensity out;
    out.grid = grid;
    out.density.resize(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.density[i] = std::exp(values[i].log_value - log_total);
        sum += out.density[i];
    }
    out.mass = sum * grid.cell_volume();
    if (std::abs(out.mass - 1.0) > kEndpointMassTolerance)
        throw DomainError("endpoint grid captures mass " + std::to_string(out.mass) +
                          "; widen or refine the grid");
    return out;
}

std::vector<double> endpoint_bin_probabilities_d1(const ChainWeights& w, double t, const std::vector<double>& edges) {
    const Environment& env = *w.env;
    if (env.dim() != 1) throw DomainError("exact bin probabilities are for d = 1");
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (!(edges[k] > edges[k - 1])) throw DomainError("bin edges must increase");
    const std::size_t last = w.end_before(t);
    double m = 0.0;
    for (std::size_t j = w.first; j < last; ++j) m = std::max(m, w.log_weight(j));
    double total = std::exp(-m);
    for (std::size_t j = w.first; j < last; ++j) total += std::exp(w.log_weight(j) - m);
    const double log_norm = m + std::log(total);

    std::vector<double> probs(edges.size() + 1, 0.0);
    auto add_gaussian = [&](double weight, double mean, double var) {
        const double sd = std::sqrt(var);
        double prev = 0.0;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const double c = normal_cdf((edges[k] - mean) / sd);
            probs[k] += weight * (c - prev);
            prev = c;
        }
        probs.back() += weight * (1.0 - prev);
    };
    add_gaussian(std::exp(-log_norm), w.x0[0], t - w.s);
    for (std::size_t j = w.first; j < last; ++j)
        add_gaussian(std::exp(w.log_weight(j) - log_norm), env.x[j], t - env.t[j]);
    return probs;
}

double localization_statistic(const EndpointDensity& density, std::size_t k, double radius) {
    const Grid& g = density.grid;
    const int d = g.dim();
    const auto ud = static_cast<std::size_t>(d);
    const double vol = g.cell_volume();
    std::vector<double> mass(density.density.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        mass[i] = density.density[i] * vol;
        total += mass[i];
    }
    if (!(total > 0.0)) return 0.0;

    // offsets (in cells) whose centre lies within `radius` of the ball centre
    std::vector<std::vector<long>> stencil;
    std::vector<long> reach(ud);
    for (std::size_t c = 0; c < ud; ++c)
        reach[c] = static_cast<long>(std::floor(radius / g.spacing(static_cast<int>(c)) + 1e-9));
    std::vector<long> off(ud);
    for (std::size_t c = 0; c < ud; ++c) off[c] = -reach[c];
    while (true) {
        double r2 = 0.0;
        for (std::size_t c = 0; c < ud; ++c) {
            const double dx = static_cast<double>(off[c]) * g.spacing(static_cast<int>(c));
            r2 += dx * dx;
        }
        if (r2 <= radius * radius * (1.0 + 1e-12)) stencil.push_back(off);
        std::size_t c = 0;
        while (c < ud && off[c] == reach[c]) {
            off[c] = -reach[c];
            ++c;
        }
        if (c == ud) break;
        ++off[c];
    }

    const std::size_t n = mass.size();
    std::vector<long> idx(ud);
    auto neighbours = [&](std::size_t centre, auto&& fn) {
        std::size_t rem = centre;
        for (std::size_t c = 0; c < ud; ++c) {
            idx[c] = static_cast<long>(rem % g.cells[c]);
            rem /= g.cells[c];
        }
        for (const auto& o : stencil) {
            std::size_t flat = 0;
            std::size_t stride = 1;
            bool inside = true;
            for (std::size_t c = 0; c < ud; ++c) {
                const long v = idx[c] + o[c];
                if (v < 0 || v >= static_cast<long>(g.cells[c])) {
                    inside = false;
                    break;
                }
                flat += static_cast<std::size_t>(v) * stride;
                stride *= g.cells[c];
            }
            if (inside) fn(flat);
        }
    };

    double captured = 0.0;
    for (std::size_t ball = 0; ball < k; ++ball) {
        double best = -1.0;
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            neighbours(c, [&](std::size_t f) { s += mass[f]; });
            if (s > best) {
                best = s;
                best_c = c;
            }
        }
        if (best <= 0.0) break;
        captured += best;
        neighbours(best_c, [&](std::size_t f) { mass[f] = 0.0; });
    }
    return std::min(1.0, captured / total);
}

double cesaro_localization(const ChainWeights& w, const Disorder& disorder, const std::vector<double>& times,
                           const Grid& grid, std::size_t k, double radius) {
    if (times.empty()) throw DomainError("need at least one time");
    double acc = 0.0;
    for (double t : times) acc += localization_statistic(endpoint_measure(w, disorder, t, grid), k, radius);
    return acc / static_cast<double>(times.size());
}

} // namespace levyshe
