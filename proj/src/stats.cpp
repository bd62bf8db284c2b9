#include "levyshe/stats.hpp"

#include "levyshe/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace levyshe::stats {

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    const double a = v[lo];
    if (lo + 1 >= v.size()) return a;
    const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.std_error = s.sd / std::sqrt(static_cast<double>(s.n));
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double p) {
        const double h = p * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    s.median = q(0.5);
    s.q05 = q(0.05);
    s.q25 = q(0.25);
    s.q75 = q(0.75);
    s.q95 = q(0.95);
    return s;
}

LinearFit weighted_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
    if (x.size() != y.size() || x.size() != sigma.size()) throw DomainError("fit arrays have different lengths");
    if (x.size() < 2) throw DomainError("need at least two points for a line fit");
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(sigma[i] > 0.0)) throw DomainError("fit weights need positive sigma");
        const double w = 1.0 / (sigma[i] * sigma[i]);
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(det > 0.0)) throw DomainError("degenerate abscissae in line fit");
    LinearFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    f.slope_stderr = std::sqrt(sw / det);
    f.points = x.size();
    return f;
}

LinearFit ordinary_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("fit arrays have different lengths");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("need at least two points for a line fit");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("degenerate abscissae in line fit");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = n;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

double chi_square_sf(double statistic, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi-square needs positive degrees of freedom");
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> expected_prob,
                                double min_expected) {
    if (observed.size() != expected_prob.size()) throw DomainError("chi-square arrays have different lengths");
    double n = 0.0;
    for (auto o : observed) n += static_cast<double>(o);
    if (!(n > 0.0)) throw DomainError("chi-square needs observations");

    std::vector<double> obs, expct;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += static_cast<double>(observed[i]);
        e_acc += n * expected_prob[i];
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            expct.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (obs.empty()) {
            obs.push_back(o_acc);
            expct.push_back(e_acc);
        } else {
            obs.back() += o_acc;
            expct.back() += e_acc;
        }
    }
    ChiSquareResult r;
    r.bins = obs.size();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (expct[i] <= 0.0) {
            if (obs[i] > 0.0) {
                r.statistic = std::numeric_limits<double>::infinity();
                r.p_value = 0.0;
                r.dof = static_cast<double>(r.bins) - 1.0;
                return r;
            }
            continue;
        }
        const double dev = obs[i] - expct[i];
        r.statistic += dev * dev / expct[i];
    }
    r.dof = static_cast<double>(r.bins) - 1.0;
    r.p_value = r.dof > 0.0 ? chi_square_sf(r.statistic, r.dof) : 1.0;
    return r;
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (lambda < 1.18) {
        // P(K <= l) = sqrt(2 pi) / l sum_k exp(-(2k-1)^2 pi^2 / (8 l^2))
        double cdf = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double m = 2.0 * k - 1.0;
            const double term = std::exp(-m * m * pi * pi / (8.0 * lambda * lambda));
            cdf += term;
            if (term < 1e-18 * cdf) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * cdf, 0.0, 1.0);
    }
    double sf = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sf += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(sf, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("KS test of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    const double rn = std::sqrt(n);
    return {d, kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d)};
}

double z_score(double a, double sa, double b, double sb) {
    const double s = std::sqrt(sa * sa + sb * sb);
    if (s == 0.0) return a == b ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), a - b);
    return (a - b) / s;
}

} // namespace levyshe::stats
