#pragma once

// Kernel templates shared by the baseline and the AVX2 translation units.
// Everything sits in an anonymous namespace so each unit keeps its own
// instantiations, compiled for its own instruction set.

#include "levyshe/chain_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#ifdef LEVYSHE_HAVE_LIBMVEC
// glibc ships vector variants of exp in libmvec but only declares them under
// -ffast-math; declare them here so the simd loops below can use them.
extern "C" {
#pragma omp declare simd notinbranch
double exp(double) noexcept;
}
#endif

namespace levyshe::kernels {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2 pi dt)^{-d/2}, from inv = 1 / dt
template <int D>
inline double kernel_prefactor(double inv, int d) {
    constexpr double c = 1.0 / kTwoPi;
    if constexpr (D == 1) {
        return std::sqrt(c * inv);
    } else if constexpr (D == 2) {
        return c * inv;
    } else if constexpr (D == 3) {
        return c * inv * std::sqrt(c * inv);
    } else {
        return std::pow(c * inv, 0.5 * d);
    }
}

template <int D>
inline double squared_distance(const double* a, const double* b, int d) {
    const int dim = D > 0 ? D : d;
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double dx = a[k] - b[k];
        r2 += dx * dx;
    }
    return r2;
}

// log sum_i exp(logw_i) rho(t_end - t_i, y - x_i) over i in [first, last).
//
// Pass 1 forms a_i = logw_i - r^2 / (2 dt) and its maximum M; pass 2 sums
// exp(a_i - M) (2 pi dt)^{-d/2}. The dropped prefactor is bounded below by
// (2 pi T)^{-d/2}, so the term attaining M never underflows.
template <int D>
double weighted_kernel_sum(const double* t, const double* x, int d, const double* logw, std::size_t first,
                           std::size_t last, double t_end, const double* y, std::vector<double>& a_buf,
                           std::vector<double>& pref_buf) {
    if (last <= first) return kNegInf;
    const std::size_t n = last - first;
    if (a_buf.size() < n) {
        a_buf.resize(n);
        pref_buf.resize(n);
    }
    const double* tf = t + first;
    const double* xf = x + first * static_cast<std::size_t>(d);
    const double* wf = logw + first;
    double* ab = a_buf.data();
    double* pb = pref_buf.data();
    double m = kNegInf;
#pragma omp simd reduction(max : m)
    for (std::size_t k = 0; k < n; ++k) {
        const double inv = 1.0 / (t_end - tf[k]);
        const double r2 = squared_distance<D>(xf + k * static_cast<std::size_t>(d), y, d);
        const double a = wf[k] - 0.5 * r2 * inv;
        ab[k] = a;
        pb[k] = kernel_prefactor<D>(inv, d);
        m = a > m ? a : m;
    }
    if (m == kNegInf) return kNegInf;
    double sum = 0.0;
#pragma omp simd reduction(+ : sum)
    for (std::size_t k = 0; k < n; ++k) sum += std::exp(ab[k] - m) * pb[k];
    return m + std::log(sum);
}

template <int D>
void forward_chain_impl(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_bz,
                        std::span<const double> log_base, std::size_t first, std::span<double> log_out) {
    const std::size_t n = t.size();
    std::vector<double> logw(n, kNegInf);
    std::vector<double> a_buf;
    std::vector<double> pref_buf;
    a_buf.reserve(n);
    pref_buf.reserve(n);
    for (std::size_t j = 0; j < std::min(first, n); ++j) log_out[j] = kNegInf;
    for (std::size_t j = first; j < n; ++j) {
        const double chained = weighted_kernel_sum<D>(t.data(), x.data(), d, logw.data(), first, j, t[j],
                                                      x.data() + j * static_cast<std::size_t>(d), a_buf, pref_buf);
        const double lv = log_add(log_base[j], chained);
        log_out[j] = lv;
        logw[j] = log_bz[j] + lv;
    }
}

inline void forward_chain_dispatch(std::span<const double> t, std::span<const double> x, int d,
                                   std::span<const double> log_bz, std::span<const double> log_base, std::size_t first,
                                   std::span<double> log_out) {
    switch (d) {
    case 1: forward_chain_impl<1>(t, x, d, log_bz, log_base, first, log_out); break;
    case 2: forward_chain_impl<2>(t, x, d, log_bz, log_base, first, log_out); break;
    case 3: forward_chain_impl<3>(t, x, d, log_bz, log_base, first, log_out); break;
    default: forward_chain_impl<0>(t, x, d, log_bz, log_base, first, log_out); break;
    }
}

inline double terminal_sum_dispatch(std::span<const double> t, std::span<const double> x, int d,
                                    std::span<const double> w, std::size_t first, std::size_t last, double t_end,
                                    std::span<const double> y) {
    std::vector<double> a_buf;
    std::vector<double> pref_buf;
    switch (d) {
    case 1: return weighted_kernel_sum<1>(t.data(), x.data(), d, w.data(), first, last, t_end, y.data(), a_buf, pref_buf);
    case 2: return weighted_kernel_sum<2>(t.data(), x.data(), d, w.data(), first, last, t_end, y.data(), a_buf, pref_buf);
    case 3: return weighted_kernel_sum<3>(t.data(), x.data(), d, w.data(), first, last, t_end, y.data(), a_buf, pref_buf);
    default: return weighted_kernel_sum<0>(t.data(), x.data(), d, w.data(), first, last, t_end, y.data(), a_buf, pref_buf);
    }
}

} // namespace

// AVX2 builds of the two entry points; defined only when that unit is compiled in.
void forward_chain_avx2(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_bz,
                        std::span<const double> log_base, std::size_t first, std::span<double> log_out);
double terminal_sum_avx2(std::span<const double> t, std::span<const double> x, int d, std::span<const double> w,
                         std::size_t first, std::size_t last, double t_end, std::span<const double> y);

} // namespace levyshe::kernels
