#include "levyshe/heat_kernel.hpp"

#include "chain_kernels_impl.hpp"

namespace levyshe::kernels {

#ifdef LEVYSHE_HAVE_AVX2_KERNEL
namespace {

bool use_avx2() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
}

} // namespace
#endif

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

void forward_chain(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_bz,
                   std::span<const double> log_base, std::size_t first, std::span<double> log_out) {
#ifdef LEVYSHE_HAVE_AVX2_KERNEL
    if (use_avx2()) return forward_chain_avx2(t, x, d, log_bz, log_base, first, log_out);
#endif
    forward_chain_dispatch(t, x, d, log_bz, log_base, first, log_out);
}

void forward_chain_reference(std::span<const double> t, std::span<const double> x, int d,
                             std::span<const double> log_bz, std::span<const double> log_base, std::size_t first,
                             std::span<double> log_out) {
    const std::size_t n = t.size();
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t j = 0; j < n; ++j) {
        if (j < first) {
            log_out[j] = kNegInf;
            continue;
        }
        std::vector<double> terms{log_base[j]};
        for (std::size_t i = first; i < j; ++i)
            terms.push_back(log_bz[i] + log_out[i] +
                            log_rho_between(t[j] - t[i], x.subspan(i * ud, ud), x.subspan(j * ud, ud)));
        const double m = *std::max_element(terms.begin(), terms.end());
        if (m == kNegInf) {
            log_out[j] = kNegInf;
            continue;
        }
        double sum = 0.0;
        for (double v : terms) sum += std::exp(v - m);
        log_out[j] = m + std::log(sum);
    }
}

double terminal_sum(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_weight,
                    std::size_t first, std::size_t last, double t_end, std::span<const double> y) {
#ifdef LEVYSHE_HAVE_AVX2_KERNEL
    if (use_avx2()) return terminal_sum_avx2(t, x, d, log_weight, first, last, t_end, y);
#endif
    return terminal_sum_dispatch(t, x, d, log_weight, first, last, t_end, y);
}

} // namespace levyshe::kernels
