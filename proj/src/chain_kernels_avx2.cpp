// Same kernels as chain_kernels.cpp, compiled with -mavx2 -mfma; chosen at runtime.

#include "chain_kernels_impl.hpp"

namespace levyshe::kernels {

void forward_chain_avx2(std::span<const double> t, std::span<const double> x, int d, std::span<const double> log_bz,
                        std::span<const double> log_base, std::size_t first, std::span<double> log_out) {
    forward_chain_dispatch(t, x, d, log_bz, log_base, first, log_out);
}

double terminal_sum_avx2(std::span<const double> t, std::span<const double> x, int d, std::span<const double> w,
                         std::size_t first, std::size_t last, double t_end, std::span<const double> y) {
    return terminal_sum_dispatch(t, x, d, w, first, last, t_end, y);
}

} // namespace levyshe::kernels
