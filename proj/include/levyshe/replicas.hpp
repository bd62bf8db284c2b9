#pragma once

#include "levyshe/random.hpp"

#include <cstddef>
#include <cstdint>
#include <exception>
#include <type_traits>
#include <vector>

namespace levyshe {

// Replica maps: result[i] = f(i, replica_seed(master, i)).
//
// Each replica owns its seed, so the output vector is identical for any thread
// count and schedule; reductions happen afterwards in index order. Exceptions are
// captured per replica and the one with the lowest index is rethrown.

template <class F>
auto map_replicas_serial(std::size_t n, std::uint64_t master, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t, std::uint64_t>;
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i, replica_seed(master, i)));
    return out;
}

template <class F>
auto map_replicas(std::size_t n, std::uint64_t master, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t, std::uint64_t>;
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 0; k < count; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            out[i] = f(i, replica_seed(master, i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace levyshe
