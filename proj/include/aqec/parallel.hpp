// parallel.hpp
// Index-sweep kernels used by the optimizer restarts, residual grids and
// sampling loops. Each index owns its output slot, so the OpenMP path and
// the serial reference produce bit-identical results; tests compare them
// and the bench tool times them.

#pragma once

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aqec {

enum class ExecMode { serial, parallel };

#ifdef _OPENMP
inline constexpr bool openmp_enabled = true;
#else
inline constexpr bool openmp_enabled = false;
#endif

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n); results[i] = fn(i). The parallel path is a
// plain omp parallel for, the serial path is the reference loop.
template <typename T, typename Fn>
std::vector<T> map_index(ExecMode mode, int n, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(n));
    if (mode == ExecMode::parallel && openmp_enabled) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
#endif
    } else {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    }
    return out;
}

}  // namespace aqec
