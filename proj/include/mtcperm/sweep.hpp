#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtcperm {

struct Exec {
    bool parallel = true;
    int threads = 0;  // 0: runtime default
};

struct MaxResult {
    double value = 0.0;
    std::int64_t index = -1;  // smallest index attaining the maximum
};

inline void merge_max(MaxResult& acc, const MaxResult& r) {
    if (r.index < 0) return;
    if (acc.index < 0 || r.value > acc.value || (r.value == acc.value && r.index < acc.index)) acc = r;
}

// serial reference sweep
template <class F>
MaxResult sweep_max_serial(std::int64_t n, F&& f) {
    MaxResult acc;
    for (std::int64_t i = 0; i < n; ++i) {
        double v = f(i);
        if (v < 0) continue;  // negative: index not applicable
        merge_max(acc, {v, i});
    }
    return acc;
}

template <class F>
MaxResult sweep_max_parallel(std::int64_t n, F&& f, int threads = 0) {
#ifdef _OPENMP
    MaxResult acc;
    int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
    {
        MaxResult local;
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) {
            double v = f(i);
            if (v >= 0) merge_max(local, {v, i});
        }
#pragma omp critical
        merge_max(acc, local);
    }
    return acc;
#else
    (void)threads;
    return sweep_max_serial(n, std::forward<F>(f));
#endif
}

template <class F>
MaxResult sweep_max(std::int64_t n, F&& f, const Exec& ex) {
    return ex.parallel ? sweep_max_parallel(n, std::forward<F>(f), ex.threads)
                       : sweep_max_serial(n, std::forward<F>(f));
}

// plain parallel-for over independent items
template <class F>
void parallel_for(std::int64_t n, F&& f, const Exec& ex) {
#ifdef _OPENMP
    if (ex.parallel) {
        int nt = ex.threads > 0 ? ex.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

}  // namespace mtcperm
