#include "thetaforge/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thetaforge::par {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int t) { g_threads.store(t < 0 ? 0 : t); }

int threads() {
    int t = g_threads.load();
#ifdef _OPENMP
    if (t == 0) return omp_get_max_threads();
    return t;
#else
    return t == 0 ? 1 : t;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

void for_blocks(std::size_t n, std::size_t nblocks,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (nblocks == 0) nblocks = 1;
    if (nblocks > n) nblocks = n;
    const std::size_t base = n / nblocks, rem = n % nblocks;
    auto range = [&](std::size_t b) {
        std::size_t begin = b * base + std::min(b, rem);
        std::size_t len = base + (b < rem ? 1 : 0);
        return std::pair<std::size_t, std::size_t>(begin, begin + len);
    };
#ifdef _OPENMP
    const int nt = threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        auto [lo, hi] = range(static_cast<std::size_t>(b));
        fn(static_cast<std::size_t>(b), lo, hi);
    }
#else
    for (std::size_t b = 0; b < nblocks; ++b) {
        auto [lo, hi] = range(b);
        fn(b, lo, hi);
    }
#endif
}

}  // namespace thetaforge::par
