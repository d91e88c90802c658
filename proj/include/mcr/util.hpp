#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <thread>
#include <vector>

namespace mcr {

/// Diagnostic verbosity from MCRKIT_LOG: unset/0 = quiet, 1 = info, 2 = debug.
inline int log_level() {
    static const int level = [] {
        const char* v = std::getenv("MCRKIT_LOG");
        if (!v || !*v) return 0;
        if (std::strcmp(v, "info") == 0) return 1;
        if (std::strcmp(v, "debug") == 0) return 2;
        return std::atoi(v);
    }();
    return level;
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
    if (log_level() >= 1) {
        std::fprintf(stderr, "[mcrkit] ");
        std::fprintf(stderr, fmt, args...);
        std::fprintf(stderr, "\n");
    }
}

/// Index-parallel map. Results are written by index, so the output is
/// deterministic regardless of scheduling. Runs serially when parallel is
/// off or the range is small.
inline void parallel_for(std::size_t n, bool parallel,
                         const std::function<void(std::size_t)>& body) {
    if (!parallel || n < 4) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = std::min<std::size_t>(hw, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic 64-bit RNG (splitmix64) used by generators and tests so
/// that seeded output is identical across platforms and standard-library
/// versions.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }
};

}  // namespace mcr
