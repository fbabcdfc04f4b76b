#include "ctis/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ctis {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t default_threads() noexcept {
    if (const char* env = std::getenv("CTIS_THREADS")) {
        char* end = nullptr;
        const auto v = std::strtoul(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

std::size_t thread_count() noexcept {
    const auto n = g_override.load(std::memory_order_relaxed);
    if (n > 0) return n;
    static const std::size_t fallback = default_threads();
    return fallback;
}

void set_thread_count(std::size_t n) noexcept { g_override.store(n, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body, std::size_t min_chunk) {
    if (n == 0) return;
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(0, std::min(n, chunk));
}

}  // namespace ctis
