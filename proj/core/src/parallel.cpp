#include "lnv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lnv {

namespace {

std::atomic<std::size_t> g_threads{0};

template <class T>
T cascade(std::span<const T> xs) noexcept {
    if (xs.size() <= 8) {
        T s{};
        for (const T& x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return cascade(xs.first(half)) + cascade(xs.subspan(half));
}

}  // namespace

std::size_t thread_count() noexcept {
    const std::size_t n = g_threads.load(std::memory_order_relaxed);
    if (n != 0) return n;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t n) noexcept { g_threads.store(n, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> xs) noexcept { return cascade(xs); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) noexcept {
    return cascade(xs);
}

}  // namespace lnv
