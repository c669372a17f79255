#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace lnv {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency; set_thread_count(0) restores the default.
std::size_t thread_count() noexcept;
void set_thread_count(std::size_t n) noexcept;

// Runs body(i) for i in [0, n) across worker threads. Every index is visited
// exactly once; results written per index are therefore independent of the
// thread count. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Cascade summation in a fixed tree order (blocks of 8 summed directly).
double pairwise_sum(std::span<const double> xs) noexcept;
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) noexcept;

}  // namespace lnv
