#pragma once

// Per-prime arithmetic: primality, primitive root, index (discrete log) and
// inverse tables, and the two root-of-unity tables
//   e_p[a]   = e(a/p)       a = 0..p-1
//   e_pm1[k] = e(k/(p-1))   k = 0..p-2
// where e(x) = exp(2 pi i x). Everything else in the library reads these.

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace lnv {

bool is_prime(std::uint64_t n) noexcept;
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept;
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

// Moebius function by trial division. Requires 1 <= n.
int mobius(std::int64_t n);

namespace detail {
// Lazily filled tables derived from a PrimeContext (see characters.cpp).
struct ContextCache {
    std::once_flag gauss_once;
    std::vector<std::complex<double>> gauss;
};
}  // namespace detail

class PrimeContext {
public:
    // Throws Error{TooSmall} for p < 3, Error{NotPrime}, Error{TooLarge}
    // beyond 2^31 (tables are 32-bit).
    explicit PrimeContext(std::uint64_t p);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t generator() const noexcept { return g_; }
    // Set for p = 3: the context is valid but has no even primitive characters.
    bool small_modulus_warning() const noexcept { return p_ < 5; }

    // Unchecked table access; u in [1, p-1].
    std::uint32_t ind(std::uint32_t u) const noexcept { return ind_[u]; }
    std::uint32_t inv(std::uint32_t u) const noexcept { return inv_[u]; }
    // Inverse of ind: pow_g[k] = g^k mod p.
    std::uint32_t pow_g(std::uint32_t k) const noexcept { return pow_g_[k]; }
    const std::complex<double>& e_p(std::uint32_t a) const noexcept { return e_p_[a]; }
    const std::complex<double>& e_pm1(std::uint32_t k) const noexcept { return e_pm1_[k]; }

    std::span<const std::uint32_t> ind_table() const noexcept { return ind_; }
    std::span<const std::uint32_t> inv_table() const noexcept { return inv_; }
    std::span<const std::complex<double>> e_p_table() const noexcept { return e_p_; }
    std::span<const std::complex<double>> e_pm1_table() const noexcept { return e_pm1_; }

    // Least nonnegative residue of n mod p, for any signed n.
    std::uint32_t reduce(std::int64_t n) const noexcept;

    detail::ContextCache& cache() const noexcept { return *cache_; }

private:
    std::uint32_t p_;
    std::uint32_t g_;
    std::vector<std::uint32_t> ind_;
    std::vector<std::uint32_t> inv_;
    std::vector<std::uint32_t> pow_g_;
    std::vector<std::complex<double>> e_p_;
    std::vector<std::complex<double>> e_pm1_;
    std::shared_ptr<detail::ContextCache> cache_;
};

// Smallest primitive root of the prime p, found by testing 2, 3, ... against
// the prime factors of p-1.
std::uint32_t smallest_primitive_root(std::uint32_t p);

// Index of u with respect to ctx.generator(). Throws Error{ZeroResidue} when
// p | u.
std::uint32_t discrete_log(const PrimeContext& ctx, std::int64_t u);

// Modular inverse of u. Throws Error{NonInvertible} when p | u.
std::uint32_t inverse_mod(const PrimeContext& ctx, std::int64_t u);

}  // namespace lnv
