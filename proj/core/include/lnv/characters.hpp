#pragma once

// Dirichlet characters modulo a prime p, indexed by an exponent j against the
// context's primitive root g:  chi_j(g^k) = e(jk/(p-1)),  chi_j(n) = 0 if p | n.
// chi_j is even iff j is even and primitive iff j != 0; conj(chi_j) = chi_{-j}.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lnv/arith.hpp"

namespace lnv {

struct DirichletCharacter {
    std::uint32_t j = 0;
    std::uint32_t order = 1;  // p - 1

    bool even() const noexcept { return j % 2 == 0; }
    bool principal() const noexcept { return j == 0; }
    bool primitive() const noexcept { return j != 0; }
    DirichletCharacter conj() const noexcept { return {j == 0 ? 0 : order - j, order}; }

    friend bool operator==(const DirichletCharacter&, const DirichletCharacter&) = default;
};

struct GaussSumValue {
    std::complex<double> value;
};

DirichletCharacter make_character(const PrimeContext& ctx, std::int64_t j);

// j = 2, 4, ..., p-3: the (p-3)/2 even primitive characters.
std::vector<DirichletCharacter> enumerate_even_primitive(const PrimeContext& ctx);
std::vector<DirichletCharacter> enumerate_all(const PrimeContext& ctx);

std::complex<double> char_eval(const PrimeContext& ctx, const DirichletCharacter& chi, std::int64_t n);

// Direct O(p) summation of tau_chi = sum_a chi(a) e(a/p).
GaussSumValue gauss_sum(const PrimeContext& ctx, const DirichletCharacter& chi);

// All p-1 Gauss sums indexed by j, via one length-(p-1) DFT of k -> e(g^k/p).
// Computed once per context on first use; the returned span stays valid as
// long as any copy of ctx is alive.
std::span<const std::complex<double>> gauss_sum_table(const PrimeContext& ctx);

// (2/p) sum over even primitive chi of chi(n1) conj(chi(n2)), by enumeration.
// Throws Error{NotCoprime} if p | n1 n2.
std::complex<double> even_pair_average(const PrimeContext& ctx, std::int64_t n1, std::int64_t n2);
// ((p-1)[n1 = +-n2 mod p] - 2) / p
double even_pair_average_closed_form(const PrimeContext& ctx, std::int64_t n1, std::int64_t n2);

// (1/p) sum over even primitive chi of tau_chi chi(n1), by enumeration.
std::complex<double> gauss_twisted_average(const PrimeContext& ctx, std::int64_t n1);
// ((p-1) cos(2 pi inv(n1)/p) + 1) / p
double gauss_twisted_average_closed_form(const PrimeContext& ctx, std::int64_t n1);

// sum_n a[n] chi_j(n) for every j = 0..p-2 at once (a indexed by n >= 0;
// entries with p | n are ignored). One fold by index plus one DFT.
std::vector<std::complex<double>> character_sums_all(const PrimeContext& ctx, std::span<const double> a);
std::vector<std::complex<double>> character_sums_all(const PrimeContext& ctx,
                                                     std::span<const std::complex<double>> a);

}  // namespace lnv
