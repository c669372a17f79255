#include "lnv/characters.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lnv/dft.hpp"
#include "lnv/error.hpp"
#include "lnv/parallel.hpp"

namespace lnv {

namespace {

void require_coprime(const PrimeContext& ctx, std::int64_t n, const char* name) {
    if (ctx.reduce(n) == 0)
        throw Error(ErrorCode::NotCoprime, std::string(name) + " = " + std::to_string(n) + " is divisible by p");
}

template <class T>
std::vector<std::complex<double>> fold_and_transform(const PrimeContext& ctx, std::span<const T> a) {
    const std::uint32_t p = ctx.p();
    std::vector<std::complex<double>> folded(p - 1);
    for (std::size_t n = 1; n < a.size(); ++n) {
        const std::uint32_t r = static_cast<std::uint32_t>(n % p);
        if (r == 0) continue;
        folded[ctx.ind(r)] += a[n];
    }
    return dft(folded, DftSign::Positive);
}

}  // namespace

DirichletCharacter make_character(const PrimeContext& ctx, std::int64_t j) {
    const std::int64_t order = ctx.p() - 1;
    std::int64_t r = j % order;
    if (r < 0) r += order;
    return {static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(order)};
}

std::vector<DirichletCharacter> enumerate_even_primitive(const PrimeContext& ctx) {
    std::vector<DirichletCharacter> out;
    const std::uint32_t order = ctx.p() - 1;
    for (std::uint32_t j = 2; j < order; j += 2) out.push_back({j, order});
    return out;
}

std::vector<DirichletCharacter> enumerate_all(const PrimeContext& ctx) {
    std::vector<DirichletCharacter> out;
    const std::uint32_t order = ctx.p() - 1;
    out.reserve(order);
    for (std::uint32_t j = 0; j < order; ++j) out.push_back({j, order});
    return out;
}

std::complex<double> char_eval(const PrimeContext& ctx, const DirichletCharacter& chi, std::int64_t n) {
    const std::uint32_t r = ctx.reduce(n);
    if (r == 0) return {0.0, 0.0};
    const std::uint64_t k = static_cast<std::uint64_t>(chi.j) * ctx.ind(r) % chi.order;
    return ctx.e_pm1(static_cast<std::uint32_t>(k));
}

GaussSumValue gauss_sum(const PrimeContext& ctx, const DirichletCharacter& chi) {
    std::vector<std::complex<double>> terms(ctx.p() - 1);
    for (std::uint32_t a = 1; a < ctx.p(); ++a) terms[a - 1] = char_eval(ctx, chi, a) * ctx.e_p(a);
    return {pairwise_sum(std::span<const std::complex<double>>(terms))};
}


std::span<const std::complex<double>> gauss_sum_table(const PrimeContext& ctx) {
    auto& cache = ctx.cache();
    std::call_once(cache.gauss_once, [&] {
        // tau_j = sum_k e(jk/(p-1)) e(g^k/p)
        std::vector<std::complex<double>> seq(ctx.p() - 1);
        for (std::uint32_t k = 0; k + 1 < ctx.p(); ++k) seq[k] = ctx.e_p(ctx.pow_g(k));
        cache.gauss = dft(seq, DftSign::Positive);
    });
    return cache.gauss;
}

std::complex<double> even_pair_average(const PrimeContext& ctx, std::int64_t n1, std::int64_t n2) {
    require_coprime(ctx, n1, "n1");
    require_coprime(ctx, n2, "n2");
    const auto family = enumerate_even_primitive(ctx);
    std::vector<std::complex<double>> terms;
    terms.reserve(family.size());
    for (const auto& chi : family) terms.push_back(char_eval(ctx, chi, n1) * std::conj(char_eval(ctx, chi, n2)));
    return 2.0 / ctx.p() * pairwise_sum(std::span<const std::complex<double>>(terms));
}

double even_pair_average_closed_form(const PrimeContext& ctx, std::int64_t n1, std::int64_t n2) {
    require_coprime(ctx, n1, "n1");
    require_coprime(ctx, n2, "n2");
    const std::uint32_t a = ctx.reduce(n1), b = ctx.reduce(n2);
    const bool plus_minus = a == b || a == ctx.p() - b;
    const double p = ctx.p();
    return ((plus_minus ? p - 1.0 : 0.0) - 2.0) / p;
}

std::complex<double> gauss_twisted_average(const PrimeContext& ctx, std::int64_t n1) {
    require_coprime(ctx, n1, "n1");
    const auto tau = gauss_sum_table(ctx);
    const auto family = enumerate_even_primitive(ctx);
    std::vector<std::complex<double>> terms;
    terms.reserve(family.size());
    for (const auto& chi : family) terms.push_back(tau[chi.j] * char_eval(ctx, chi, n1));
    return pairwise_sum(std::span<const std::complex<double>>(terms)) / static_cast<double>(ctx.p());
}

double gauss_twisted_average_closed_form(const PrimeContext& ctx, std::int64_t n1) {
    require_coprime(ctx, n1, "n1");
    const double p = ctx.p();
    const double angle = 2.0 * std::numbers::pi * ctx.inv(ctx.reduce(n1)) / p;
    return ((p - 1.0) * std::cos(angle) + 1.0) / p;
}

std::vector<std::complex<double>> character_sums_all(const PrimeContext& ctx, std::span<const double> a) {
    return fold_and_transform(ctx, a);
}

std::vector<std::complex<double>> character_sums_all(const PrimeContext& ctx,
                                                     std::span<const std::complex<double>> a) {
    return fold_and_transform(ctx, a);
}

}  // namespace lnv
