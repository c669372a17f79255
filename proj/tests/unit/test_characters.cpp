#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lnv/arith.hpp"
#include "lnv/characters.hpp"
#include "lnv/dft.hpp"
#include "lnv/error.hpp"

using namespace lnv;

namespace {

const std::vector<std::uint32_t> kSmallPrimes = {5, 7, 11, 13, 31, 61, 97, 101, 199, 211, 331, 499};

// chi_j(n) from scratch: find k with g^k = n by walking powers.
std::complex<double> chi_from_scratch(std::uint32_t p, std::uint32_t g, std::uint32_t j, std::int64_t n) {
    const std::int64_t r = ((n % p) + p) % p;
    if (r == 0) return 0.0;
    std::uint64_t x = 1;
    std::uint32_t k = 0;
    while (x != static_cast<std::uint64_t>(r)) {
        x = x * g % p;
        ++k;
    }
    const double angle = 2.0 * std::numbers::pi * double(std::uint64_t(j) * k % (p - 1)) / double(p - 1);
    return std::polar(1.0, angle);
}

}  // namespace

TEST_SUITE("characters") {

TEST_CASE("even primitive enumeration") {
    CHECK(enumerate_even_primitive(PrimeContext(5)).size() == 1);
    CHECK(enumerate_even_primitive(PrimeContext(5))[0].j == 2);
    const auto c7 = enumerate_even_primitive(PrimeContext(7));
    REQUIRE(c7.size() == 2);
    CHECK(c7[0].j == 2);
    CHECK(c7[1].j == 4);
    CHECK(enumerate_even_primitive(PrimeContext(3)).empty());
    for (std::uint32_t p : kSmallPrimes) {
        PrimeContext ctx(p);
        const auto even = enumerate_even_primitive(ctx);
        CHECK(even.size() == (p - 3) / 2);
        const auto all = enumerate_all(ctx);
        CHECK(all.size() == p - 1);
        std::size_t n_even = 0, n_odd = 0;
        for (const auto& chi : all) (chi.even() ? n_even : n_odd)++;
        CHECK(n_even + n_odd == p - 1);
        CHECK(n_even == (p - 1) / 2);
    }
}

TEST_CASE("char_eval examples") {
    PrimeContext ctx(5);
    const auto chi = make_character(ctx, 2);
    CHECK(char_eval(ctx, chi, 1) == std::complex<double>(1.0));
    CHECK(char_eval(ctx, chi, 5) == std::complex<double>(0.0));
    CHECK(std::abs(char_eval(ctx, chi, 2) - std::complex<double>(-1.0)) < 1e-15);
    CHECK(std::abs(char_eval(ctx, chi, -3) - char_eval(ctx, chi, 2)) < 1e-15);
}

TEST_CASE("char_eval agrees with a from-scratch evaluation") {
    for (std::uint32_t p : {11u, 101u, 499u}) {
        PrimeContext ctx(p);
        for (std::uint32_t j : {0u, 1u, 2u, p / 2, p - 2}) {
            const auto chi = make_character(ctx, j);
            for (std::int64_t n = -3; n <= 3 * std::int64_t(p); n += 7)
                REQUIRE(std::abs(char_eval(ctx, chi, n) - chi_from_scratch(p, ctx.generator(), j, n)) < 1e-12);
        }
    }
}

TEST_CASE("multiplicativity, conjugation and parity") {
    std::mt19937_64 rng(7);
    for (std::uint32_t p : kSmallPrimes) {
        PrimeContext ctx(p);
        std::uniform_int_distribution<std::int64_t> dist(1, 10 * p);
        for (const auto& chi : enumerate_all(ctx)) {
            CHECK(char_eval(ctx, chi, 1) == std::complex<double>(1.0));
            const double sign = chi.even() ? 1.0 : -1.0;
            REQUIRE(std::abs(char_eval(ctx, chi, -1) - sign) < 1e-12);
            for (int t = 0; t < 20; ++t) {
                const auto m = dist(rng), n = dist(rng);
                if (m % p == 0 || n % p == 0) continue;
                REQUIRE(std::abs(char_eval(ctx, chi, m * n) - char_eval(ctx, chi, m) * char_eval(ctx, chi, n)) <
                        1e-12);
                REQUIRE(char_eval(ctx, chi.conj(), n) == std::conj(char_eval(ctx, chi, n)));
            }
        }
    }
}

TEST_CASE("Gauss sums") {
    {
        PrimeContext ctx(5);
        CHECK(std::abs(gauss_sum(ctx, make_character(ctx, 0)).value - std::complex<double>(-1.0)) < 1e-12);
        CHECK(std::abs(gauss_sum(ctx, make_character(ctx, 2)).value - std::sqrt(5.0)) < 1e-10);
    }
    for (std::uint32_t p : kSmallPrimes) {
        PrimeContext ctx(p);
        const auto table = gauss_sum_table(ctx);
        REQUIRE(table.size() == p - 1);
        for (const auto& chi : enumerate_all(ctx)) {
            const auto tau = gauss_sum(ctx, chi).value;
            if (chi.primitive()) REQUIRE(std::abs(std::abs(tau) / std::sqrt(double(p)) - 1.0) < 1e-9);
            REQUIRE(std::abs(table[chi.j] - tau) < 1e-9);
        }
        CHECK(std::abs(table[0] - std::complex<double>(-1.0)) < 1e-9);
    }
}

TEST_CASE("pair average examples") {
    PrimeContext c7(7);
    CHECK(std::abs(even_pair_average(c7, 1, 1) - 4.0 / 7.0) < 1e-12);
    CHECK(std::abs(even_pair_average(c7, 1, 2) + 2.0 / 7.0) < 1e-12);
    PrimeContext c5(5);
    CHECK(std::abs(even_pair_average(c5, 2, 3) - 2.0 / 5.0) < 1e-12);
    try {
        even_pair_average(c7, 7, 1);
        FAIL("expected NotCoprime");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotCoprime);
    }
}

TEST_CASE("twisted average examples") {
    PrimeContext c5(5);
    const double expect5 = (4.0 * std::cos(2.0 * std::numbers::pi / 5.0) + 1.0) / 5.0;
    CHECK(std::abs(gauss_twisted_average(c5, 1) - expect5) < 1e-12);
    PrimeContext c7(7);
    CHECK(std::abs(gauss_twisted_average(c7, 1).real() - std::cos(2.0 * std::numbers::pi / 7.0)) <= 3.0 / 7.0);
    PrimeContext c101(101);
    const double re = std::cos(2.0 * std::numbers::pi * c101.inv(50) / 101.0);
    CHECK(std::abs(gauss_twisted_average(c101, 50) - re) <= 3.0 / 101.0);
    CHECK_THROWS_AS(gauss_twisted_average(c101, 202), Error);
}

TEST_CASE("averages match closed forms") {
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {5u, 13u, 61u, 199u, 499u}) {
        PrimeContext ctx(p);
        std::uniform_int_distribution<std::int64_t> dist(1, p - 1);
        for (int t = 0; t < 100; ++t) {
            const auto n1 = dist(rng), n2 = dist(rng);
            REQUIRE(std::abs(even_pair_average(ctx, n1, n2) - even_pair_average_closed_form(ctx, n1, n2)) < 1e-10);
            REQUIRE(std::abs(gauss_twisted_average(ctx, n1) - gauss_twisted_average_closed_form(ctx, n1)) < 1e-10);
        }
    }
}

TEST_CASE("DFT agrees with the naive transform") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 7u, 60u, 97u, 498u}) {
        std::vector<std::complex<double>> x(n);
        for (auto& v : x) v = {nd(rng), nd(rng)};
        for (auto sign : {DftSign::Negative, DftSign::Positive}) {
            const auto a = dft(x, sign), b = naive_dft(x, sign);
            for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(a[i] - b[i]) < 1e-9);
        }
    }
}

TEST_CASE("all-character sums match direct sums") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (std::uint32_t p : {11u, 101u, 331u}) {
        PrimeContext ctx(p);
        std::vector<double> a(3 * p + 5);
        for (auto& v : a) v = nd(rng);
        const auto fast = character_sums_all(ctx, std::span<const double>(a));
        for (const auto& chi : enumerate_all(ctx)) {
            std::complex<double> direct = 0.0;
            for (std::size_t n = 1; n < a.size(); ++n) direct += a[n] * char_eval(ctx, chi, std::int64_t(n));
            REQUIRE(std::abs(fast[chi.j] - direct) < 1e-9);
        }
    }
}

}  // TEST_SUITE
