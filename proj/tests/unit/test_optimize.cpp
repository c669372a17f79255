#include <doctest.h>

#include <random>

#include "lnv/error.hpp"
#include "lnv/optimize.hpp"

using namespace lnv;

namespace {

Rational q(long long n, long long d = 1) { return Rational(n) / Rational(d); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("1/4") == q(1, 4));
    CHECK(parse_rational("0.24") == q(6, 25));
    CHECK(parse_rational("-0.5") == q(-1, 2));
    CHECK(parse_rational("3") == q(3));
    CHECK(parse_rational("1e-4") == q(1, 10000));
    CHECK(parse_rational("2.5e-3") == q(1, 400));
    CHECK(parse_rational(" 3/10 ") == q(3, 10));
    CHECK(parse_rational("0.1/0.4") == q(1, 4));
    CHECK(code_of([] { parse_rational("abc"); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { parse_rational("1/0"); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { parse_rational(""); }) == ErrorCode::InvalidConfig);
    CHECK(to_string(q(5, 13)) == "5/13");
    CHECK(to_string(q(6, 2)) == "3");
    CHECK(to_string(q(-1, 2)) == "-1/2");
    CHECK(to_double(q(3, 8)) == 0.375);
}

TEST_CASE("proportion examples") {
    CHECK(proportion(q(1, 4), q(1, 8), q(3, 5), q(2, 5)) == q(5, 13));
    CHECK(proportion(q(1, 4), q(0), q(1, 2), q(1, 2)) == q(1, 3));
    CHECK(proportion(q(3, 10), q(0), q(1, 2), q(1, 2)) == q(3, 8));
}

TEST_CASE("proportion with a vanishing weight") {
    // one-piece mollifier: (1/theta' + 1)^{-1}
    CHECK(proportion(q(1, 4), q(1, 8), q(1), q(0)) == q(3, 11));
    CHECK(proportion(q(1, 4), q(1, 8), q(0), q(1)) == q(1, 5));
}

TEST_CASE("proportion errors") {
    CHECK(code_of([] { proportion(q(1, 4), q(0), q(0), q(0)); }) == ErrorCode::DegenerateWeights);
    CHECK(code_of([] { proportion(q(0), q(1, 4), q(1), q(1)); }) == ErrorCode::NonpositiveTheta);
    CHECK(code_of([] { proportion(q(-1, 4), q(1, 2), q(1), q(1)); }) == ErrorCode::NonpositiveTheta);
    CHECK(code_of([] { optimal_weights(q(0), q(1)); }) == ErrorCode::NonpositiveTheta);
}

TEST_CASE("optimal weights") {
    const auto w = optimal_weights(q(1, 4), q(1, 8));
    CHECK(w.c1 == q(3, 5));
    CHECK(w.c2 == q(2, 5));
    const auto s = optimal_weights(q(2, 7), q(0));
    CHECK(s.c1 == q(1, 2));
    CHECK(s.c2 == q(1, 2));
    const auto t = optimal_weights(q(1, 5), q(1, 10));
    CHECK(t.c1 == q(3, 5));
    CHECK(t.c2 == q(2, 5));
}

TEST_CASE("feasibility") {
    CHECK(feasible(q(24, 100), q(12, 100), q(0)).feasible);
    const auto edge = feasible(q(1, 4), q(1, 8), q(0));
    CHECK_FALSE(edge.feasible);
    REQUIRE(edge.violated.size() == 2);
    CHECK(edge.violated[0] == "3 theta + 2 alpha < 1");
    CHECK(edge.violated[1] == "10 theta + 4 alpha < 3");
    const auto limit = feasible(q(3, 10), q(0), q(0));
    CHECK_FALSE(limit.feasible);
    REQUIRE(limit.violated.size() == 1);
    CHECK(limit.violated[0] == "10 theta + 4 alpha < 3");
    CHECK(feasible(q(1, 5), q(0), q(0)).feasible);
    CHECK_FALSE(feasible(q(1, 5), q(-1, 100), q(0)).feasible);
    CHECK_FALSE(feasible(q(0), q(1, 10), q(0)).feasible);
    // margin
    CHECK(feasible(q(24, 100), q(12, 100), q(1, 100)).feasible);
    CHECK_FALSE(feasible(q(24, 100), q(12, 100), q(5, 100)).feasible);
    CHECK(feasible(q(1, 5), q(0), q(1, 10)).feasible);  // alpha >= 0 carries no margin
}

TEST_CASE("maximum on the closure") {
    const auto r = maximize_combined_length(q(0));
    CHECK(r.theta == q(1, 4));
    CHECK(r.alpha == q(1, 8));
    CHECK(r.combined == q(5, 8));
    CHECK(r.c1 == q(3, 5));
    CHECK(r.c2 == q(2, 5));
    CHECK(r.proportion == q(5, 13));
    CHECK(r.methods_agree);
    CHECK(r.grid_combined == q(5, 8));
}

TEST_CASE("maximum with alpha fixed to zero") {
    const auto r = maximize_combined_length(q(0), q(0));
    CHECK(r.theta == q(3, 10));
    CHECK(r.alpha == q(0));
    CHECK(r.combined == q(3, 5));
    CHECK(r.proportion == q(3, 8));
    CHECK(r.methods_agree);
}

TEST_CASE("maximum with a margin") {
    const auto r = maximize_combined_length(q(1, 16));
    CHECK(r.combined < q(5, 8));
    CHECK(r.proportion < q(5, 13));
    CHECK(r.methods_agree);
    CHECK(to_double(r.combined - r.grid_combined) <= 1e-4);
    CHECK(to_double(r.combined - r.grid_combined) >= 0.0);
    CHECK(feasible(r.theta, r.alpha, q(1, 16)).feasible);
}

TEST_CASE("margin limits") {
    CHECK(code_of([] { maximize_combined_length(q(1, 8)); }) == ErrorCode::EmptyRegion);
    CHECK(code_of([] { maximize_combined_length(q(1, 2)); }) == ErrorCode::EmptyRegion);
    CHECK(code_of([] { maximize_combined_length(q(-1, 100)); }) == ErrorCode::RangeViolation);
    CHECK(maximize_combined_length(q(1249, 10000)).methods_agree);
}

TEST_CASE("proportion stays below 5/13 for positive margin") {
    Rational prev = q(5, 13);
    for (int k = 1; k < 12; ++k) {
        const auto r = maximize_combined_length(q(k, 100), std::nullopt, 2000);
        CHECK(r.proportion < q(5, 13));
        CHECK(r.proportion == r.combined / (1 + r.combined));
        CHECK(r.proportion < prev);
        prev = r.proportion;
    }
}

TEST_CASE("optimal weights maximize the proportion") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> d(1, 60), w(0, 50);
    for (int t = 0; t < 300; ++t) {
        const Rational theta = q(d(rng), 100), alpha = q(d(rng) - 1, 100);
        int a = w(rng), b = w(rng);
        if (a + b == 0) b = 1;
        const auto best = optimal_weights(theta, alpha);
        const Rational p_best = proportion(theta, alpha, best.c1, best.c2);
        REQUIRE(proportion(theta, alpha, q(a), q(b)) <= p_best);
        REQUIRE(p_best == (2 * theta + alpha) / (1 + 2 * theta + alpha));
        // scale invariance
        REQUIRE(proportion(theta, alpha, q(a), q(b)) == proportion(theta, alpha, q(7 * a, 3), q(7 * b, 3)));
    }
}

TEST_CASE("combined length decomposition") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> d(-1000, 1000), den(1, 997);
    for (int t = 0; t < 200; ++t) {
        const Rational theta = q(d(rng), den(rng)), alpha = q(d(rng), den(rng));
        REQUIRE(combined_length_decomposition(theta, alpha) == 2 * theta + alpha);
    }
}

TEST_CASE("proportion grows with the combined length") {
    Rational prev = 0;
    for (int k = 1; k <= 100; ++k) {
        const Rational L = q(k, 100);
        const Rational theta = L / 3, alpha = L / 3;
        const auto wts = optimal_weights(theta, alpha);
        const Rational pr = proportion(theta, alpha, wts.c1, wts.c2);
        REQUIRE(pr > prev);
        prev = pr;
    }
}

}  // TEST_SUITE
