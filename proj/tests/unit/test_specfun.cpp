#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lnv/error.hpp"
#include "lnv/specfun.hpp"

using namespace lnv;

namespace {

// Reference values from a 30-digit evaluation of the defining integrals.
constexpr double kW_1e6 = 0.998531187416737;
constexpr double kW_1e3 = 0.953552096993784;
constexpr double kW_1 = 0.00422894070261782;
constexpr double kW_2 = 1.36506096923185e-7;
constexpr double kV_1e6 = 0.9847971981;
constexpr double kV_1e3 = 0.7548797040243304;
constexpr double kV_1e2 = 0.4731528029254187;
constexpr double kV_1 = 6.90762986076e-5;

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    std::vector<double> xs;
    const int n = static_cast<int>(std::round(std::log10(hi / lo) * per_decade));
    for (int i = 0; i <= n; ++i) xs.push_back(lo * std::pow(10.0, double(i) / per_decade));
    return xs;
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("complex gamma") {
    CHECK(std::abs(gamma({5.0, 0.0}) - 24.0) < 1e-12);
    CHECK(std::abs(gamma({0.5, 0.0}) - std::sqrt(std::numbers::pi)) < 1e-13);
    for (double x = 0.1; x < 30.0; x += 0.37)
        REQUIRE(std::abs(log_gamma({x, 0.0}).real() - std::lgamma(x)) < 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
    for (double re = -2.3; re < 7.0; re += 0.61) {
        for (double im = -40.0; im < 40.0; im += 3.3) {
            const std::complex<double> z(re, im);
            const auto lhs = gamma(z) * gamma(1.0 - z);
            const auto rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
            REQUIRE(std::abs(lhs / rhs - 1.0) < 1e-10);
            const auto rec = gamma(z + 1.0) / (z * gamma(z));
            REQUIRE(std::abs(rec - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("config validation names the key") {
    KernelConfig cfg;
    cfg.sigma = 0.0;
    try {
        cfg.validate();
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
        CHECK(std::string(e.what()).find("sigma") != std::string::npos);
    }
    cfg = {};
    cfg.step = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("W closed form agrees with the quadrature") {
    for (double x : log_grid(1e-3, 10.0, 8)) REQUIRE(std::abs(weight_W(x) - weight_W_quadrature(x)) < 1e-9);
}

TEST_CASE("W reference values") {
    CHECK(std::abs(weight_W(1e-6) - kW_1e6) < 1e-12);
    CHECK(std::abs(weight_W(1e-3) - kW_1e3) < 1e-12);
    CHECK(std::abs(weight_W(1.0) - kW_1) < 1e-15);
    CHECK(std::abs(weight_W(2.0) / kW_2 - 1.0) < 1e-12);
    // the sigma = 2 contour cancels about 11 digits at x = 1e-6
    CHECK(std::abs(weight_W_quadrature(1e-6) - kW_1e6) < 1e-5);
    // 1 - W(x) ~ c x^{1/2}: within 1e-4 of 1 needs x well below 1e-6.
    CHECK(std::abs(weight_W(1e-12) - 1.0) < 1e-4);
    CHECK(weight_W(10.0) < 1e-30);
    CHECK(weight_W(1.0) > weight_W(2.0));
    CHECK_THROWS_AS(weight_W(0.0), Error);
    CHECK_THROWS_AS(weight_W(-1.0), Error);
}

TEST_CASE("V reference values") {
    CHECK(std::abs(weight_V(1e-6) - kV_1e6) < 1e-6);
    CHECK(std::abs(weight_V(1e-3) - kV_1e3) < 1e-9);
    CHECK(std::abs(weight_V(1e-2) - kV_1e2) < 1e-10);
    CHECK(std::abs(weight_V(1.0) - kV_1) < 1e-12);
    CHECK_THROWS_AS(weight_V(0.0), Error);
}

TEST_CASE("V decays") {
    KernelConfig far;
    far.sigma = 6.0;
    const double v100 = weight_V(100.0, far);
    CHECK(std::abs(v100) < 1e-6);
    CHECK(std::abs(weight_V(100.0)) < 1e-6);
}

TEST_CASE("quadrature convergence at x = 1") {
    for (auto k : {Kernel::W, Kernel::V}) {
        const auto r = quadrature_convergence(k, 1.0);
        CHECK(r.step_halved_delta < 1e-10);
        CHECK(r.height_doubled_delta < 1e-10);
        CHECK(r.tail_estimate < 1e-12);
    }
}

TEST_CASE("range and monotonicity on (0, 1]") {
    const MellinQuadrature V(Kernel::V, {});
    double prev_w = 1.0, prev_v = 1.0 + 1e-8;
    for (double x : log_grid(1e-4, 1.0, 10)) {
        const double w = weight_W(x), v = V(x);
        REQUIRE(w > 0.0);
        REQUIRE(w < 1.0);
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0 + 1e-8);
        REQUIRE(w < prev_w);
        REQUIRE(v < prev_v);
        prev_w = w;
        prev_v = v;
    }
}

TEST_CASE("contour shift invariance for x >= 1e-2") {
    KernelConfig shifted;
    shifted.sigma = 3.0;
    const MellinQuadrature V2(Kernel::V, {}), V3(Kernel::V, shifted);
    const MellinQuadrature W2(Kernel::W, {}), W3(Kernel::W, shifted);
    for (double x : log_grid(1e-2, 10.0, 6)) {
        REQUIRE(std::abs(V2(x) - V3(x)) < 1e-10);
        REQUIRE(std::abs(W2(x) - W3(x)) < 1e-10);
    }
}

TEST_CASE("V cache interpolation") {
    const WeightVCache cache(1e-4, 10.0);
    CHECK(cache.size() == 321);
    const MellinQuadrature V(Kernel::V, {});
    for (double x : log_grid(1.3e-4, 9.0, 17)) {
        const double v = V(x);
        if (v > 1e-12) REQUIRE(std::abs(cache(x) - v) < 1e-7 * v);
    }
    CHECK(std::abs(cache(50.0) - V(50.0)) < 1e-15);
}

TEST_CASE("log derivative matches a central difference") {
    for (auto k : {Kernel::W, Kernel::V}) {
        const MellinQuadrature K(k, {});
        for (double x : {1e-3, 0.05, 0.7, 2.0}) {
            const double h = 1e-4;
            const double fd = (K(x * std::exp(h)) - K(x * std::exp(-h))) / (2.0 * h);
            REQUIRE(std::abs(K.log_derivative(x) - fd) < 1e-7 * std::max(1e-3, std::abs(fd)));
        }
    }
}

TEST_CASE("kernel sum truncation") {
    const auto t = truncate_kernel_sum([](double x) { return weight_W(x); }, 10.0, 0.5);
    // W(x) < 1e-16 from about x = 3.35 on
    CHECK(t.length > 30);
    CHECK(t.length < 40);
    CHECK(weight_W(double(t.length) / 10.0) < 1e-16);
    CHECK(t.tail < 1e-12 * t.partial);
    const double bound = kernel_support_bound([](double x) { return weight_W(x); }, 1e-16);
    CHECK(weight_W(bound) < 1e-16);
    CHECK(weight_W(bound * 0.99) >= 1e-16);
}

}  // TEST_SUITE
