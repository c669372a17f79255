#include "lnv/arith.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lnv/error.hpp"

namespace lnv {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::ZeroResidue: return "ZeroResidue";
        case ErrorCode::NotCoprime: return "NotCoprime";
        case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
        case ErrorCode::OddCharacter: return "OddCharacter";
        case ErrorCode::NotPrimitive: return "NotPrimitive";
        case ErrorCode::LengthTooSmall: return "LengthTooSmall";
        case ErrorCode::RangeViolation: return "RangeViolation";
        case ErrorCode::NonInvertible: return "NonInvertible";
        case ErrorCode::WindowEmpty: return "WindowEmpty";
        case ErrorCode::ScaleExceeded: return "ScaleExceeded";
        case ErrorCode::DegenerateWeights: return "DegenerateWeights";
        case ErrorCode::NonpositiveTheta: return "NonpositiveTheta";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Miller-Rabin with the first twelve prime bases, deterministic below 3.3e24.
bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t q : bases) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q <= n / q; q += (q == 2 ? 1 : 2)) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

int mobius(std::int64_t n) {
    if (n < 1) throw Error(ErrorCode::NonPositiveArgument, "mobius requires n >= 1, got " + std::to_string(n));
    auto m = static_cast<std::uint64_t>(n);
    int sign = 1;
    for (std::uint64_t q = 2; q <= m / q; q += (q == 2 ? 1 : 2)) {
        if (m % q == 0) {
            m /= q;
            if (m % q == 0) return 0;
            sign = -sign;
        }
    }
    if (m > 1) sign = -sign;
    return sign;
}

std::uint32_t smallest_primitive_root(std::uint32_t p) {
    if (p == 2) return 1;
    const auto factors = distinct_prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool generator = true;
        for (std::uint64_t q : factors) {
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) return g;
    }
    throw Error(ErrorCode::NotPrime, "no primitive root modulo " + std::to_string(p));
}

namespace {

// e(a/n) from the exact angle; the upper half is the conjugate of the lower
// half so that e(-a/n) = conj(e(a/n)) holds bit for bit.
std::vector<std::complex<double>> roots_of_unity(std::uint32_t n) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> t(n);
    for (std::uint32_t a = 0; 2 * a <= n; ++a) t[a] = std::polar(1.0, two_pi * a / n);
    if (n % 2 == 0) t[n / 2] = {-1.0, 0.0};
    for (std::uint32_t a = n / 2 + 1; a < n; ++a) t[a] = std::conj(t[n - a]);
    return t;
}

}  // namespace

PrimeContext::PrimeContext(std::uint64_t p) : cache_(std::make_shared<detail::ContextCache>()) {
    if (p < 3) throw Error(ErrorCode::TooSmall, "modulus must be an odd prime >= 3, got " + std::to_string(p));
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (p >= (std::uint64_t{1} << 31)) throw Error(ErrorCode::TooLarge, "modulus exceeds 2^31");

    p_ = static_cast<std::uint32_t>(p);
    g_ = smallest_primitive_root(p_);

    ind_.assign(p_, 0);
    pow_g_.assign(p_ - 1, 0);
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k + 1 < p_; ++k) {
        pow_g_[k] = static_cast<std::uint32_t>(x);
        ind_[x] = k;
        x = x * g_ % p_;
    }
    // g^{-k} = g^{(p-1)-k}
    inv_.assign(p_, 0);
    for (std::uint32_t u = 1; u < p_; ++u) {
        const std::uint32_t k = ind_[u];
        inv_[u] = pow_g_[k == 0 ? 0 : (p_ - 1) - k];
    }

    e_p_ = roots_of_unity(p_);
    e_pm1_ = roots_of_unity(p_ - 1);
}

std::uint32_t PrimeContext::reduce(std::int64_t n) const noexcept {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t discrete_log(const PrimeContext& ctx, std::int64_t u) {
    const std::uint32_t r = ctx.reduce(u);
    if (r == 0) throw Error(ErrorCode::ZeroResidue, "discrete log of a multiple of p");
    return ctx.ind(r);
}

std::uint32_t inverse_mod(const PrimeContext& ctx, std::int64_t u) {
    const std::uint32_t r = ctx.reduce(u);
    if (r == 0) throw Error(ErrorCode::NonInvertible, std::to_string(u) + " is not invertible mod " + std::to_string(ctx.p()));
    return ctx.inv(r);
}

}  // namespace lnv
