#pragma once

// Central values L(1/2, chi) for even primitive chi mod p, the two-piece
// mollifier
//
//   M(chi) = c1 sum_{m < MR} y_m chi(m) m^{-1/2}
//          + c2 (conj(tau_chi)/sqrt p) sum_{m < M} y_m conj(chi(m)) m^{-1/2},
//   M = floor(p^theta), MR = floor(p^{theta+alpha}),
//
// the mollified moments S1 = (2/p) sum+ L M, S2 = (2/p) sum+ |L M|^2 and the
// balanced variant (alpha = 0, c1 = c2 = 1) giving T1, T2.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lnv/arith.hpp"
#include "lnv/characters.hpp"
#include "lnv/specfun.hpp"

namespace lnv {

// y_m = mu(m) log(L/m) / log L for 1 <= m < L, zero elsewhere; index 0 unused.
// Throws Error{LengthTooSmall} for L < 2.
std::vector<double> mollifier_coeffs(std::size_t L);

// Coefficients of a mollifier piece of length L. For L = 1 the piece is the
// single term y_1 = 1.
std::vector<double> piece_coeffs(std::size_t L);

// floor(p^e) computed with a guard against pow() landing just below an integer.
std::size_t floor_power(std::uint32_t p, double e);

struct MollifierParams {
    double theta = 0.0;
    double alpha = 0.0;
    double c1 = 1.0;
    double c2 = 1.0;
    std::size_t long_length = 1;   // floor(p^{theta+alpha})
    std::size_t short_length = 1;  // floor(p^theta)
    std::vector<double> y_long;
    std::vector<double> y_short;
    // Some piece reaches p^{1/2}; finite-p exploration is still allowed.
    bool exceeds_half_length = false;

    // Throws Error{NonpositiveTheta} for theta <= 0, Error{RangeViolation} for
    // alpha < 0, Error{DegenerateWeights} for negative or all-zero weights.
    static MollifierParams make(std::uint32_t p, double theta, double alpha, double c1, double c2);
};

// Main-term predictions.
double predicted_first_moment(const MollifierParams& m);
double predicted_second_moment(const MollifierParams& m);
double predicted_proportion(double theta, double alpha, double c1, double c2);

// n^{-1/2} W(n/sqrt p) for n = 0 .. N-1 (entry 0 is zero), truncated by the
// kernel tail rule.
std::vector<double> afe_weights(std::uint32_t p);

// L(1/2, chi) = A + (tau/sqrt p) conj(A),  A = sum_n chi(n) n^{-1/2} W(n/sqrt p).
// Throws Error{OddCharacter} for odd chi, Error{NotPrimitive} for chi_0.
std::complex<double> central_value(const PrimeContext& ctx, const DirichletCharacter& chi,
                                   const KernelConfig& cfg = {});

// |L(1/2,chi)|^2 = 2 sum_{n1,n2} chi(n1) conj(chi(n2)) (n1 n2)^{-1/2} V(n1 n2 / p),
// grouped by m = n1 n2 with V(m/p) tabulated once per modulus.
class SquaredCentralValue {
public:
    SquaredCentralValue(const PrimeContext& ctx, const KernelConfig& cfg = {});
    double operator()(const DirichletCharacter& chi) const;
    std::size_t length() const noexcept { return v_.size(); }
    double tail_estimate() const noexcept { return tail_; }

private:
    const PrimeContext* ctx_;
    std::vector<double> v_;  // m^{-1/2} V(m/p), index m
    double tail_ = 0.0;
};

double central_value_squared(const PrimeContext& ctx, const DirichletCharacter& chi, const KernelConfig& cfg = {});

std::complex<double> mollifier_value(const PrimeContext& ctx, const DirichletCharacter& chi,
                                     const MollifierParams& params);
// Balanced mollifier with both pieces of length floor(p^theta) and unit weights.
std::complex<double> mollifier0_value(const PrimeContext& ctx, const DirichletCharacter& chi, double theta);

enum class SumPath { Naive, Dft };

// Everything the moments need, per even primitive character (same order as
// enumerate_even_primitive).
struct FamilyValues {
    std::vector<DirichletCharacter> characters;
    std::vector<std::complex<double>> L;
    std::vector<std::complex<double>> tau;
    std::vector<std::complex<double>> long_piece;   // sum_{m<MR} y_m chi(m) m^{-1/2}
    std::vector<std::complex<double>> short_piece;  // sum_{m<M}  y_m chi(m) m^{-1/2}
};

// Naive: per-character direct sums (Gauss sums by direct summation).
// Dft: every sum over n for all characters at once by folding by index and
// one length-(p-1) DFT.
FamilyValues evaluate_family(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg,
                             SumPath path);

struct SecondMomentParts {
    double cross = 0.0;         // 2 c1 c2 (2/p) sum+ |L|^2 (tau/sqrt p) P_long P_short
    double square_long = 0.0;   // c1^2 (2/p) sum+ |L|^2 |P_long|^2
    double square_short = 0.0;  // c2^2 (2/p) sum+ |L|^2 |P_short|^2
    double cross_predicted = 0.0;
    double square_long_predicted = 0.0;
    double square_short_predicted = 0.0;
};

struct BalancedMoments {
    std::complex<double> T1;
    double T2 = 0.0;
    double T1_predicted = 2.0;
    double T2_predicted = 0.0;  // 2/theta + 4
};

struct MomentReport {
    std::uint32_t p = 0;
    MollifierParams params;
    SumPath path = SumPath::Dft;
    std::size_t family_size = 0;
    std::complex<double> S1;
    double S1_predicted = 0.0;
    double S2 = 0.0;
    double S2_predicted = 0.0;
    SecondMomentParts parts;
    double cs_ratio = 0.0;  // |S1|^2 / S2
    double proportion_predicted = 0.0;
    BalancedMoments balanced;
    double min_abs_L = 0.0;
    double nonvanishing_threshold = 0.0;  // 1e-8 p^{1/4}
    std::size_t nonvanishing_count = 0;
};

MomentReport moments_from_family(std::uint32_t p, const MollifierParams& params, const FamilyValues& family,
                                 SumPath path);
MomentReport compute_moments(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg = {},
                             SumPath path = SumPath::Dft);

std::complex<double> first_moment(const PrimeContext& ctx, const MollifierParams& params,
                                  const KernelConfig& cfg = {}, SumPath path = SumPath::Dft);

struct SecondMoment {
    double value = 0.0;
    SecondMomentParts parts;
};
SecondMoment second_moment(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg = {},
                           SumPath path = SumPath::Dft);

// ---------------------------------------------------------------------------
// Dyadic bilinear form
//
//   B = (p M1 M2 N1 N2)^{-1/2} sum y_{m1} y_{m2} V(n1 n2/p) f(n1/N1) f(n2/N2)
//         e(n2 inv(n1 m1 m2) / p)
//
// over N1 <= n1 <= 2N1, N2 <= n2 <= 2N2, M1 <= m1 < 2M1, M2 <= m2 < 2M2 with
// (n1 n2 m1 m2, p) = 1.

// exp(1 - 1/(1 - (4x-6)^2)) on (5/4, 7/4), zero elsewhere.
double bump(double x) noexcept;

struct BilinearSpec {
    std::int64_t M1 = 1;
    std::int64_t M2 = 1;
    double N1 = 1.0;
    double N2 = 1.0;
    std::size_t long_length = 1;   // MR
    std::size_t short_length = 1;  // M
    std::vector<double> y_long;    // y_{m1}, indexed by m
    std::vector<double> y_short;   // y_{m2}
    double delta = 0.1;            // slack standing in for epsilon

    static BilinearSpec from_params(const MollifierParams& params, std::int64_t M1, std::int64_t M2, double N1,
                                    double N2, double delta = 0.1);

    // Throws Error{RangeViolation} naming the first violated condition:
    // N1 N2 <= p^{1+delta}, M1 <= (MR+1)/2, M2 <= (M+1)/2, M1 M2 N1 >= 1.
    void check_ranges(std::uint32_t p) const;
};

std::complex<double> bilinear_form(const PrimeContext& ctx, const BilinearSpec& spec, const KernelConfig& cfg = {});

struct PoissonDual {
    std::complex<double> value;
    std::complex<double> k_zero;
    double dual_kernel_sup = 0.0;  // max |f_hat(n2, k)|
    // (k, contribution) for centered k in (-p/2, p/2], sorted by k.
    std::vector<std::pair<std::int64_t, std::complex<double>>> spectrum;
};

// Poisson summation in n1 over residue classes mod p (exact at finite p):
//   B = (p M1 M2 N1 N2)^{-1/2} (N1/p) sum_{k mod p} sum y y f_hat(n2,k) S(k n2, inv(m1 m2); p),
//   f_hat(n2, k) = (1/N1) sum_{n1} V(n1 n2/p) f(n1/N1) f(n2/N2) e(-k n1/p).
PoissonDual bilinear_poisson_dual(const PrimeContext& ctx, const BilinearSpec& spec, const KernelConfig& cfg = {});

struct BilinearEnvelopes {
    double pois1 = 0.0;   // p^d (M1 M2 N1/(p N2))^{1/2} + p^{-d}
    double bbound = 0.0;  // (p^d N2 MR/N1)^{1/4} + (p^d N2^2 M^6 R^2/(N1^2 p))^{1/8} + p^{-d}
};
BilinearEnvelopes bilinear_envelopes(std::uint32_t p, const BilinearSpec& spec);

}  // namespace lnv
