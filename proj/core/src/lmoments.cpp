#include "lnv/lmoments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lnv/error.hpp"
#include "lnv/parallel.hpp"

namespace lnv {

namespace {

void require_even_primitive(const DirichletCharacter& chi) {
    if (!chi.even()) throw Error(ErrorCode::OddCharacter, "kernel W/V is the even-character kernel, j = " + std::to_string(chi.j));
    if (chi.principal()) throw Error(ErrorCode::NotPrimitive, "the principal character has no central-value AFE");
}

// sum_{n >= 1} a[n] chi(n), direct.
template <class T>
std::complex<double> direct_char_sum(const PrimeContext& ctx, const DirichletCharacter& chi, std::span<const T> a) {
    std::vector<std::complex<double>> terms;
    terms.reserve(a.size());
    for (std::size_t n = 1; n < a.size(); ++n) {
        if (a[n] == T{}) continue;
        terms.push_back(a[n] * char_eval(ctx, chi, static_cast<std::int64_t>(n)));
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

// y_m m^{-1/2}
std::vector<double> scaled_coeffs(std::span<const double> y) {
    std::vector<double> out(y.begin(), y.end());
    for (std::size_t m = 1; m < out.size(); ++m) out[m] /= std::sqrt(static_cast<double>(m));
    return out;
}

std::complex<double> assemble_L(std::complex<double> A, std::complex<double> tau, double sqrt_p) {
    return A + tau / sqrt_p * std::conj(A);
}

std::complex<double> assemble_M(const MollifierParams& params, std::complex<double> long_piece,
                                std::complex<double> short_piece, std::complex<double> tau, double sqrt_p) {
    return params.c1 * long_piece + params.c2 * std::conj(tau) / sqrt_p * std::conj(short_piece);
}

double mean_over_family(std::span<const double> xs, std::uint32_t p) {
    return 2.0 / p * pairwise_sum(xs);
}

}  // namespace

std::vector<double> mollifier_coeffs(std::size_t L) {
    if (L < 2) throw Error(ErrorCode::LengthTooSmall, "mollifier length must be >= 2, got " + std::to_string(L));
    std::vector<double> y(L, 0.0);
    const double log_L = std::log(static_cast<double>(L));
    for (std::size_t m = 1; m < L; ++m) {
        const int mu = mobius(static_cast<std::int64_t>(m));
        if (mu != 0) y[m] = mu * std::log(static_cast<double>(L) / static_cast<double>(m)) / log_L;
    }
    return y;
}

std::vector<double> piece_coeffs(std::size_t L) {
    if (L < 2) return {0.0, 1.0};
    return mollifier_coeffs(L);
}

std::size_t floor_power(std::uint32_t p, double e) {
    const double v = std::pow(static_cast<double>(p), e);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-12 * std::max(1.0, r)) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::floor(v));
}

MollifierParams MollifierParams::make(std::uint32_t p, double theta, double alpha, double c1, double c2) {
    if (!(theta > 0.0)) throw Error(ErrorCode::NonpositiveTheta, "theta must be > 0, got " + std::to_string(theta));
    if (!(alpha >= 0.0)) throw Error(ErrorCode::RangeViolation, "alpha must be >= 0, got " + std::to_string(alpha));
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || c1 + c2 <= 0.0)
        throw Error(ErrorCode::DegenerateWeights, "weights must be nonnegative with c1 + c2 > 0");
    MollifierParams m;
    m.theta = theta;
    m.alpha = alpha;
    m.c1 = c1;
    m.c2 = c2;
    m.long_length = std::max<std::size_t>(1, floor_power(p, theta + alpha));
    m.short_length = std::max<std::size_t>(1, floor_power(p, theta));
    m.y_long = piece_coeffs(m.long_length);
    m.y_short = piece_coeffs(m.short_length);
    const double half = std::sqrt(static_cast<double>(p));
    m.exceeds_half_length = static_cast<double>(m.long_length) >= half;
    return m;
}

double predicted_first_moment(const MollifierParams& m) { return m.c1 + m.c2; }

double predicted_second_moment(const MollifierParams& m) {
    return m.c1 * m.c1 / (m.theta + m.alpha) + m.c2 * m.c2 / m.theta + (m.c1 + m.c2) * (m.c1 + m.c2);
}

double predicted_proportion(double theta, double alpha, double c1, double c2) {
    const double a = c1 / (c1 + c2), b = c2 / (c1 + c2);
    double denom = 1.0;
    if (c1 != 0.0) denom += a * a / (theta + alpha);
    if (c2 != 0.0) denom += b * b / theta;
    return 1.0 / denom;
}

std::vector<double> afe_weights(std::uint32_t p) {
    const double scale = std::sqrt(static_cast<double>(p));
    const auto trunc = truncate_kernel_sum([](double x) { return weight_W(x); }, scale, 0.5);
    std::vector<double> a(trunc.length, 0.0);
    for (std::size_t n = 1; n < a.size(); ++n)
        a[n] = weight_W(static_cast<double>(n) / scale) / std::sqrt(static_cast<double>(n));
    return a;
}

std::complex<double> central_value(const PrimeContext& ctx, const DirichletCharacter& chi, const KernelConfig& cfg) {
    cfg.validate();
    require_even_primitive(chi);
    const auto a = afe_weights(ctx.p());
    const std::complex<double> A = direct_char_sum(ctx, chi, std::span<const double>(a));
    return assemble_L(A, gauss_sum(ctx, chi).value, std::sqrt(static_cast<double>(ctx.p())));
}

SquaredCentralValue::SquaredCentralValue(const PrimeContext& ctx, const KernelConfig& cfg) : ctx_(&ctx) {
    const MellinQuadrature V(Kernel::V, cfg);
    const double p = ctx.p();
    const double x_cut = kernel_support_bound(V, 1e-16, 1.0);
    const auto length = static_cast<std::size_t>(std::ceil(x_cut * p)) + 1;
    v_.assign(length, 0.0);
    parallel_for(length - 1, [&](std::size_t i) {
        const double m = static_cast<double>(i + 1);
        v_[i + 1] = V(m / p) / std::sqrt(m);
    });
    // Tail beyond the cut: sqrt(p) int_{x_cut}^{x_cut+8} x^{-1/2} V(x) dx, trapezoid.
    constexpr int nodes = 200;
    const double h = 8.0 / nodes;
    double acc = 0.0;
    for (int k = 0; k <= nodes; ++k) {
        const double x = x_cut + h * k;
        acc += (k == 0 || k == nodes ? 0.5 : 1.0) * std::abs(V(x)) / std::sqrt(x);
    }
    tail_ = std::sqrt(p) * h * acc;
}

double SquaredCentralValue::operator()(const DirichletCharacter& chi) const {
    require_even_primitive(chi);
    const std::size_t len = v_.size();
    // c(m) = sum_{d e = m} chi(d) conj(chi(e))
    std::vector<std::complex<double>> values(len);
    for (std::size_t n = 1; n < len; ++n) values[n] = char_eval(*ctx_, chi, static_cast<std::int64_t>(n));
    std::vector<std::complex<double>> conv(len);
    for (std::size_t d = 1; d < len; ++d) {
        if (values[d] == std::complex<double>{}) continue;
        for (std::size_t e = 1; d * e < len; ++e) conv[d * e] += values[d] * std::conj(values[e]);
    }
    std::vector<std::complex<double>> terms(len);
    for (std::size_t m = 1; m < len; ++m) terms[m] = conv[m] * v_[m];
    const std::complex<double> total = 2.0 * pairwise_sum(std::span<const std::complex<double>>(terms));
    if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real())))
        throw Error(ErrorCode::NumericalFailure, "|L|^2 via V has imaginary residue " + std::to_string(total.imag()));
    return total.real();
}

double central_value_squared(const PrimeContext& ctx, const DirichletCharacter& chi, const KernelConfig& cfg) {
    return SquaredCentralValue(ctx, cfg)(chi);
}

std::complex<double> mollifier_value(const PrimeContext& ctx, const DirichletCharacter& chi,
                                     const MollifierParams& params) {
    const auto yl = scaled_coeffs(params.y_long);
    const auto ys = scaled_coeffs(params.y_short);
    const auto P_long = direct_char_sum(ctx, chi, std::span<const double>(yl));
    const auto P_short = direct_char_sum(ctx, chi, std::span<const double>(ys));
    return assemble_M(params, P_long, P_short, gauss_sum(ctx, chi).value, std::sqrt(static_cast<double>(ctx.p())));
}

std::complex<double> mollifier0_value(const PrimeContext& ctx, const DirichletCharacter& chi, double theta) {
    const auto params = MollifierParams::make(ctx.p(), theta, 0.0, 1.0, 1.0);
    return mollifier_value(ctx, chi, params);
}

FamilyValues evaluate_family(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg,
                             SumPath path) {
    cfg.validate();
    FamilyValues out;
    out.characters = enumerate_even_primitive(ctx);
    const std::size_t n = out.characters.size();
    out.L.resize(n);
    out.tau.resize(n);
    out.long_piece.resize(n);
    out.short_piece.resize(n);

    const double sqrt_p = std::sqrt(static_cast<double>(ctx.p()));
    const auto a = afe_weights(ctx.p());
    const auto yl = scaled_coeffs(params.y_long);
    const auto ys = scaled_coeffs(params.y_short);

    if (path == SumPath::Naive) {
        parallel_for(n, [&](std::size_t i) {
            const auto& chi = out.characters[i];
            const auto A = direct_char_sum(ctx, chi, std::span<const double>(a));
            out.tau[i] = gauss_sum(ctx, chi).value;
            out.L[i] = assemble_L(A, out.tau[i], sqrt_p);
            out.long_piece[i] = direct_char_sum(ctx, chi, std::span<const double>(yl));
            out.short_piece[i] = direct_char_sum(ctx, chi, std::span<const double>(ys));
        });
        return out;
    }

    const auto A = character_sums_all(ctx, std::span<const double>(a));
    const auto Pl = character_sums_all(ctx, std::span<const double>(yl));
    const auto Ps = character_sums_all(ctx, std::span<const double>(ys));
    const auto tau = gauss_sum_table(ctx);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t j = out.characters[i].j;
        out.tau[i] = tau[j];
        out.L[i] = assemble_L(A[j], tau[j], sqrt_p);
        out.long_piece[i] = Pl[j];
        out.short_piece[i] = Ps[j];
    }
    return out;
}

MomentReport moments_from_family(std::uint32_t p, const MollifierParams& params, const FamilyValues& family,
                                 SumPath path) {
    const double sqrt_p = std::sqrt(static_cast<double>(p));
    const std::size_t n = family.characters.size();
    MomentReport r;
    r.p = p;
    r.params = params;
    r.path = path;
    r.family_size = n;

    std::vector<std::complex<double>> s1(n), t1(n);
    std::vector<double> s2(n), cross(n), sq_long(n), sq_short(n), t2(n);
    r.nonvanishing_threshold = 1e-8 * std::pow(static_cast<double>(p), 0.25);
    r.min_abs_L = n ? std::abs(family.L[0]) : 0.0;
    // Balanced mollifier: short piece, both halves, unit weights.
    for (std::size_t i = 0; i < n; ++i) {
        const auto L = family.L[i];
        const auto tau = family.tau[i];
        const auto M = assemble_M(params, family.long_piece[i], family.short_piece[i], tau, sqrt_p);
        const double L2 = std::norm(L);
        s1[i] = L * M;
        s2[i] = std::norm(L * M);
        cross[i] = L2 * (tau / sqrt_p * family.long_piece[i] * family.short_piece[i]).real();
        sq_long[i] = L2 * std::norm(family.long_piece[i]);
        sq_short[i] = L2 * std::norm(family.short_piece[i]);
        const auto M0 = family.short_piece[i] + std::conj(tau) / sqrt_p * std::conj(family.short_piece[i]);
        t1[i] = L * M0;
        t2[i] = std::norm(L * M0);
        const double absL = std::abs(L);
        r.min_abs_L = std::min(r.min_abs_L, absL);
        if (absL > r.nonvanishing_threshold) ++r.nonvanishing_count;
    }
    r.S1 = 2.0 / p * pairwise_sum(std::span<const std::complex<double>>(s1));
    r.S2 = mean_over_family(s2, p);
    r.S1_predicted = predicted_first_moment(params);
    r.S2_predicted = predicted_second_moment(params);
    r.parts.cross = 2.0 * params.c1 * params.c2 * mean_over_family(cross, p);
    r.parts.square_long = params.c1 * params.c1 * mean_over_family(sq_long, p);
    r.parts.square_short = params.c2 * params.c2 * mean_over_family(sq_short, p);
    r.parts.cross_predicted = 2.0 * params.c1 * params.c2;
    r.parts.square_long_predicted = params.c1 * params.c1 * (1.0 / (params.theta + params.alpha) + 1.0);
    r.parts.square_short_predicted = params.c2 * params.c2 * (1.0 / params.theta + 1.0);
    r.cs_ratio = r.S2 > 0.0 ? std::norm(r.S1) / r.S2 : 0.0;
    r.proportion_predicted = predicted_proportion(params.theta, params.alpha, params.c1, params.c2);
    r.balanced.T1 = 2.0 / p * pairwise_sum(std::span<const std::complex<double>>(t1));
    r.balanced.T2 = mean_over_family(t2, p);
    r.balanced.T2_predicted = 2.0 / params.theta + 4.0;
    return r;
}

MomentReport compute_moments(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg,
                             SumPath path) {
    return moments_from_family(ctx.p(), params, evaluate_family(ctx, params, cfg, path), path);
}

std::complex<double> first_moment(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg,
                                  SumPath path) {
    return compute_moments(ctx, params, cfg, path).S1;
}

SecondMoment second_moment(const PrimeContext& ctx, const MollifierParams& params, const KernelConfig& cfg,
                           SumPath path) {
    const auto r = compute_moments(ctx, params, cfg, path);
    return {r.S2, r.parts};
}

}  // namespace lnv
