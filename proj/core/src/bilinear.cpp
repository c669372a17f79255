#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "lnv/error.hpp"
#include "lnv/expsums.hpp"
#include "lnv/lmoments.hpp"
#include "lnv/parallel.hpp"

namespace lnv {

namespace {

double coeff(std::span<const double> y, std::int64_t m) {
    if (m < 0 || static_cast<std::size_t>(m) >= y.size()) return 0.0;
    return y[static_cast<std::size_t>(m)];
}

// Integer points of [N, 2N] where the bump can be nonzero.
std::pair<std::int64_t, std::int64_t> support(double N) {
    return {static_cast<std::int64_t>(std::ceil(N)), static_cast<std::int64_t>(std::floor(2.0 * N))};
}

// Shared preparation of both evaluations.
struct Prepared {
    double norm = 0.0;  // (p M1 M2 N1 N2)^{-1/2}
    // Y(r) = sum_{m1 m2 = r mod p} y_{m1} y_{m2}
    std::map<std::uint32_t, double> Y;
    std::vector<std::int64_t> n1s, n2s;
    // F[i][j] = V(n1 n2/p) f(n1/N1) f(n2/N2)
    std::vector<std::vector<double>> F;
};

Prepared prepare(const PrimeContext& ctx, const BilinearSpec& spec, const KernelConfig& cfg) {
    spec.check_ranges(ctx.p());
    const double p = ctx.p();
    Prepared out;
    out.norm = 1.0 / std::sqrt(p * spec.M1 * spec.M2 * spec.N1 * spec.N2);

    for (std::int64_t m1 = spec.M1; m1 < 2 * spec.M1; ++m1) {
        const double y1 = coeff(spec.y_long, m1);
        if (y1 == 0.0 || ctx.reduce(m1) == 0) continue;
        for (std::int64_t m2 = spec.M2; m2 < 2 * spec.M2; ++m2) {
            const double y2 = coeff(spec.y_short, m2);
            if (y2 == 0.0 || ctx.reduce(m2) == 0) continue;
            out.Y[ctx.reduce(m1 * m2)] += y1 * y2;
        }
    }

    const auto [a1, b1] = support(spec.N1);
    const auto [a2, b2] = support(spec.N2);
    for (std::int64_t n = std::max<std::int64_t>(1, a1); n <= b1; ++n)
        if (bump(n / spec.N1) != 0.0) out.n1s.push_back(n);
    for (std::int64_t n = std::max<std::int64_t>(1, a2); n <= b2; ++n)
        if (bump(n / spec.N2) != 0.0 && ctx.reduce(n) != 0) out.n2s.push_back(n);

    const MellinQuadrature V(Kernel::V, cfg);
    out.F.assign(out.n1s.size(), std::vector<double>(out.n2s.size(), 0.0));
    parallel_for(out.n1s.size(), [&](std::size_t i) {
        const double n1 = static_cast<double>(out.n1s[i]);
        for (std::size_t j = 0; j < out.n2s.size(); ++j) {
            const double n2 = static_cast<double>(out.n2s[j]);
            out.F[i][j] = V(n1 * n2 / p) * bump(n1 / spec.N1) * bump(n2 / spec.N2);
        }
    });
    return out;
}

}  // namespace

double bump(double x) noexcept {
    if (!(x > 1.25 && x < 1.75)) return 0.0;
    const double u = 4.0 * x - 6.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

BilinearSpec BilinearSpec::from_params(const MollifierParams& params, std::int64_t M1, std::int64_t M2, double N1,
                                       double N2, double delta) {
    BilinearSpec s;
    s.M1 = M1;
    s.M2 = M2;
    s.N1 = N1;
    s.N2 = N2;
    s.long_length = params.long_length;
    s.short_length = params.short_length;
    s.y_long = params.y_long;
    s.y_short = params.y_short;
    s.delta = delta;
    return s;
}

void BilinearSpec::check_ranges(std::uint32_t p) const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::RangeViolation, what); };
    if (M1 < 1 || M2 < 1) fail("M1, M2 >= 1");
    if (!(N1 >= 0.5) || !(N2 >= 0.5)) fail("N1, N2 >= 1/2");
    if (N1 * N2 > std::pow(static_cast<double>(p), 1.0 + delta)) fail("N1 N2 <= p^{1+delta}");
    if (static_cast<double>(M1) > (static_cast<double>(long_length) + 1.0) / 2.0) fail("M1 <= (MR+1)/2");
    if (static_cast<double>(M2) > (static_cast<double>(short_length) + 1.0) / 2.0) fail("M2 <= (M+1)/2");
    if (static_cast<double>(M1) * static_cast<double>(M2) * N1 < 1.0) fail("M1 M2 N1 >= 1");
}

std::complex<double> bilinear_form(const PrimeContext& ctx, const BilinearSpec& spec, const KernelConfig& cfg) {
    const auto prep = prepare(ctx, spec, cfg);
    const std::uint64_t p = ctx.p();
    std::vector<std::complex<double>> rows(prep.n1s.size());
    parallel_for(prep.n1s.size(), [&](std::size_t i) {
        const std::uint32_t n1r = ctx.reduce(prep.n1s[i]);
        if (n1r == 0) return;
        std::vector<std::complex<double>> terms;
        for (std::size_t j = 0; j < prep.n2s.size(); ++j) {
            const double F = prep.F[i][j];
            if (F == 0.0) continue;
            const std::uint64_t n2r = ctx.reduce(prep.n2s[j]);
            for (const auto& [r, Y] : prep.Y) {
                const std::uint64_t den_inv = ctx.inv(static_cast<std::uint32_t>(static_cast<std::uint64_t>(n1r) * r % p));
                terms.push_back(F * Y * ctx.e_p(static_cast<std::uint32_t>(n2r * den_inv % p)));
            }
        }
        rows[i] = pairwise_sum(std::span<const std::complex<double>>(terms));
    });
    return prep.norm * pairwise_sum(std::span<const std::complex<double>>(rows));
}

PoissonDual bilinear_poisson_dual(const PrimeContext& ctx, const BilinearSpec& spec, const KernelConfig& cfg) {
    const auto prep = prepare(ctx, spec, cfg);
    const std::uint32_t p = ctx.p();
    const double pd = p;

    KloostermanRowCache cache(ctx, prep.Y.size() + 1);
    std::vector<std::pair<double, std::shared_ptr<const KloostermanRow>>> weighted_rows;
    for (const auto& [r, Y] : prep.Y) weighted_rows.emplace_back(Y, cache.get(ctx.inv(r)));

    // contribution[k] = norm/p sum_{n2} Fhat_{n2}(k) sum_r Y(r) S(k n2, inv r)
    std::vector<std::vector<std::complex<double>>> per_n2(prep.n2s.size());
    std::vector<double> sup(prep.n2s.size(), 0.0);
    parallel_for(prep.n2s.size(), [&](std::size_t j) {
        auto& contrib = per_n2[j];
        contrib.assign(p, {});
        const std::uint64_t n2r = ctx.reduce(prep.n2s[j]);
        for (std::uint32_t k = 0; k < p; ++k) {
            // Finite Fourier transform of n1 -> F(n1, n2) at k/p.
            std::complex<double> Fhat{};
            for (std::size_t i = 0; i < prep.n1s.size(); ++i) {
                const double F = prep.F[i][j];
                if (F == 0.0) continue;
                const std::uint32_t phase = ctx.reduce(-static_cast<std::int64_t>(k) * prep.n1s[i]);
                Fhat += F * ctx.e_p(phase);
            }
            sup[j] = std::max(sup[j], std::abs(Fhat) / spec.N1);
            if (Fhat == std::complex<double>{}) continue;
            const std::uint32_t h = static_cast<std::uint32_t>(k * n2r % p);
            double kl = 0.0;
            for (const auto& [Y, row] : weighted_rows) kl += Y * row->values[h];
            contrib[k] = Fhat * kl;
        }
    });

    PoissonDual out;
    out.dual_kernel_sup = sup.empty() ? 0.0 : *std::max_element(sup.begin(), sup.end());
    std::vector<std::complex<double>> by_k(p);
    for (std::uint32_t k = 0; k < p; ++k) {
        std::vector<std::complex<double>> col(prep.n2s.size());
        for (std::size_t j = 0; j < prep.n2s.size(); ++j) col[j] = per_n2[j][k];
        by_k[k] = prep.norm / pd * pairwise_sum(std::span<const std::complex<double>>(col));
    }
    out.value = pairwise_sum(std::span<const std::complex<double>>(by_k));
    out.k_zero = by_k[0];
    // Centered k: residues above p/2 stand for k - p.
    out.spectrum.reserve(p);
    for (std::uint32_t k = 0; k < p; ++k) {
        const std::int64_t centered = k <= p / 2 ? static_cast<std::int64_t>(k) : static_cast<std::int64_t>(k) - p;
        out.spectrum.emplace_back(centered, by_k[k]);
    }
    std::sort(out.spectrum.begin(), out.spectrum.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

BilinearEnvelopes bilinear_envelopes(std::uint32_t p, const BilinearSpec& spec) {
    const double pd = p;
    const double pe = std::pow(pd, spec.delta);
    const double M = static_cast<double>(spec.short_length);
    const double MR = static_cast<double>(spec.long_length);
    const double R = MR / M;
    BilinearEnvelopes out;
    out.pois1 = pe * std::sqrt(spec.M1 * spec.M2 * spec.N1 / (pd * spec.N2)) + 1.0 / pe;
    out.bbound = std::pow(pe * spec.N2 * MR / spec.N1, 0.25) +
                 std::pow(pe * spec.N2 * spec.N2 * std::pow(M, 6) * R * R / (spec.N1 * spec.N1 * pd), 0.125) +
                 1.0 / pe;
    return out;
}

}  // namespace lnv
