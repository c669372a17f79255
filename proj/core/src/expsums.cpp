#include "lnv/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "lnv/dft.hpp"
#include "lnv/error.hpp"
#include "lnv/parallel.hpp"

namespace lnv {

namespace {

double coeff(std::span<const double> y, std::int64_t m) {
    if (m < 0 || static_cast<std::size_t>(m) >= y.size()) return 0.0;
    return y[static_cast<std::size_t>(m)];
}

void require_nonempty(const Window& w, const char* name) {
    if (w.size() <= 0)
        throw Error(ErrorCode::WindowEmpty, std::string(name) + " window [" + std::to_string(w.lo) + ", " +
                                                std::to_string(w.hi) + "] is empty");
}

void require_invertible_window(const PrimeContext& ctx, const Window& w, const char* name) {
    for (std::int64_t m = w.lo; m <= w.hi; ++m)
        if (ctx.reduce(m) == 0)
            throw Error(ErrorCode::NonInvertible, std::string(name) + " window contains " + std::to_string(m) +
                                                      ", a multiple of p");
}

}  // namespace

double kloosterman(const PrimeContext& ctx, std::int64_t x, std::int64_t y) {
    const std::uint64_t p = ctx.p();
    const std::uint64_t xr = ctx.reduce(x), yr = ctx.reduce(y);
    std::vector<std::complex<double>> terms(p - 1);
    for (std::uint32_t u = 1; u < p; ++u) terms[u - 1] = ctx.e_p(static_cast<std::uint32_t>((xr * u + yr * ctx.inv(u)) % p));
    const auto s = pairwise_sum(std::span<const std::complex<double>>(terms));
    if (std::abs(s.imag()) > 1e-9)
        throw Error(ErrorCode::NumericalFailure, "Kloosterman sum has imaginary part " + std::to_string(s.imag()));
    return s.real();
}

KloostermanRow kloosterman_row(const PrimeContext& ctx, std::int64_t y) {
    const std::uint64_t p = ctx.p();
    const std::uint64_t yr = ctx.reduce(y);
    std::vector<std::complex<double>> seq(p);
    for (std::uint32_t u = 1; u < p; ++u) seq[u] = ctx.e_p(static_cast<std::uint32_t>(yr * ctx.inv(u) % p));
    const auto spectrum = dft(seq, DftSign::Positive);
    KloostermanRow row;
    row.y = static_cast<std::uint32_t>(yr);
    row.values.resize(p);
    for (std::size_t h = 0; h < p; ++h) {
        if (std::abs(spectrum[h].imag()) > 1e-9)
            throw Error(ErrorCode::NumericalFailure, "Kloosterman row entry has imaginary part");
        row.values[h] = spectrum[h].real();
    }
    return row;
}

KloostermanRowCache::KloostermanRowCache(const PrimeContext& ctx, std::size_t capacity)
    : ctx_(&ctx), capacity_(std::max<std::size_t>(1, capacity)) {}

std::shared_ptr<const KloostermanRow> KloostermanRowCache::get(std::int64_t y) {
    const std::uint32_t key = ctx_->reduce(y);
    {
        std::shared_lock lock(mutex_);
        if (auto it = rows_.find(key); it != rows_.end()) return it->second;
    }
    auto row = std::make_shared<const KloostermanRow>(kloosterman_row(*ctx_, key));
    std::unique_lock lock(mutex_);
    if (auto it = rows_.find(key); it != rows_.end()) return it->second;
    if (rows_.size() >= capacity_) {
        rows_.erase(order_.front());
        order_.pop_front();
    }
    rows_.emplace(key, row);
    order_.push_back(key);
    return row;
}

std::size_t KloostermanRowCache::size() const {
    std::shared_lock lock(mutex_);
    return rows_.size();
}

double four_product_sum(KloostermanRowCache& cache, const Quadruple& m) {
    const PrimeContext& ctx = cache.context();
    std::array<std::shared_ptr<const KloostermanRow>, 4> rows;
    for (std::size_t i = 0; i < 4; ++i) rows[i] = cache.get(inverse_mod(ctx, m[i]));
    std::vector<double> terms(ctx.p());
    for (std::size_t h = 0; h < terms.size(); ++h)
        terms[h] = rows[0]->values[h] * rows[1]->values[h] * rows[2]->values[h] * rows[3]->values[h];
    return pairwise_sum(std::span<const double>(terms));
}

double four_product_sum(const PrimeContext& ctx, const Quadruple& m) {
    KloostermanRowCache cache(ctx, 4);
    return four_product_sum(cache, m);
}

bool has_distinct_entry(const Quadruple& m) noexcept {
    for (std::size_t i = 0; i < 4; ++i) {
        int count = 0;
        for (std::size_t j = 0; j < 4; ++j) count += m[i] == m[j];
        if (count == 1) return true;
    }
    return false;
}

FourProductSweep four_product_sweep(const PrimeContext& ctx, std::int64_t max_m) {
    if (max_m < 1) throw Error(ErrorCode::WindowEmpty, "four-product sweep needs max_m >= 1");
    KloostermanRowCache cache(ctx, static_cast<std::size_t>(max_m) + 1);
    for (std::int64_t m = 1; m <= max_m; ++m) cache.get(inverse_mod(ctx, m));

    FourProductSweep out;
    out.p = ctx.p();
    out.max_m = max_m;
    const double p = ctx.p();
    const double distinct_scale = std::pow(p, 2.5);
    const double weil_scale = 16.0 * p * p * p;

    const auto side = static_cast<std::size_t>(max_m);
    const std::size_t total = side * side * side * side;
    std::vector<double> values(total);
    parallel_for(side, [&](std::size_t a) {
        for (std::size_t rest = 0; rest < side * side * side; ++rest) {
            const Quadruple m{static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(rest / (side * side) + 1),
                              static_cast<std::int64_t>(rest / side % side + 1),
                              static_cast<std::int64_t>(rest % side + 1)};
            values[a * side * side * side + rest] = four_product_sum(cache, m);
        }
    });
    for (std::size_t idx = 0; idx < total; ++idx) {
        const Quadruple m{static_cast<std::int64_t>(idx / (side * side * side) + 1),
                          static_cast<std::int64_t>(idx / (side * side) % side + 1),
                          static_cast<std::int64_t>(idx / side % side + 1), static_cast<std::int64_t>(idx % side + 1)};
        const double v = std::abs(values[idx]);
        if (has_distinct_entry(m)) {
            ++out.tuples;
            if (v / distinct_scale > out.max_ratio) {
                out.max_ratio = v / distinct_scale;
                out.argmax = m;
            }
        } else {
            ++out.degenerate_tuples;
            out.max_degenerate_weil_ratio = std::max(out.max_degenerate_weil_ratio, v / weil_scale);
        }
    }
    return out;
}

WeilSweep weil_sweep(const PrimeContext& ctx) {
    const std::uint32_t p = ctx.p();
    if (p > 5000) throw Error(ErrorCode::ScaleExceeded, "exhaustive Weil sweep holds all p rows; limited to p <= 5000");
    std::vector<KloostermanRow> rows(p);
    parallel_for(p, [&](std::size_t y) { rows[y] = kloosterman_row(ctx, static_cast<std::int64_t>(y)); });

    WeilSweep out;
    out.p = p;
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    for (std::uint32_t y = 0; y < p; ++y) {
        for (std::uint32_t x = 0; x < p; ++x) {
            const double s = rows[y].values[x];
            if (x != 0 || y != 0) {
                ++out.pairs;
                out.max_ratio = std::max(out.max_ratio, std::abs(s) / bound);
            }
            out.max_symmetry_gap = std::max(out.max_symmetry_gap, std::abs(s - rows[x].values[y]));
        }
    }
    // Spot-check rows against direct sums on a fixed sample of y.
    for (std::uint32_t y : {1u, 2u, p / 2, p - 1}) {
        for (std::uint32_t x = 0; x < p; x += std::max(1u, p / 16))
            out.max_row_naive_gap = std::max(out.max_row_naive_gap, std::abs(rows[y].values[x] - kloosterman(ctx, x, y)));
    }
    out.weil_holds = out.max_ratio <= 1.0 + 1e-12;
    return out;
}

NuStats nu_statistics(const PrimeContext& ctx, const NuWindows& w) {
    require_nonempty(w.k, "k");
    require_nonempty(w.n, "n");
    require_nonempty(w.m1, "m1");
    require_invertible_window(ctx, w.m1, "m1");
    const std::uint64_t p = ctx.p();

    NuStats out;
    out.windows = w;
    out.nu.assign(p, 0);
    for (std::int64_t k = w.k.lo; k <= w.k.hi; ++k) {
        const std::uint64_t kr = ctx.reduce(k);
        for (std::int64_t n = w.n.lo; n <= w.n.hi; ++n) {
            const std::uint64_t kn = kr * ctx.reduce(n) % p;
            for (std::int64_t m = w.m1.lo; m <= w.m1.hi; ++m) ++out.nu[kn * ctx.inv(ctx.reduce(m)) % p];
        }
    }
    std::vector<double> four_thirds(p);
    for (std::size_t h = 0; h < p; ++h) {
        out.sum += out.nu[h];
        out.sum_squares += out.nu[h] * out.nu[h];
        four_thirds[h] = std::pow(static_cast<double>(out.nu[h]), 4.0 / 3.0);
    }
    out.sum_four_thirds = pairwise_sum(std::span<const double>(four_thirds));

    const bool positive = w.k.lo >= 1 && w.n.lo >= 1 && w.m1.lo >= 1;
    if (positive) {
        out.divisor_count = divisor_equation_count(w);
        const auto max_product = static_cast<unsigned __int128>(w.k.hi) * w.n.hi * w.m1.hi;
        out.below_modulus = max_product < p;
    }
    return out;
}

std::uint64_t divisor_equation_count(const NuWindows& w) {
    require_nonempty(w.k, "k");
    require_nonempty(w.n, "n");
    require_nonempty(w.m1, "m1");
    if (w.k.lo < 1 || w.n.lo < 1 || w.m1.lo < 1)
        throw Error(ErrorCode::RangeViolation, "divisor-equation count needs positive windows");
    // k n m1' = k' n' m1: both sides range over the same product set, so the
    // count is sum over values v of (#{(k, n, m) : k n m = v})^2.
    std::map<std::uint64_t, std::uint64_t> reps;
    for (std::int64_t k = w.k.lo; k <= w.k.hi; ++k)
        for (std::int64_t n = w.n.lo; n <= w.n.hi; ++n)
            for (std::int64_t m = w.m1.lo; m <= w.m1.hi; ++m)
                ++reps[static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m)];
    std::uint64_t count = 0;
    for (const auto& [value, c] : reps) count += c * c;
    return count;
}

HolderReport holder_pipeline(const PrimeContext& ctx, const HolderWindows& w, std::span<const double> y_m1,
                             std::span<const double> y_m2, double delta) {
    require_nonempty(w.k, "k");
    require_nonempty(w.n, "n");
    require_nonempty(w.m1, "m1");
    require_nonempty(w.m2, "m2");
    require_invertible_window(ctx, w.m1, "m1");
    require_invertible_window(ctx, w.m2, "m2");
    const double tuples = static_cast<double>(w.k.size()) * w.n.size() * w.m1.size() * w.m2.size();
    if (tuples > 1e9) throw Error(ErrorCode::ScaleExceeded, "Hoelder pipeline limited to 1e9 tuples");
    const std::uint64_t p = ctx.p();

    // Glue h = k n inv(m1): A(h) collects the weights, nu(h) the counts.
    std::vector<double> A(p, 0.0);
    std::vector<std::uint64_t> nu(p, 0);
    HolderReport out;
    for (std::int64_t m1 = w.m1.lo; m1 <= w.m1.hi; ++m1) {
        const double y1 = coeff(y_m1, m1);
        out.weight_sup = std::max(out.weight_sup, std::abs(y1));
        const std::uint64_t inv_m1 = ctx.inv(ctx.reduce(m1));
        for (std::int64_t k = w.k.lo; k <= w.k.hi; ++k) {
            const std::uint64_t kr = ctx.reduce(k) * inv_m1 % p;
            for (std::int64_t n = w.n.lo; n <= w.n.hi; ++n) {
                const std::uint64_t h = kr * ctx.reduce(n) % p;
                A[h] += y1;
                ++nu[h];
            }
        }
    }

    // T(h) = sum_{m2} y_{m2} S(h, inv(m2))
    std::vector<double> T(p, 0.0);
    KloostermanRowCache cache(ctx, 1);
    for (std::int64_t m2 = w.m2.lo; m2 <= w.m2.hi; ++m2) {
        const double y2 = coeff(y_m2, m2);
        if (y2 == 0.0) continue;
        const auto row = cache.get(ctx.inv(ctx.reduce(m2)));
        for (std::size_t h = 0; h < p; ++h) T[h] += y2 * row->values[h];
    }

    std::vector<double> lhs_terms(p), nu43(p), t4(p);
    for (std::size_t h = 0; h < p; ++h) {
        lhs_terms[h] = A[h] * T[h];
        nu43[h] = std::pow(static_cast<double>(nu[h]), 4.0 / 3.0);
        t4[h] = std::pow(T[h], 4);
    }
    out.lhs = std::abs(pairwise_sum(std::span<const double>(lhs_terms)));
    out.sum_nu_four_thirds = pairwise_sum(std::span<const double>(nu43));
    out.fourth_moment = pairwise_sum(std::span<const double>(t4));
    out.rhs = out.weight_sup * std::pow(out.sum_nu_four_thirds, 0.75) * std::pow(out.fourth_moment, 0.25);
    out.holder_holds = out.lhs <= out.rhs * (1.0 + 1e-6) + 1e-12;

    // Dyadic parameters read off the windows: p/N1 = |k|max, N2, M1, M2 = lower ends.
    const double pd = static_cast<double>(p);
    const double p_over_N1 = static_cast<double>(std::max(std::abs(w.k.lo), std::abs(w.k.hi)));
    const double N2 = std::max<double>(1.0, static_cast<double>(w.n.lo));
    const double M1 = std::max<double>(1.0, static_cast<double>(w.m1.lo));
    const double M2 = std::max<double>(1.0, static_cast<double>(w.m2.lo));
    out.envelope = std::pow(pd, delta) * std::pow(p_over_N1 * N2 * M1, 0.75) *
                   (M2 * std::pow(pd, 0.625) + std::sqrt(M2) * std::pow(pd, 0.75));
    out.rhs_over_envelope = out.rhs / out.envelope;
    return out;
}

double trilinear_direct(const PrimeContext& ctx, const HolderWindows& w, std::span<const double> y_m1,
                        std::span<const double> y_m2) {
    const std::uint64_t p = ctx.p();
    KloostermanRowCache cache(ctx, static_cast<std::size_t>(std::max<std::int64_t>(1, w.m2.size())));
    std::vector<double> terms;
    for (std::int64_t m2 = w.m2.lo; m2 <= w.m2.hi; ++m2) {
        const auto row = cache.get(inverse_mod(ctx, m2));
        for (std::int64_t m1 = w.m1.lo; m1 <= w.m1.hi; ++m1) {
            const std::uint64_t inv_m1 = inverse_mod(ctx, m1);
            for (std::int64_t k = w.k.lo; k <= w.k.hi; ++k)
                for (std::int64_t n = w.n.lo; n <= w.n.hi; ++n) {
                    const std::uint64_t h = ctx.reduce(k) * static_cast<std::uint64_t>(ctx.reduce(n)) % p * inv_m1 % p;
                    terms.push_back(coeff(y_m1, m1) * coeff(y_m2, m2) * row->values[h]);
                }
        }
    }
    return std::abs(pairwise_sum(std::span<const double>(terms)));
}

}  // namespace lnv
