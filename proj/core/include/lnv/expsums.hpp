#pragma once

// Kloosterman sums S(x, y; p) = sum_{u != 0} e((x u + y inv(u)) / p), rows of
// them for fixed y, complete sums of four products, the representation counts
// nu(h) of h = k n inv(m1) mod p, and the Hoelder chain bounding the glued
// trilinear sum.

#include <array>
#include <complex>
#include <cstdint>
#include <list>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "lnv/arith.hpp"

namespace lnv {

// Direct O(p) summation; throws Error{NumericalFailure} if the imaginary part
// exceeds 1e-9 (the sum is real).
double kloosterman(const PrimeContext& ctx, std::int64_t x, std::int64_t y);

struct KloostermanRow {
    std::uint32_t y = 0;
    std::vector<double> values;  // values[h] = S(h, y; p)
};

// Length-p DFT of u -> e(y inv(u)/p) (zero at u = 0).
KloostermanRow kloosterman_row(const PrimeContext& ctx, std::int64_t y);

// Rows keyed by y with FIFO eviction once `capacity` rows are held. Readers
// share a lock; insertion is exclusive. The context must outlive the cache.
class KloostermanRowCache {
public:
    explicit KloostermanRowCache(const PrimeContext& ctx, std::size_t capacity = 256);

    std::shared_ptr<const KloostermanRow> get(std::int64_t y);
    std::size_t size() const;
    const PrimeContext& context() const noexcept { return *ctx_; }

private:
    const PrimeContext* ctx_;
    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint32_t, std::shared_ptr<const KloostermanRow>> rows_;
    std::list<std::uint32_t> order_;
};

using Quadruple = std::array<std::int64_t, 4>;

// sum_h prod_i S(h, inv(m_i); p). Throws Error{NonInvertible} if p | m_i.
double four_product_sum(KloostermanRowCache& cache, const Quadruple& m);
double four_product_sum(const PrimeContext& ctx, const Quadruple& m);

// At least one entry occurs exactly once.
bool has_distinct_entry(const Quadruple& m) noexcept;

struct FourProductSweep {
    std::uint32_t p = 0;
    std::int64_t max_m = 0;
    std::size_t tuples = 0;          // tuples with a distinct entry
    double max_ratio = 0.0;          // max |sum| / p^{5/2}
    Quadruple argmax{};
    std::size_t degenerate_tuples = 0;
    double max_degenerate_weil_ratio = 0.0;  // max |sum| / (16 p^3) over the rest
};
// Exhaustive over m_i in [1, max_m].
FourProductSweep four_product_sweep(const PrimeContext& ctx, std::int64_t max_m);

struct WeilSweep {
    std::uint32_t p = 0;
    std::size_t pairs = 0;
    double max_ratio = 0.0;         // max |S(x,y)| / (2 sqrt p) over (x,y) != (0,0)
    double max_symmetry_gap = 0.0;  // |S(x,y) - S(y,x)|
    double max_row_naive_gap = 0.0; // sampled rows vs direct sums
    bool weil_holds = false;
};
// Exhaustive over all (x, y) using rows; symmetry checked on every pair.
// Throws Error{ScaleExceeded} for p > 5000 (all rows are held at once).
WeilSweep weil_sweep(const PrimeContext& ctx);

struct Window {
    std::int64_t lo = 1;
    std::int64_t hi = 1;
    std::int64_t size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
};

struct NuWindows {
    Window k;
    Window n;
    Window m1;
};

struct NuStats {
    NuWindows windows;
    std::vector<std::uint64_t> nu;  // nu[h], h mod p
    std::uint64_t sum = 0;
    std::uint64_t sum_squares = 0;
    double sum_four_thirds = 0.0;
    std::uint64_t divisor_count = 0;  // #{k n m1' = k' n' m1} over the windows
    bool below_modulus = false;       // max k n m1 < p: the two counts must agree
};

// Throws Error{WindowEmpty}, Error{NonInvertible} if p divides some m1.
NuStats nu_statistics(const PrimeContext& ctx, const NuWindows& windows);

// Integer-only count of solutions of k n m1' = k' n' m1 with all variables in
// their windows (positive windows only).
std::uint64_t divisor_equation_count(const NuWindows& windows);

struct HolderWindows {
    Window k;
    Window n;
    Window m1;
    Window m2;
};

struct HolderReport {
    double lhs = 0.0;       // (a) |sum y_{m1} y_{m2} S(k n inv(m1), inv(m2))|
    double rhs = 0.0;       // (b) w_max (sum nu^{4/3})^{3/4} (sum_h |T(h)|^4)^{1/4}
    double envelope = 0.0;  // (c) p^d (p N2 M1/N1)^{3/4} (M2 p^{5/8} + M2^{1/2} p^{3/4})
    double weight_sup = 0.0;
    double sum_nu_four_thirds = 0.0;
    double fourth_moment = 0.0;  // sum_h |T(h)|^4
    bool holder_holds = false;   // lhs <= rhs (1 + 1e-6)
    double rhs_over_envelope = 0.0;
};

// y_m1 and y_m2 are indexed by m; entries beyond the table are zero. Throws
// Error{ScaleExceeded} when the enumeration exceeds 1e9 tuples.
HolderReport holder_pipeline(const PrimeContext& ctx, const HolderWindows& windows, std::span<const double> y_m1,
                             std::span<const double> y_m2, double delta = 0.1);

// Direct quadruple enumeration of (a) without the h-grouping; test oracle.
double trilinear_direct(const PrimeContext& ctx, const HolderWindows& windows, std::span<const double> y_m1,
                        std::span<const double> y_m2);

}  // namespace lnv
