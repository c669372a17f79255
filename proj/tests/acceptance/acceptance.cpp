// Acceptance suite: one PASS/FAIL line per criterion.
//
//   lnv_acceptance                 run every criterion
//   lnv_acceptance --criterion 4   run one (repeatable)
//   lnv_acceptance --list

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lnv/arith.hpp"
#include "lnv/characters.hpp"
#include "lnv/error.hpp"
#include "lnv/expsums.hpp"
#include "lnv/lmoments.hpp"
#include "lnv/optimize.hpp"

using namespace lnv;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<void(Outcome&)> body;
};

Rational q(long long n, long long d = 1) { return Rational(n) / Rational(d); }

std::vector<std::uint32_t> primes_between(std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = lo; n <= hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

void optimization_exactness(Outcome& out) {
    const Rational full = proportion(q(1, 4), q(1, 8), q(3, 5), q(2, 5));
    const auto closure = maximize_combined_length(q(0));
    const auto no_alpha = maximize_combined_length(q(0), q(0));
    const Rational one_third = proportion(q(1, 4), q(0), q(1, 2), q(1, 2));
    out.detail << "proportion(1/4,1/8,3/5,2/5)=" << to_string(full) << " optimum(theta,alpha)=("
               << to_string(closure.theta) << "," << to_string(closure.alpha) << ") -> " << to_string(closure.proportion)
               << "; alpha=0 -> theta=" << to_string(no_alpha.theta) << ", " << to_string(no_alpha.proportion)
               << "; proportion(1/4,0,1/2,1/2)=" << to_string(one_third);
    out.require(full == q(5, 13), "5/13 at (1/4,1/8,3/5,2/5)");
    out.require(closure.theta == q(1, 4) && closure.alpha == q(1, 8) && closure.proportion == q(5, 13),
                "closure optimum (1/4,1/8) with 5/13");
    out.require(closure.c1 == q(3, 5) && closure.c2 == q(2, 5), "optimal weights (3/5,2/5)");
    out.require(no_alpha.theta == q(3, 10) && no_alpha.proportion == q(3, 8), "alpha=0 optimum 3/8 at 3/10");
    out.require(one_third == q(1, 3), "1/3 at (1/4,0,1/2,1/2)");
    out.require(closure.methods_agree && no_alpha.methods_agree, "LP and grid agree");
}

void character_identities(Outcome& out) {
    std::mt19937_64 rng(2024);
    double worst_pair = 0.0, worst_twist = 0.0;
    std::size_t primes = 0, pairs = 0;
    for (std::uint32_t p : primes_between(5, 499)) {
        PrimeContext ctx(p);
        const auto family = enumerate_even_primitive(ctx);
        std::vector<std::complex<double>> tau;
        for (const auto& chi : family) tau.push_back(gauss_sum(ctx, chi).value);
        std::uniform_int_distribution<std::int64_t> d(1, p - 1);
        for (int t = 0; t < 100; ++t) {
            const auto n1 = d(rng), n2 = d(rng);
            std::complex<double> brute_pair = 0.0, brute_twist = 0.0;
            for (std::size_t i = 0; i < family.size(); ++i) {
                const auto c1 = char_eval(ctx, family[i], n1);
                brute_pair += c1 * std::conj(char_eval(ctx, family[i], n2));
                brute_twist += tau[i] * c1;
            }
            brute_pair *= 2.0 / p;
            brute_twist /= double(p);
            const auto pair = even_pair_average(ctx, n1, n2);
            const auto twist = gauss_twisted_average(ctx, n1);
            const double pc = even_pair_average_closed_form(ctx, n1, n2);
            const double tc = gauss_twisted_average_closed_form(ctx, n1);
            worst_pair = std::max({worst_pair, std::abs(pair - brute_pair), std::abs(pair - pc), std::abs(brute_pair - pc)});
            worst_twist =
                std::max({worst_twist, std::abs(twist - brute_twist), std::abs(twist - tc), std::abs(brute_twist - tc)});
            ++pairs;
        }
        ++primes;
    }
    out.detail << primes << " primes, " << pairs << " pairs; max |pair gap|=" << worst_pair
               << " max |twisted gap|=" << worst_twist << " (tol 1e-10)";
    out.require(worst_pair < 1e-10, "pair average within 1e-10");
    out.require(worst_twist < 1e-10, "twisted average within 1e-10");
}

void weil_bound(Outcome& out) {
    std::mt19937_64 rng(61);
    for (std::uint32_t p : {61u, 101u, 199u, 499u}) {
        PrimeContext ctx(p);
        const auto w = weil_sweep(ctx);
        // direct sums carry the reality assertion; scaling S(ax,y) = S(x,ay)
        std::uniform_int_distribution<std::int64_t> d(0, p - 1), nz(1, p - 1);
        double scaling_gap = 0.0;
        for (int t = 0; t < 200; ++t) {
            const auto x = d(rng), y = d(rng), a = nz(rng);
            scaling_gap = std::max(scaling_gap, std::abs(kloosterman(ctx, a * x, y) - kloosterman(ctx, x, a * y)));
        }
        out.detail << "p=" << p << ": max|S|/2sqrt(p)=" << w.max_ratio << " sym gap=" << w.max_symmetry_gap
                   << " scaling gap=" << scaling_gap << " row gap=" << w.max_row_naive_gap << "; ";
        out.require(w.weil_holds && w.max_ratio <= 1.0, "Weil bound at p=" + std::to_string(p));
        out.require(w.max_symmetry_gap < 1e-9, "symmetry at p=" + std::to_string(p));
        out.require(scaling_gap < 1e-9, "scaling at p=" + std::to_string(p));
    }
}

void four_product_cancellation(Outcome& out) {
    double prev = INFINITY;
    bool non_increasing = true;
    for (std::uint32_t p : {61u, 101u, 199u}) {
        PrimeContext ctx(p);
        const auto s = four_product_sweep(ctx, 12);
        out.detail << "p=" << p << ": max ratio=" << s.max_ratio << " at (" << s.argmax[0] << "," << s.argmax[1] << ","
                   << s.argmax[2] << "," << s.argmax[3] << ") over " << s.tuples << " tuples; ";
        out.require(s.max_ratio <= 30.0, "ratio <= 30 at p=" + std::to_string(p));
        if (s.max_ratio > prev) non_increasing = false;
        prev = s.max_ratio;
    }
    out.require(non_increasing, "recorded maximum non-increasing in p");
}

void afe_cross_consistency(Outcome& out) {
    for (std::uint32_t p : {11u, 101u, 499u}) {
        PrimeContext ctx(p);
        const SquaredCentralValue sq(ctx);
        double worst = 0.0;
        std::size_t checked = 0;
        for (const auto& chi : enumerate_even_primitive(ctx)) {
            const double b = sq(chi);
            if (b <= 1e-6) continue;
            worst = std::max(worst, std::abs(std::norm(central_value(ctx, chi)) - b) / b);
            ++checked;
        }
        out.detail << "p=" << p << ": " << checked << " characters, max rel gap=" << worst << "; ";
        out.require(worst < 1e-8, "relative gap < 1e-8 at p=" + std::to_string(p));
    }
}

void poisson_identity(Outcome& out) {
    const std::uint32_t p = 199;
    PrimeContext ctx(p);
    const auto params = MollifierParams::make(p, 0.45, 0.05, 0.5, 0.5);
    std::mt19937_64 rng(199);
    std::uniform_int_distribution<std::int64_t> m1d(1, std::int64_t(params.long_length + 1) / 2),
        m2d(1, std::int64_t(params.short_length + 1) / 2);
    std::uniform_real_distribution<double> nd(2.0, 30.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const double N1 = nd(rng);
        const double N2 = std::min(nd(rng), std::pow(double(p), 1.1) / N1);
        const auto spec = BilinearSpec::from_params(params, m1d(rng), m2d(rng), N1, N2);
        const auto B = bilinear_form(ctx, spec);
        const auto D = bilinear_poisson_dual(ctx, spec);
        const double gap = std::abs(B - D.value) / std::max(std::abs(B), 1e-300);
        worst = std::max(worst, gap);
        out.require(std::abs(B) > 0.0, "nonzero form in spec " + std::to_string(t));
    }
    out.detail << "10 specs at p=199, max rel gap=" << worst << " (tol 1e-6)";
    out.require(worst < 1e-6, "relative gap < 1e-6");
}

void nu_divisor_equality(Outcome& out) {
    PrimeContext ctx(10007);
    const NuWindows w{{1, 10}, {1, 10}, {1, 10}};
    const auto s = nu_statistics(ctx, w);
    out.detail << "sum nu=" << s.sum << " sum nu^2=" << s.sum_squares << " divisor count=" << s.divisor_count;
    out.require(s.below_modulus, "window product below p");
    out.require(s.sum == 1000, "sum nu = 1000");
    out.require(s.sum_squares == s.divisor_count, "sum nu^2 equals divisor count");
}

void holder_direction(Outcome& out) {
    std::vector<double> y(64, 0.0);
    for (std::size_t m = 1; m < y.size(); ++m) y[m] = mobius(std::int64_t(m)) * std::log(64.0 / m) / std::log(64.0);
    std::vector<HolderWindows> windows = {
        {{1, 1}, {1, 1}, {1, 1}, {1, 1}},   {{1, 4}, {1, 4}, {1, 3}, {1, 3}},     {{1, 10}, {2, 9}, {1, 6}, {1, 5}},
        {{3, 20}, {1, 8}, {2, 12}, {1, 8}}, {{1, 40}, {1, 30}, {1, 20}, {1, 16}}, {{-6, 6}, {1, 5}, {1, 4}, {1, 4}},
    };
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::uint32_t p : {101u, 199u, 499u}) {
        PrimeContext ctx(p);
        out.detail << "p=" << p << " (b)/(c):";
        for (const auto& w : windows) {
            const auto r = holder_pipeline(ctx, w, y, y);
            worst = std::max(worst, r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? INFINITY : 0.0));
            out.require(r.lhs <= r.rhs * (1.0 + 1e-6), "(a) <= (b) at p=" + std::to_string(p));
            out.require(std::isfinite(r.rhs_over_envelope), "finite (b)/(c)");
            out.detail << " " << r.rhs_over_envelope;
            ++cases;
        }
        out.detail << "; ";
    }
    out.detail << cases << " windows, max (a)/(b)=" << worst;
}

struct TrendRow {
    std::uint32_t p;
    MomentReport dft;
    bool has_naive = false;
    MomentReport naive;
};

std::vector<TrendRow> moment_sweep() {
    std::vector<TrendRow> rows;
    const Rational theta = q(1, 5), alpha = q(1, 10);
    const auto w = optimal_weights(theta, alpha);
    for (std::uint32_t p : {1009u, 10007u, 100003u}) {
        PrimeContext ctx(p);
        const auto params = MollifierParams::make(p, 0.2, 0.1, to_double(w.c1), to_double(w.c2));
        TrendRow r{p, compute_moments(ctx, params, {}, SumPath::Dft)};
        if (p <= 10007) {
            r.has_naive = true;
            r.naive = compute_moments(ctx, params, {}, SumPath::Naive);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void moment_trend(Outcome& out) {
    const auto rows = moment_sweep();
    double prev = INFINITY;
    for (const auto& r : rows) {
        const double dev = std::abs(r.dft.S1 - r.dft.S1_predicted);
        const double s2_ratio = r.dft.S2 / r.dft.S2_predicted;
        out.detail << "p=" << r.p << ": S1=" << r.dft.S1.real() << (r.dft.S1.imag() < 0 ? "" : "+") << r.dft.S1.imag()
                   << "i |S1-(c1+c2)|=" << dev << " S2/pred=" << s2_ratio;
        if (r.has_naive) {
            const double gap = std::abs(r.dft.S1 - r.naive.S1) / std::abs(r.naive.S1);
            out.detail << " dual-path gap=" << gap;
            out.require(gap < 1e-9, "naive/DFT S1 within 1e-9 at p=" + std::to_string(r.p));
        }
        out.detail << "; ";
        out.require(dev < prev, "|S1-(c1+c2)| strictly decreasing");
        prev = dev;
    }
    const double last = rows.back().dft.S2 / rows.back().dft.S2_predicted;
    out.detail << "soft bound S2/pred in [0.5,2] at p=100003: " << (last >= 0.5 && last <= 2.0 ? "within" : "outside");
}

void cauchy_schwarz(Outcome& out) {
    const auto rows = moment_sweep();
    double worst = 0.0;
    std::size_t cases = 0;
    auto record = [&](const MomentReport& r) {
        worst = std::max(worst, r.cs_ratio);
        ++cases;
    };
    for (const auto& r : rows) {
        record(r.dft);
        if (r.has_naive) record(r.naive);
    }
    for (std::uint32_t p : {101u, 499u, 1009u}) {
        PrimeContext ctx(p);
        for (auto [theta, alpha, c1, c2] : {std::array<double, 4>{0.25, 0.125, 0.6, 0.4}, {0.3, 0.0, 0.5, 0.5},
                                           {0.1, 0.3, 1.0, 0.0}, {0.2, 0.2, 0.0, 1.0}})
            record(compute_moments(ctx, MollifierParams::make(p, theta, alpha, c1, c2)));
    }
    out.detail << cases << " (p, params) cases, max |S1|^2/S2=" << worst << " (tol 1+1e-6)";
    out.require(worst <= 1.0 + 1e-6, "|S1|^2/S2 <= 1 + 1e-6");
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "optimization exactness", 1.0, optimization_exactness},
        {2, "exact character identities", 60.0, character_identities},
        {3, "Weil bound", 120.0, weil_bound},
        {4, "four-product square-root cancellation", 600.0, four_product_cancellation},
        {5, "AFE cross-consistency", 300.0, afe_cross_consistency},
        {6, "Poisson identity", 300.0, poisson_identity},
        {7, "nu-statistics divisor equality", 60.0, nu_divisor_equality},
        {8, "Hoelder direction", 300.0, holder_direction},
        {9, "moment trend", 1800.0, moment_trend},
        {10, "Cauchy-Schwarz sanity", 1800.0, cauchy_schwarz},
    };
    return all;
}

bool run(const Criterion& c) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < c.time_limit_s, "runtime < " + std::to_string(c.time_limit_s) + " s");
    std::printf("%s  %2d  %-40s  %.2fs  %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.str().c_str());
    std::fflush(stdout);
    return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--list")) {
            for (const auto& c : criteria()) std::printf("%2d  %s\n", c.id, c.name);
            return 0;
        }
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
            continue;
        }
        std::fprintf(stderr, "usage: %s [--list] [--criterion N]...\n", argv[0]);
        return 3;
    }
    bool all_pass = true;
    std::size_t ran = 0;
    for (const auto& c : criteria()) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        all_pass = run(c) && all_pass;
        ++ran;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no such criterion\n");
        return 3;
    }
    return all_pass ? 0 : 1;
}
