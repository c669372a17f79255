#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "lnv/arith.hpp"
#include "lnv/characters.hpp"
#include "lnv/error.hpp"
#include "lnv/expsums.hpp"
#include "lnv/lmoments.hpp"
#include "lnv/optimize.hpp"
#include "lnv/parallel.hpp"
#include "output.hpp"

namespace lnv::cli {

using nlohmann::json;

namespace {

json cplx(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

double safe_ratio(double a, double b) { return b != 0.0 ? a / b : (a == 0.0 ? 1.0 : INFINITY); }

// A value next to what theory predicts for it.
json claim(double value, double predicted) {
    return {{"value", value}, {"predicted", predicted}, {"ratio", safe_ratio(value, predicted)}};
}

// A value next to an upper bound.
json bounded(double value, double bound) { return {{"value", value}, {"bound", bound}, {"ratio", safe_ratio(value, bound)}}; }

json window_json(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}}; }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Builder {
public:
    Builder(const ExperimentConfig& cfg, std::string kind) : cfg_(cfg) {
        rec_["record"] = std::move(kind);
        rec_["command"] = cfg.command;
        rec_["checks"] = json::array();
    }
    json& operator[](const char* key) { return rec_[key]; }
    void check(const std::string& name, bool passed, double value, double tolerance) {
        rec_["checks"].push_back({{"name", name}, {"passed", passed}, {"value", value}, {"tolerance", tolerance}});
        passed_ = passed_ && passed;
    }
    void emit(Report& r) {
        rec_["config"] = to_json(cfg_);
        rec_["generated_at"] = utc_timestamp();
        r.all_passed = r.all_passed && passed_;
        r.records.push_back(std::move(rec_));
    }

private:
    const ExperimentConfig& cfg_;
    json rec_;
    bool passed_ = true;
};

double to_real(const std::string& key, const std::string& text) {
    try {
        return to_double(parse_rational(text));
    } catch (const Error&) {
        throw ConfigError(key, "not a rational number: '" + text + "'");
    }
}

// Weights as given, otherwise the optimal ones for (theta, alpha).
std::pair<double, double> weights(const ExperimentConfig& cfg) {
    if (cfg.c1) return {to_real("c1", *cfg.c1), to_real("c2", *cfg.c2)};
    const auto w = optimal_weights(parse_rational(*cfg.theta), parse_rational(*cfg.alpha));
    return {to_double(w.c1), to_double(w.c2)};
}

json moment_json(const MomentReport& m) {
    json j;
    j["p"] = m.p;
    j["path"] = m.path == SumPath::Dft ? "dft" : "naive";
    j["family_size"] = m.family_size;
    j["params"] = {{"theta", m.params.theta},
                   {"alpha", m.params.alpha},
                   {"c1", m.params.c1},
                   {"c2", m.params.c2},
                   {"long_length", m.params.long_length},
                   {"short_length", m.params.short_length},
                   {"exceeds_half_length", m.params.exceeds_half_length}};
    j["S1"] = cplx(m.S1);
    j["S1"]["predicted"] = m.S1_predicted;
    j["S1"]["ratio"] = safe_ratio(m.S1.real(), m.S1_predicted);
    j["S2"] = claim(m.S2, m.S2_predicted);
    j["S2_parts"] = {{"cross", claim(m.parts.cross, m.parts.cross_predicted)},
                     {"square_long", claim(m.parts.square_long, m.parts.square_long_predicted)},
                     {"square_short", claim(m.parts.square_short, m.parts.square_short_predicted)}};
    j["cauchy_schwarz"] = bounded(m.cs_ratio, 1.0);
    j["proportion"] = claim(m.cs_ratio, m.proportion_predicted);
    j["T1"] = cplx(m.balanced.T1);
    j["T1"]["predicted"] = m.balanced.T1_predicted;
    j["T1"]["ratio"] = safe_ratio(m.balanced.T1.real(), m.balanced.T1_predicted);
    j["T2"] = claim(m.balanced.T2, m.balanced.T2_predicted);
    // Cauchy-Schwarz: #{L != 0} >= (p/2) |S1|^2 / S2
    const double lower = 0.5 * m.p * m.cs_ratio;
    j["nonvanishing"] = {{"threshold", m.nonvanishing_threshold},
                         {"count", m.nonvanishing_count},
                         {"lower_bound", lower},
                         {"ratio", safe_ratio(static_cast<double>(m.nonvanishing_count), lower)},
                         {"min_abs_L", m.min_abs_L}};
    return j;
}

void run_moments(const ExperimentConfig& cfg, Report& report) {
    const double theta = to_real("theta", *cfg.theta), alpha = to_real("alpha", *cfg.alpha);
    const auto [c1, c2] = weights(cfg);
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        const auto params = MollifierParams::make(p, theta, alpha, c1, c2);
        std::vector<MomentReport> runs;
        if (cfg.path != "naive") runs.push_back(compute_moments(ctx, params, cfg.kernel, SumPath::Dft));
        if (cfg.path != "dft") runs.push_back(compute_moments(ctx, params, cfg.kernel, SumPath::Naive));
        for (const auto& m : runs) {
            Builder b(cfg, "moments");
            const json fields = moment_json(m);
            for (const auto& [k, v] : fields.items()) b[k.c_str()] = v;
            b.check("cauchy_schwarz", m.cs_ratio <= 1.0 + 1e-6, m.cs_ratio, 1.0 + 1e-6);
            b.check("finite_moments", std::isfinite(std::abs(m.S1)) && std::isfinite(m.S2),
                    std::abs(m.S1) + m.S2, 0.0);
            if (runs.size() == 2) {
                const auto& o = &m == &runs[0] ? runs[1] : runs[0];
                const double g1 = std::abs(m.S1 - o.S1) / std::max(std::abs(o.S1), 1e-300);
                const double g2 = std::abs(m.S2 - o.S2) / std::max(std::abs(o.S2), 1e-300);
                b["dual_path_gap"] = {{"S1", g1}, {"S2", g2}, {"bound", 1e-9}};
                b.check("dual_path_S1", g1 < 1e-9, g1, 1e-9);
                b.check("dual_path_S2", g2 < 1e-9, g2, 1e-9);
            }
            b.emit(report);
        }
    }
}

json feasibility_json(const Feasibility& f) { return {{"feasible", f.feasible}, {"violated", f.violated}}; }

// Constraints whose shrunk form holds with equality, and whether the point
// lies in the closed shrunk region at all.
std::pair<bool, std::vector<std::string>> closure_membership(const Rational& theta, const Rational& alpha,
                                                             const Rational& delta) {
    bool inside = true;
    std::vector<std::string> tight;
    for (const auto& c : feasibility_constraints()) {
        const Rational s = c.bound - c.a_theta * theta - c.a_alpha * alpha;
        const Rational need = c.strict ? delta : Rational(0);
        if (s < need) inside = false;
        if (s == need) tight.push_back(c.name);
    }
    return {inside, tight};
}

void run_optimize(const ExperimentConfig& cfg, Report& report) {
    const Rational delta = parse_rational(cfg.delta);
    std::optional<Rational> fixed;
    if (cfg.fix_alpha) fixed = parse_rational(*cfg.fix_alpha);
    const auto r = maximize_combined_length(delta, fixed, cfg.grid_resolution);

    Builder b(cfg, "optimum");
    b["delta"] = to_string(r.delta);
    b["fixed_alpha"] = r.fixed_alpha ? json(to_string(*r.fixed_alpha)) : json(nullptr);
    b["theta"] = to_string(r.theta);
    b["alpha"] = to_string(r.alpha);
    b["c1"] = to_string(r.c1);
    b["c2"] = to_string(r.c2);
    const Rational recomputed = proportion(r.theta, r.alpha, r.c1, r.c2);
    b["proportion"] = {{"value", to_string(r.proportion)},
                       {"decimal", to_double(r.proportion)},
                       {"predicted", to_string(recomputed)},
                       {"ratio", to_double(r.proportion / recomputed)}};
    const Rational decomposition = combined_length_decomposition(r.theta, r.alpha);
    const Rational bound = Rational(3) / r.grid_resolution;
    b["combined"] = {{"value", to_string(r.combined)},
                     {"predicted", to_string(decomposition)},
                     {"ratio", to_double(r.combined / decomposition)}};
    b["grid"] = {{"resolution", r.grid_resolution},
                 {"theta", to_string(r.grid_theta)},
                 {"alpha", to_string(r.grid_alpha)},
                 {"combined", to_string(r.grid_combined)},
                 {"gap", {{"value", to_double(r.combined - r.grid_combined)},
                          {"bound", to_double(bound)},
                          {"ratio", to_double((r.combined - r.grid_combined) / bound)}}}};
    const auto f = feasible(r.theta, r.alpha, delta);
    const auto [in_closure, tight] = closure_membership(r.theta, r.alpha, delta);
    b["feasibility"] = feasibility_json(f);
    b["feasibility"]["in_closure"] = in_closure;
    b["feasibility"]["tight"] = tight;
    b.check("methods_agree", r.methods_agree, to_double(r.combined - r.grid_combined), to_double(bound));
    b.check("proportion_recomputed", r.proportion == recomputed, to_double(r.proportion - recomputed), 0.0);
    b.check("combined_decomposition", r.combined == decomposition, to_double(r.combined - decomposition), 0.0);
    b.check("optimum_in_closure", in_closure, static_cast<double>(tight.size()), 0.0);
    b.emit(report);

    if (cfg.theta) {
        const Rational theta = parse_rational(*cfg.theta);
        const Rational alpha = cfg.alpha ? parse_rational(*cfg.alpha) : Rational(0);
        if (theta <= 0) throw ConfigError("theta", "must be > 0");
        Weights w = optimal_weights(theta, alpha);
        if (cfg.c1) w = {parse_rational(*cfg.c1), parse_rational(*cfg.c2)};
        Builder pt(cfg, "point");
        pt["theta"] = to_string(theta);
        pt["alpha"] = to_string(alpha);
        pt["c1"] = to_string(w.c1);
        pt["c2"] = to_string(w.c2);
        const Rational prop = proportion(theta, alpha, w.c1, w.c2);
        pt["proportion"] = {{"value", to_string(prop)},
                            {"decimal", to_double(prop)},
                            {"predicted", to_string(r.proportion)},
                            {"ratio", to_double(prop / r.proportion)}};
        pt["feasibility"] = feasibility_json(feasible(theta, alpha, delta));
        pt.emit(report);
    }
}

void run_kloosterman(const ExperimentConfig& cfg, Report& report) {
    std::vector<std::pair<std::uint32_t, double>> trend;
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        Builder b(cfg, "kloosterman");
        b["p"] = p;
        if (p <= 5000) {
            const auto w = weil_sweep(ctx);
            b["weil"] = {{"pairs", w.pairs},
                         {"max_ratio", bounded(w.max_ratio, 1.0)},
                         {"symmetry_gap", bounded(w.max_symmetry_gap, 1e-9)},
                         {"row_naive_gap", bounded(w.max_row_naive_gap, 1e-9)}};
            b.check("weil_bound", w.weil_holds && w.max_ratio <= 1.0, w.max_ratio, 1.0);
            b.check("symmetry", w.max_symmetry_gap < 1e-9, w.max_symmetry_gap, 1e-9);
            b.check("row_vs_direct", w.max_row_naive_gap < 1e-9, w.max_row_naive_gap, 1e-9);
        } else {
            b["weil"] = nullptr;
        }
        const auto s = four_product_sweep(ctx, cfg.max_m);
        b["four_product"] = {{"max_m", s.max_m},
                             {"tuples", s.tuples},
                             {"max_ratio", bounded(s.max_ratio, 30.0)},
                             {"argmax", s.argmax},
                             {"degenerate_tuples", s.degenerate_tuples},
                             {"max_degenerate_weil_ratio", bounded(s.max_degenerate_weil_ratio, 1.0)}};
        b.check("four_product_envelope", s.max_ratio <= 30.0, s.max_ratio, 30.0);
        b.check("degenerate_weil", s.max_degenerate_weil_ratio <= 1.0 + 1e-9, s.max_degenerate_weil_ratio, 1.0);
        trend.emplace_back(p, s.max_ratio);
        b.emit(report);
    }
    if (trend.size() > 1) {
        std::sort(trend.begin(), trend.end());
        Builder b(cfg, "four_product_trend");
        json rows = json::array();
        bool non_increasing = true;
        double worst_rise = 0.0;
        for (std::size_t i = 0; i < trend.size(); ++i) {
            rows.push_back({{"p", trend[i].first}, {"max_ratio", trend[i].second}});
            if (i > 0 && trend[i].second > trend[i - 1].second) {
                non_increasing = false;
                worst_rise = std::max(worst_rise, trend[i].second - trend[i - 1].second);
            }
        }
        b["rows"] = rows;
        b["non_increasing"] = non_increasing;
        b.check("max_ratio_non_increasing", non_increasing, worst_rise, 0.0);
        b.emit(report);
    }
}

void run_bilinear(const ExperimentConfig& cfg, Report& report) {
    const double theta = to_real("theta", *cfg.theta), alpha = to_real("alpha", *cfg.alpha);
    const auto [c1, c2] = weights(cfg);
    const double delta = to_real("delta", cfg.delta);
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        const auto params = MollifierParams::make(p, theta, alpha, c1, c2);
        std::vector<BilinearSpec> specs;
        if (cfg.M1) {
            specs.push_back(BilinearSpec::from_params(params, *cfg.M1, *cfg.M2, *cfg.N1, *cfg.N2, delta));
        } else {
            std::mt19937_64 rng(cfg.seed ^ p);
            std::uniform_int_distribution<std::int64_t> m1d(1, std::int64_t(params.long_length + 1) / 2),
                m2d(1, std::int64_t(params.short_length + 1) / 2);
            std::uniform_real_distribution<double> nd(2.0, 30.0);
            for (int t = 0; t < cfg.samples; ++t) {
                const double N1 = nd(rng);
                const double N2 = std::min(nd(rng), (1.0 - 1e-12) * std::pow(double(p), 1.0 + delta) / N1);
                specs.push_back(BilinearSpec::from_params(params, m1d(rng), m2d(rng), N1, N2, delta));
            }
        }
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto& spec = specs[i];
            try {
                spec.check_ranges(p);
            } catch (const Error& e) {
                throw ConfigError(cfg.M1 ? "M1" : "samples", e.what());
            }
            const auto B = bilinear_form(ctx, spec, cfg.kernel);
            const auto D = bilinear_poisson_dual(ctx, spec, cfg.kernel);
            const auto env = bilinear_envelopes(p, spec);
            const double gap = std::abs(B - D.value) / std::max(std::abs(B), 1e-300);
            Builder b(cfg, "bilinear");
            b["p"] = p;
            b["spec"] = {{"index", i},          {"M1", spec.M1},
                         {"M2", spec.M2},       {"N1", spec.N1},
                         {"N2", spec.N2},       {"long_length", spec.long_length},
                         {"short_length", spec.short_length}, {"delta", spec.delta}};
            b["B"] = cplx(B);
            b["dual"] = cplx(D.value);
            b["poisson_gap"] = bounded(gap, 1e-6);
            b["k_zero"] = cplx(D.k_zero);
            b["dual_kernel_sup"] = D.dual_kernel_sup;
            b["pois1"] = bounded(std::abs(B), env.pois1);
            b["bbound"] = bounded(std::abs(B), env.bbound);
            b.check("poisson_identity", gap < 1e-6, gap, 1e-6);
            b.emit(report);
        }
    }
}

void run_nu(const ExperimentConfig& cfg, Report& report) {
    const NuWindows w{parse_window("k", cfg.k), parse_window("n", cfg.n), parse_window("m1", cfg.m1)};
    const HolderWindows hw{w.k, w.n, w.m1, parse_window("m2", cfg.m2)};
    const double delta = to_real("delta", cfg.delta);
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        const auto s = nu_statistics(ctx, w);
        Builder b(cfg, "nu");
        b["p"] = p;
        b["windows"] = {{"k", window_json(w.k)}, {"n", window_json(w.n)}, {"m1", window_json(w.m1)}};
        const double tuples = double(w.k.size()) * double(w.n.size()) * double(w.m1.size());
        b["sum"] = claim(double(s.sum), tuples);
        b["sum_squares"] = claim(double(s.sum_squares), double(s.divisor_count));
        b["sum_four_thirds"] = s.sum_four_thirds;
        b["divisor_count"] = s.divisor_count;
        b["max_nu"] = s.nu.empty() ? 0 : *std::max_element(s.nu.begin(), s.nu.end());
        b["below_modulus"] = s.below_modulus;
        b.check("sum_is_tuple_count", double(s.sum) == tuples, double(s.sum), tuples);
        if (s.below_modulus)
            b.check("divisor_equality", s.sum_squares == s.divisor_count, double(s.sum_squares), double(s.divisor_count));
        else
            b.check("divisor_lower_bound", s.sum_squares >= s.divisor_count, double(s.sum_squares),
                    double(s.divisor_count));
        b.emit(report);

        const auto y1 = piece_coeffs(static_cast<std::size_t>(hw.m1.hi) + 1);
        const auto y2 = piece_coeffs(static_cast<std::size_t>(hw.m2.hi) + 1);
        const auto h = holder_pipeline(ctx, hw, y1, y2, delta);
        Builder hb(cfg, "holder");
        hb["p"] = p;
        hb["windows"] = {{"k", window_json(hw.k)}, {"n", window_json(hw.n)}, {"m1", window_json(hw.m1)},
                         {"m2", window_json(hw.m2)}};
        hb["lhs"] = bounded(h.lhs, h.rhs);
        hb["rhs"] = bounded(h.rhs, h.envelope);
        hb["weight_sup"] = h.weight_sup;
        hb["sum_nu_four_thirds"] = h.sum_nu_four_thirds;
        hb["fourth_moment"] = h.fourth_moment;
        hb.check("holder_direction", h.holder_holds, safe_ratio(h.lhs, h.rhs), 1.0 + 1e-6);
        hb.emit(report);
    }
}

void run_identities(const ExperimentConfig& cfg, Report& report) {
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        const auto family = enumerate_even_primitive(ctx);
        const auto all = enumerate_all(ctx);
        const auto table = gauss_sum_table(ctx);
        Builder b(cfg, "identities");
        b["p"] = p;
        b["family_size"] = claim(double(family.size()), double(p - 3) / 2.0);
        b.check("family_size", family.size() == (p - 3) / 2, double(family.size()), double(p - 3) / 2.0);

        // |tau|^2 = p, tau(chi) tau(conj chi) = p for even chi, table = direct sums
        std::vector<std::complex<double>> tau(family.size());
        double abs_gap = 0.0, pair_gap = 0.0, table_gap = 0.0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            tau[i] = gauss_sum(ctx, family[i]).value;
            abs_gap = std::max(abs_gap, std::abs(std::norm(tau[i]) - p) / p);
            pair_gap = std::max(pair_gap, std::abs(tau[i] * gauss_sum(ctx, family[i].conj()).value - double(p)) / p);
            table_gap = std::max(table_gap, std::abs(table[family[i].j] - tau[i]) / std::sqrt(double(p)));
        }
        b["gauss_modulus_gap"] = bounded(abs_gap, 1e-10);
        b["gauss_conjugate_gap"] = bounded(pair_gap, 1e-10);
        b["gauss_table_gap"] = bounded(table_gap, 1e-10);
        b.check("gauss_modulus", abs_gap < 1e-10, abs_gap, 1e-10);
        b.check("gauss_conjugate_product", pair_gap < 1e-10, pair_gap, 1e-10);
        b.check("gauss_table", table_gap < 1e-10, table_gap, 1e-10);

        // sum over all chi of chi(n) = (p-1)[n = 1]
        double orth_gap = 0.0;
        for (std::uint32_t n = 1; n < p; ++n) {
            std::complex<double> s = 0.0;
            for (const auto& chi : all) s += char_eval(ctx, chi, n);
            orth_gap = std::max(orth_gap, std::abs(s - (n == 1 ? double(p - 1) : 0.0)));
        }
        b["orthogonality_gap"] = bounded(orth_gap, 1e-9);
        b.check("orthogonality", orth_gap < 1e-9, orth_gap, 1e-9);

        std::mt19937_64 rng(cfg.seed ^ p);
        std::uniform_int_distribution<std::int64_t> d(1, p - 1);
        double worst_pair = 0.0, worst_twist = 0.0;
        for (int t = 0; t < cfg.samples; ++t) {
            const auto n1 = d(rng), n2 = d(rng);
            std::complex<double> brute_pair = 0.0, brute_twist = 0.0;
            for (std::size_t i = 0; i < family.size(); ++i) {
                const auto c = char_eval(ctx, family[i], n1);
                brute_pair += c * std::conj(char_eval(ctx, family[i], n2));
                brute_twist += tau[i] * c;
            }
            brute_pair *= 2.0 / p;
            brute_twist /= double(p);
            const double pc = even_pair_average_closed_form(ctx, n1, n2);
            const double tc = gauss_twisted_average_closed_form(ctx, n1);
            worst_pair = std::max({worst_pair, std::abs(even_pair_average(ctx, n1, n2) - pc), std::abs(brute_pair - pc)});
            worst_twist = std::max({worst_twist, std::abs(gauss_twisted_average(ctx, n1) - tc), std::abs(brute_twist - tc)});
        }
        b["pairs_sampled"] = cfg.samples;
        b["pair_average_gap"] = bounded(worst_pair, 1e-10);
        b["twisted_average_gap"] = bounded(worst_twist, 1e-10);
        b.check("pair_average", worst_pair < 1e-10, worst_pair, 1e-10);
        b.check("twisted_average", worst_twist < 1e-10, worst_twist, 1e-10);
        b.emit(report);
    }
}

void run_afe_check(const ExperimentConfig& cfg, Report& report) {
    for (auto p : cfg.p) {
        PrimeContext ctx(p);
        const SquaredCentralValue sq(ctx, cfg.kernel);
        double worst = 0.0, conj_gap = 0.0, min_abs = INFINITY, max_abs = 0.0;
        std::size_t checked = 0, skipped = 0;
        for (const auto& chi : enumerate_even_primitive(ctx)) {
            const auto L = central_value(ctx, chi, cfg.kernel);
            const auto Lc = central_value(ctx, chi.conj(), cfg.kernel);
            conj_gap = std::max(conj_gap, std::abs(Lc - std::conj(L)));
            min_abs = std::min(min_abs, std::abs(L));
            max_abs = std::max(max_abs, std::abs(L));
            const double v = sq(chi);
            if (v <= 1e-6) {
                ++skipped;
                continue;
            }
            worst = std::max(worst, std::abs(std::norm(L) - v) / v);
            ++checked;
        }
        Builder b(cfg, "afe_check");
        b["p"] = p;
        b["characters"] = checked + skipped;
        b["compared"] = checked;
        b["near_zero_skipped"] = skipped;
        b["max_relative_gap"] = bounded(worst, 1e-8);
        b["conjugate_gap"] = bounded(conj_gap, 1e-9);
        b["min_abs_L"] = min_abs;
        b["max_abs_L"] = max_abs;
        b["squared_length"] = sq.length();
        b["squared_tail"] = sq.tail_estimate();
        b.check("afe_cross_consistency", worst < 1e-8, worst, 1e-8);
        b.check("conjugate_symmetry", conj_gap < 1e-9, conj_gap, 1e-9);
        b.emit(report);
    }
}

// ---------------------------------------------------------------------------
// Command line

enum class Kind { Rational, Integer, Real, Text };

struct Flag {
    const char* key;
    const char* name;
    Kind kind;
    const char* help;
};

const std::vector<Flag>& flags() {
    static const std::vector<Flag> all = {
        {"theta", "--theta", Kind::Rational, "short mollifier exponent"},
        {"alpha", "--alpha", Kind::Rational, "extra exponent of the long piece"},
        {"c1", "--c1", Kind::Rational, "weight of the long piece"},
        {"c2", "--c2", Kind::Rational, "weight of the short piece"},
        {"sigma", "--sigma", Kind::Real, "contour abscissa"},
        {"height", "--height", Kind::Real, "contour height"},
        {"step", "--step", Kind::Real, "quadrature step"},
        {"tail_tol", "--tail-tol", Kind::Real, "allowed discarded tail"},
        {"delta", "--delta", Kind::Rational, "slack exponent"},
        {"fix_alpha", "--fix-alpha", Kind::Rational, "optimize with alpha fixed"},
        {"grid_resolution", "--grid-resolution", Kind::Integer, "grid search resolution"},
        {"path", "--path", Kind::Text, "dft, naive or both"},
        {"max_m", "--max-m", Kind::Integer, "four-product tuple range"},
        {"samples", "--samples", Kind::Integer, "sampled cases per prime"},
        {"k", "--k", Kind::Text, "k window lo:hi"},
        {"n", "--n", Kind::Text, "n window lo:hi"},
        {"m1", "--m1", Kind::Text, "m1 window lo:hi"},
        {"m2", "--m2", Kind::Text, "m2 window lo:hi"},
        {"M1", "--M1", Kind::Integer, "dyadic block M1"},
        {"M2", "--M2", Kind::Integer, "dyadic block M2"},
        {"N1", "--N1", Kind::Real, "dyadic block N1"},
        {"N2", "--N2", Kind::Real, "dyadic block N2"},
        {"output", "--out", Kind::Text, "output file, - for stdout"},
        {"format", "--format", Kind::Text, "json or csv"},
        {"threads", "--threads", Kind::Integer, "worker threads, 0 for all"},
        {"seed", "--seed", Kind::Integer, "seed for sampled sweeps"},
    };
    return all;
}

json typed(const Flag& f, const std::string& text) {
    try {
        std::size_t used = 0;
        switch (f.kind) {
            case Kind::Rational:
            case Kind::Text: return text;
            case Kind::Integer: {
                const long long v = std::stoll(text, &used);
                if (used != text.size()) break;
                return v;
            }
            case Kind::Real: {
                const double v = std::stod(text, &used);
                if (used != text.size()) break;
                return v;
            }
        }
    } catch (const std::logic_error&) {
    }
    throw ConfigError(f.key, "cannot parse '" + text + "'");
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
    set_thread_count(static_cast<std::size_t>(cfg.threads));
    Report report;
    report.command = cfg.command;
    if (cfg.command == "moments") run_moments(cfg, report);
    else if (cfg.command == "optimize") run_optimize(cfg, report);
    else if (cfg.command == "kloosterman") run_kloosterman(cfg, report);
    else if (cfg.command == "bilinear") run_bilinear(cfg, report);
    else if (cfg.command == "nu") run_nu(cfg, report);
    else if (cfg.command == "identities") run_identities(cfg, report);
    else if (cfg.command == "afe-check") run_afe_check(cfg, report);
    else throw ConfigError("command", "unknown command '" + cfg.command + "'");
    return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mollified moments of Dirichlet L-functions: experiments and checks", "lnv"};
    app.require_subcommand(1);

    struct Bound {
        CLI::App* sub;
        std::vector<std::string> primes;
        std::string config_path;
        std::map<std::string, std::string> values;
    };
    std::vector<std::unique_ptr<Bound>> subs;
    for (const auto& name : command_names()) {
        auto b = std::make_unique<Bound>();
        b->sub = app.add_subcommand(name);
        b->sub->add_option("--p,--p-list", b->primes, "prime modulus or comma separated list")->delimiter(',');
        b->sub->add_option("--config", b->config_path, "JSON configuration; flags override it");
        for (const auto& f : flags()) b->sub->add_option(f.name, b->values[f.key], f.help);
        subs.push_back(std::move(b));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_config_error;
    }

    try {
        const Bound* chosen = nullptr;
        for (const auto& b : subs)
            if (b->sub->parsed()) chosen = b.get();
        json j = chosen->config_path.empty() ? json::object() : read_config_file(chosen->config_path);
        if (!j.is_object()) throw ConfigError("config", "configuration must be a JSON object");
        json overrides = json::object();
        overrides["command"] = chosen->sub->get_name();
        if (!chosen->primes.empty()) {
            json ps = json::array();
            for (const auto& s : chosen->primes) {
                try {
                    std::size_t used = 0;
                    const long long v = std::stoll(s, &used);
                    if (used != s.size() || v < 0) throw std::invalid_argument(s);
                    ps.push_back(v);
                } catch (const std::logic_error&) {
                    throw ConfigError("p", "cannot parse '" + s + "'");
                }
            }
            overrides["p"] = ps;
        }
        for (const auto& f : flags())
            if (chosen->sub->count(f.name) > 0) overrides[f.key] = typed(f, chosen->values.at(f.key));
        j.merge_patch(overrides);

        const ExperimentConfig cfg = resolve(from_json(j));
        const Report report = run_experiment(cfg);
        write_report(report, cfg, out);
        if (!report.all_passed) {
            err << "lnv: one or more checks failed\n";
            return exit_check_failed;
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "lnv: " << e.what() << "\n";
        return exit_config_error;
    } catch (const Error& e) {
        err << "lnv: " << e.what() << "\n";
        return e.code() == ErrorCode::NumericalFailure ? exit_check_failed : exit_config_error;
    } catch (const std::ios_base::failure& e) {
        err << "lnv: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace lnv::cli
