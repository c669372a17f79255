#include "lnv/optimize.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "lnv/error.hpp"

namespace lnv {

namespace {

using boost::multiprecision::cpp_int;

Rational rat(long long n, long long d = 1) { return Rational(n) / Rational(d); }

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(ErrorCode::InvalidConfig, "not a rational number: '" + std::string(text) + "'");
}

cpp_int parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) bad_number(whole);
    cpp_int v = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) bad_number(whole);
        v = v * 10 + (c - '0');
    }
    return v;
}

cpp_int floor_div(const cpp_int& a, const cpp_int& b) {
    cpp_int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

cpp_int floor_of(const Rational& r) {
    return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Rational slack(const LinearConstraint& c, const Rational& theta, const Rational& alpha) {
    return c.bound - (c.a_theta * theta + c.a_alpha * alpha);
}

bool inside_closed(const std::vector<LinearConstraint>& cs, const Rational& delta, const Rational& theta,
                   const Rational& alpha) {
    for (const auto& c : cs) {
        const Rational need = c.strict ? delta : Rational(0);
        if (slack(c, theta, alpha) < need) return false;
    }
    return true;
}

bool better(const Rational& obj, const Rational& theta, const Rational& alpha, const Rational& best_obj,
            const Rational& best_theta, const Rational& best_alpha) {
    if (obj != best_obj) return obj > best_obj;
    if (theta != best_theta) return theta < best_theta;
    return alpha < best_alpha;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad_number(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) bad_number(text);
        return num / den;
    }
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view ex = s.substr(e + 1);
        bool ex_neg = false;
        if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
            ex_neg = ex.front() == '-';
            ex.remove_prefix(1);
        }
        if (ex.empty() || ex.size() > 6) bad_number(text);
        exponent = static_cast<long>(parse_integer(ex, text));
        if (ex_neg) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        frac_digits = static_cast<long>(s.size() - dot - 1);
    } else {
        digits = std::string(s);
    }
    Rational v(parse_integer(digits, text));
    const long shift = exponent - frac_digits;
    const Rational ten_pow(boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(shift < 0 ? -shift : shift)));
    if (shift < 0) v /= ten_pow; else v *= ten_pow;
    return negative ? -v : v;
}

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational proportion(const Rational& theta, const Rational& alpha, const Rational& c1, const Rational& c2) {
    if (c1 < 0 || c2 < 0) throw Error(ErrorCode::DegenerateWeights, "weights must be nonnegative");
    const Rational total = c1 + c2;
    if (total == 0) throw Error(ErrorCode::DegenerateWeights, "c1 + c2 = 0");
    if (theta <= 0) throw Error(ErrorCode::NonpositiveTheta, "theta must be > 0, got " + to_string(theta));
    if (c1 != 0 && theta + alpha <= 0) throw Error(ErrorCode::NonpositiveTheta, "theta + alpha must be > 0");
    Rational denom = 1;
    if (c1 != 0) {
        const Rational a = c1 / total;
        denom += a * a / (theta + alpha);
    }
    if (c2 != 0) {
        const Rational b = c2 / total;
        denom += b * b / theta;
    }
    return 1 / denom;
}

Weights optimal_weights(const Rational& theta, const Rational& alpha) {
    if (theta <= 0) throw Error(ErrorCode::NonpositiveTheta, "theta must be > 0, got " + to_string(theta));
    if (alpha < 0) throw Error(ErrorCode::RangeViolation, "alpha must be >= 0, got " + to_string(alpha));
    const Rational total = 2 * theta + alpha;
    return {(theta + alpha) / total, theta / total};
}

const std::vector<LinearConstraint>& feasibility_constraints() {
    static const std::vector<LinearConstraint> cs = {
        {"theta > 0", -1, 0, rat(0), true},
        {"alpha >= 0", 0, -1, rat(0), false},
        {"theta < 1/2", 1, 0, rat(1, 2), true},
        {"theta + alpha < 1/2", 1, 1, rat(1, 2), true},
        {"3 theta + 2 alpha < 1", 3, 2, rat(1), true},
        {"10 theta + 4 alpha < 3", 10, 4, rat(3), true},
    };
    return cs;
}

Feasibility feasible(const Rational& theta, const Rational& alpha, const Rational& delta) {
    if (delta < 0) throw Error(ErrorCode::RangeViolation, "margin delta must be >= 0");
    Feasibility out;
    for (const auto& c : feasibility_constraints()) {
        const Rational s = slack(c, theta, alpha);
        const bool ok = c.strict ? (s > 0 && s >= delta) : s >= 0;
        if (!ok) out.violated.push_back(c.name);
    }
    out.feasible = out.violated.empty();
    return out;
}

Rational combined_length_decomposition(const Rational& theta, const Rational& alpha) {
    return rat(1, 4) * (3 * theta + 2 * alpha) + rat(1, 8) * (10 * theta + 4 * alpha);
}

OptimizationResult maximize_combined_length(const Rational& delta, std::optional<Rational> fixed_alpha,
                                            int grid_resolution) {
    if (delta < 0) throw Error(ErrorCode::RangeViolation, "margin delta must be >= 0");
    if (delta >= rat(1, 8)) throw Error(ErrorCode::EmptyRegion, "margin delta must be < 1/8, got " + to_string(delta));
    if (grid_resolution < 2) throw Error(ErrorCode::InvalidConfig, "grid resolution must be >= 2");

    std::vector<LinearConstraint> cs = feasibility_constraints();
    if (fixed_alpha) {
        cs.push_back({"alpha <= fixed", 0, 1, *fixed_alpha, false});
        cs.push_back({"alpha >= fixed", 0, -1, -*fixed_alpha, false});
    }

    OptimizationResult out;
    out.delta = delta;
    out.fixed_alpha = fixed_alpha;
    out.grid_resolution = grid_resolution;

    // (i) vertices: every pair of boundary lines.
    bool found = false;
    Rational best_obj, best_theta, best_alpha;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            const auto& a = cs[i];
            const auto& b = cs[j];
            const Rational det = Rational(a.a_theta * b.a_alpha - a.a_alpha * b.a_theta);
            if (det == 0) continue;
            const Rational ra = a.bound - (a.strict ? delta : Rational(0));
            const Rational rb = b.bound - (b.strict ? delta : Rational(0));
            const Rational theta = (ra * b.a_alpha - rb * a.a_alpha) / det;
            const Rational alpha = (a.a_theta * rb - b.a_theta * ra) / det;
            if (!inside_closed(cs, delta, theta, alpha)) continue;
            const Rational obj = 2 * theta + alpha;
            if (!found || better(obj, theta, alpha, best_obj, best_theta, best_alpha)) {
                found = true;
                best_obj = obj;
                best_theta = theta;
                best_alpha = alpha;
            }
        }
    }
    if (!found) throw Error(ErrorCode::EmptyRegion, "no feasible point at delta = " + to_string(delta));
    out.theta = best_theta;
    out.alpha = best_alpha;
    out.combined = best_obj;
    if (best_theta > 0) {
        const auto w = optimal_weights(best_theta, best_alpha);
        out.c1 = w.c1;
        out.c2 = w.c2;
        out.proportion = proportion(best_theta, best_alpha, w.c1, w.c2);
    }

    // (ii) grid theta = i/N, alpha = j/N.
    const long long N = grid_resolution;
    bool grid_found = false;
    if (!fixed_alpha) {
        // a_theta i + a_alpha j <= floor((bound - shrink) N), all in integers.
        std::vector<long long> caps;
        for (const auto& c : cs) caps.push_back(floor_of((c.bound - (c.strict ? delta : Rational(0))) * N).convert_to<long long>());
        long long best = -1, bi = 0, bj = 0;
        for (long long i = 0; i <= N / 2; ++i) {
            for (long long j = 0; j <= N / 2; ++j) {
                bool ok = true;
                for (std::size_t c = 0; c < cs.size() && ok; ++c) ok = cs[c].a_theta * i + cs[c].a_alpha * j <= caps[c];
                if (ok && 2 * i + j > best) {
                    best = 2 * i + j;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best >= 0) {
            grid_found = true;
            out.grid_theta = rat(bi, N);
            out.grid_alpha = rat(bj, N);
        }
    } else {
        for (long long i = 0; i <= N / 2; ++i) {
            const Rational theta = rat(i, N);
            if (!inside_closed(cs, delta, theta, *fixed_alpha)) continue;
            if (!grid_found || 2 * theta + *fixed_alpha > 2 * out.grid_theta + out.grid_alpha) {
                grid_found = true;
                out.grid_theta = theta;
                out.grid_alpha = *fixed_alpha;
            }
        }
    }
    if (grid_found) {
        out.grid_combined = 2 * out.grid_theta + out.grid_alpha;
        const Rational gap = out.combined - out.grid_combined;
        out.methods_agree = gap >= 0 && gap <= rat(3, N);
    }
    return out;
}

}  // namespace lnv
