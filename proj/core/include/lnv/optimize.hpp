#pragma once

// Nonvanishing proportion of the two-piece mollifier and the linear program
// that maximizes its combined length 2 theta + alpha. All arithmetic is exact.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lnv {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "-2", "1/4", "0.24", "1e-4", "2.5e-3". Throws
// Error{InvalidConfig} on anything else.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);  // "5/13", "3", "-1/2"
double to_double(const Rational& r);

// ((c1/(c1+c2))^2/(theta+alpha) + (c2/(c1+c2))^2/theta + 1)^{-1}; a term whose
// weight is zero is dropped.
Rational proportion(const Rational& theta, const Rational& alpha, const Rational& c1, const Rational& c2);

struct Weights {
    Rational c1;
    Rational c2;
};
// c1 : c2 = (theta + alpha) : theta, normalized to c1 + c2 = 1.
Weights optimal_weights(const Rational& theta, const Rational& alpha);

// One constraint a_theta theta + a_alpha alpha <= bound, originally strict
// (shrunk by the margin delta) or not.
struct LinearConstraint {
    std::string name;
    int a_theta;
    int a_alpha;
    Rational bound;
    bool strict;
};
const std::vector<LinearConstraint>& feasibility_constraints();

struct Feasibility {
    bool feasible = false;
    std::vector<std::string> violated;
};
// Strict constraints need slack > 0 and slack >= delta; alpha >= 0 needs slack >= 0.
Feasibility feasible(const Rational& theta, const Rational& alpha, const Rational& delta);

// 1/4 (3 theta + 2 alpha) + 1/8 (10 theta + 4 alpha); equals 2 theta + alpha.
Rational combined_length_decomposition(const Rational& theta, const Rational& alpha);

struct OptimizationResult {
    Rational delta;
    std::optional<Rational> fixed_alpha;
    Rational theta;
    Rational alpha;
    Rational c1;
    Rational c2;
    Rational combined;    // 2 theta + alpha
    Rational proportion;  // at the optimal weights
    int grid_resolution = 0;
    Rational grid_theta;
    Rational grid_alpha;
    Rational grid_combined;
    bool methods_agree = false;  // 0 <= combined - grid_combined <= 3 / resolution
};

// Maximizes 2 theta + alpha over the closed region where every strict
// constraint is shrunk by delta: (i) exact vertex enumeration, (ii) exhaustive
// grid at step 1/resolution. Ties go to the lexicographically smallest
// (theta, alpha). With fixed_alpha the region is cut by alpha = fixed_alpha.
// Throws Error{EmptyRegion} for delta >= 1/8 or an empty cut,
// Error{RangeViolation} for delta < 0.
OptimizationResult maximize_combined_length(const Rational& delta, std::optional<Rational> fixed_alpha = std::nullopt,
                                             int grid_resolution = 10000);

}  // namespace lnv
