#pragma once

// Smoothing kernels of the approximate functional equations for even
// characters:
//
//   W(x) = 1/(2 pi i) int_(sigma) G(s)   (sqrt(pi) x)^{-s} ds/s,  G(s) = Gamma(s/2+1/4)/Gamma(1/4)
//   V(x) = 1/(2 pi i) int_(sigma) G(s)^2 (pi x)^{-s}       ds/s
//
// W has the closed form Q(1/4, pi x^2) (regularized upper incomplete gamma),
// used as the fast path; the vertical-line quadrature is the oracle. V has no
// elementary closed form and is evaluated by quadrature (optionally through a
// geometric-grid interpolation cache).

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace lnv {

struct KernelConfig {
    double sigma = 2.0;      // Re s of the contour
    double height = 60.0;    // |Im s| <= height
    double step = 0.05;      // trapezoid step in Im s
    double tail_tol = 1e-12; // allowed discarded tail

    // Throws Error{InvalidConfig} naming the offending field.
    void validate() const;
};

enum class Kernel { W, V };

// Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> gamma(std::complex<double> z);

// Trapezoid rule for the inverse Mellin integral on Re s = sigma, exploiting
// conjugate symmetry: value = (1/pi) int_0^T Re[G(s)^k base^{-s} / s] dt.
// Node values G(s_j)/s_j are precomputed, so evaluation at x costs one
// complex exponential per node.
class MellinQuadrature {
public:
    MellinQuadrature(Kernel kernel, const KernelConfig& cfg);

    double operator()(double x) const;
    // x K'(x): the same contour integral without the 1/s factor, negated.
    double log_derivative(double x) const;
    // Estimate of the contribution discarded beyond |Im s| = height.
    double tail_estimate(double x) const;

    Kernel kernel() const noexcept { return kernel_; }
    const KernelConfig& config() const noexcept { return cfg_; }

private:
    double log_base(double x) const;

    Kernel kernel_;
    KernelConfig cfg_;
    std::vector<double> t_;
    std::vector<std::complex<double>> node_;
};

// Fast path: Q(1/4, pi x^2). Throws Error{NonPositiveArgument} for x <= 0.
double weight_W(double x);
double weight_W_quadrature(double x, const KernelConfig& cfg = {});
double weight_V(double x, const KernelConfig& cfg = {});

struct ConvergenceReport {
    double value;
    double step_halved_delta;
    double height_doubled_delta;
    double tail_estimate;
};
ConvergenceReport quadrature_convergence(Kernel kernel, double x, const KernelConfig& cfg = {});

// V on a geometric grid (per_decade points per decade) over [x_min, x_max],
// interpolated by a monotone (Fritsch-Carlson) cubic in log x. Outside the
// grid the direct quadrature is used. Node slopes are the exact x V'(x); when
// V > 0 on the whole grid the interpolation runs on log V.
class WeightVCache {
public:
    WeightVCache(double x_min, double x_max, const KernelConfig& cfg = {}, int per_decade = 64);
    double operator()(double x) const;
    std::size_t size() const noexcept { return u_.size(); }

private:
    MellinQuadrature direct_;
    double u_min_, du_;
    std::vector<double> u_, v_, slope_;
    bool log_values_ = false;  // v_ holds log V
};

// Truncation of sum_{n >= 1} n^{-exponent} K(n/scale) for a decreasing kernel K:
// length is the first n with K(n/scale) < kernel_cutoff, extended until the
// computed tail is below rel_tail times the kept partial sum.
struct Truncation {
    std::size_t length;  // keep n = 1 .. length-1
    double partial;
    double tail;
};
Truncation truncate_kernel_sum(const std::function<double(double)>& kernel, double scale, double exponent,
                               double kernel_cutoff = 1e-16, double rel_tail = 1e-12);

// Smallest x on a bisection grid with kernel(x) < cutoff, for decreasing kernels.
double kernel_support_bound(const std::function<double(double)>& kernel, double cutoff, double x0 = 1.0);

}  // namespace lnv
