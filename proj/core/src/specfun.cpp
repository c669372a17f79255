#include "lnv/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "lnv/error.hpp"
#include "lnv/parallel.hpp"

namespace lnv {

namespace {

constexpr double pi = std::numbers::pi;

constexpr std::array<double, 9> lanczos_coeff = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double lanczos_g = 7.0;

const double log_gamma_quarter = std::lgamma(0.25);

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw Error(ErrorCode::NonPositiveArgument, std::string(what) + " requires x > 0, got " + std::to_string(x));
}

}  // namespace

void KernelConfig::validate() const {
    auto bad = [](const char* key, double v) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + " must be positive and finite, got " + std::to_string(v));
    };
    if (!(sigma > 0.0) || !std::isfinite(sigma)) bad("sigma", sigma);
    if (!(height > 0.0) || !std::isfinite(height)) bad("height", height);
    if (!(step > 0.0) || step >= height) bad("step", step);
    if (!(tail_tol > 0.0)) bad("tail_tol", tail_tol);
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> x = lanczos_coeff[0];
    for (std::size_t i = 1; i < lanczos_coeff.size(); ++i) x += lanczos_coeff[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> gamma(std::complex<double> z) { return std::exp(log_gamma(z)); }

MellinQuadrature::MellinQuadrature(Kernel kernel, const KernelConfig& cfg) : kernel_(kernel), cfg_(cfg) {
    cfg_.validate();
    const double power = kernel == Kernel::W ? 1.0 : 2.0;
    const auto nodes = static_cast<std::size_t>(std::ceil(cfg_.height / cfg_.step));
    t_.resize(nodes + 1);
    node_.resize(nodes + 1);
    for (std::size_t k = 0; k <= nodes; ++k) {
        const double t = static_cast<double>(k) * cfg_.step;
        const std::complex<double> s(cfg_.sigma, t);
        const std::complex<double> log_g = power * (log_gamma(s / 2.0 + 0.25) - log_gamma_quarter);
        double w = cfg_.step / pi;
        if (k == 0 || k == nodes) w *= 0.5;
        t_[k] = t;
        node_[k] = w * std::exp(log_g) / s;
    }
}

double MellinQuadrature::log_base(double x) const {
    // W: sqrt(pi) x, V: pi x
    return kernel_ == Kernel::W ? 0.5 * std::log(pi) + std::log(x) : std::log(pi * x);
}

double MellinQuadrature::operator()(double x) const {
    require_positive(x, kernel_ == Kernel::W ? "W" : "V");
    const double lb = log_base(x);
    std::vector<double> terms(node_.size());
    for (std::size_t k = 0; k < node_.size(); ++k) {
        // Re[node * base^{-i t}]
        const double phase = -t_[k] * lb;
        terms[k] = node_[k].real() * std::cos(phase) - node_[k].imag() * std::sin(phase);
    }
    return std::exp(-cfg_.sigma * lb) * pairwise_sum(std::span<const double>(terms));
}

double MellinQuadrature::log_derivative(double x) const {
    require_positive(x, kernel_ == Kernel::W ? "W" : "V");
    const double lb = log_base(x);
    std::vector<double> terms(node_.size());
    for (std::size_t k = 0; k < node_.size(); ++k) {
        // -Re[node * s * base^{-i t}]
        const std::complex<double> ns = node_[k] * std::complex<double>(cfg_.sigma, t_[k]);
        const double phase = -t_[k] * lb;
        terms[k] = -(ns.real() * std::cos(phase) - ns.imag() * std::sin(phase));
    }
    return std::exp(-cfg_.sigma * lb) * pairwise_sum(std::span<const double>(terms));
}

double MellinQuadrature::tail_estimate(double x) const {
    require_positive(x, "tail_estimate");
    // |G(s)|^k decays like exp(-k pi |t| / 4); integrate the last node's size
    // against that rate.
    const double rate = (kernel_ == Kernel::W ? 1.0 : 2.0) * pi / 4.0;
    const double last = std::abs(node_.back()) / (0.5 * cfg_.step / pi) / pi;
    return std::exp(-cfg_.sigma * log_base(x)) * last / rate;
}

double weight_W(double x) {
    require_positive(x, "W");
    return boost::math::gamma_q(0.25, pi * x * x);
}

double weight_W_quadrature(double x, const KernelConfig& cfg) { return MellinQuadrature(Kernel::W, cfg)(x); }

double weight_V(double x, const KernelConfig& cfg) { return MellinQuadrature(Kernel::V, cfg)(x); }

ConvergenceReport quadrature_convergence(Kernel kernel, double x, const KernelConfig& cfg) {
    const MellinQuadrature base(kernel, cfg);
    KernelConfig fine = cfg;
    fine.step = cfg.step / 2.0;
    KernelConfig tall = cfg;
    tall.height = cfg.height * 2.0;
    const double v = base(x);
    return {v, std::abs(MellinQuadrature(kernel, fine)(x) - v), std::abs(MellinQuadrature(kernel, tall)(x) - v),
            base.tail_estimate(x)};
}

WeightVCache::WeightVCache(double x_min, double x_max, const KernelConfig& cfg, int per_decade)
    : direct_(Kernel::V, cfg) {
    require_positive(x_min, "WeightVCache");
    if (!(x_max > x_min) || per_decade < 2)
        throw Error(ErrorCode::InvalidConfig, "WeightVCache needs x_max > x_min and per_decade >= 2");
    u_min_ = std::log(x_min);
    du_ = std::log(10.0) / per_decade;
    const auto n = static_cast<std::size_t>(std::ceil((std::log(x_max) - u_min_) / du_)) + 1;
    u_.resize(n);
    v_.resize(n);
    slope_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        u_[i] = u_min_ + du_ * static_cast<double>(i);
        v_[i] = direct_(std::exp(u_[i]));
        slope_[i] = direct_.log_derivative(std::exp(u_[i]));
    });
    // V decays like exp(-c x); log V is the smoother curve when V > 0 throughout.
    log_values_ = std::all_of(v_.begin(), v_.end(), [](double v) { return v > 0.0; });
    if (log_values_) {
        for (std::size_t i = 0; i < n; ++i) {
            slope_[i] /= v_[i];
            v_[i] = std::log(v_[i]);
        }
    }

    // Exact slopes, limited so each cell stays monotone (Fritsch-Carlson).
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (v_[i + 1] - v_[i]) / du_;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
            slope_[i] = slope_[i + 1] = 0.0;
            continue;
        }
        if (slope_[i] / delta[i] < 0.0) slope_[i] = 0.0;
        if (slope_[i + 1] / delta[i] < 0.0) slope_[i + 1] = 0.0;
        const double a = slope_[i] / delta[i], b = slope_[i + 1] / delta[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            slope_[i] = tau * a * delta[i];
            slope_[i + 1] = tau * b * delta[i];
        }
    }
}

double WeightVCache::operator()(double x) const {
    require_positive(x, "V");
    const double u = std::log(x);
    const double pos = (u - u_min_) / du_;
    if (pos < 0.0 || pos > static_cast<double>(u_.size() - 1)) return direct_(x);
    const auto i = std::min(static_cast<std::size_t>(pos), u_.size() - 2);
    const double h = pos - static_cast<double>(i);
    const double h2 = h * h, h3 = h2 * h;
    const double v = (2 * h3 - 3 * h2 + 1) * v_[i] + (h3 - 2 * h2 + h) * du_ * slope_[i] +
                     (-2 * h3 + 3 * h2) * v_[i + 1] + (h3 - h2) * du_ * slope_[i + 1];
    return log_values_ ? std::exp(v) : v;
}

double kernel_support_bound(const std::function<double(double)>& kernel, double cutoff, double x0) {
    double lo = 0.0, hi = x0;
    while (kernel(hi) >= cutoff) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorCode::NumericalFailure, "kernel does not decay below cutoff");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kernel(mid) < cutoff ? hi : lo) = mid;
    }
    return hi;
}

Truncation truncate_kernel_sum(const std::function<double(double)>& kernel, double scale, double exponent,
                               double kernel_cutoff, double rel_tail) {
    if (!(scale > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "truncation scale must be positive");
    auto term = [&](std::size_t n) {
        return std::pow(static_cast<double>(n), -exponent) * kernel(static_cast<double>(n) / scale);
    };
    const double x_cut = kernel_support_bound(kernel, kernel_cutoff, 1.0);
    auto length = static_cast<std::size_t>(std::ceil(x_cut * scale));
    length = std::max<std::size_t>(length, 2);
    for (;;) {
        std::vector<double> kept(length - 1);
        for (std::size_t n = 1; n < length; ++n) kept[n - 1] = term(n);
        const double partial = pairwise_sum(std::span<const double>(kept));
        double tail = 0.0;
        for (std::size_t n = length;; ++n) {
            const double t = term(n);
            tail += std::abs(t);
            if (std::abs(t) <= 1e-18 * std::abs(tail) || t == 0.0 || n > 4 * length + 64) break;
        }
        if (tail <= rel_tail * std::abs(partial)) return {length, partial, tail};
        length *= 2;
    }
}

}  // namespace lnv
