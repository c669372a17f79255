#include "lnv/dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace lnv {

namespace {
// FFTW planner calls are not thread-safe.
std::mutex planner_mutex;
}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in, DftSign sign) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(in.size());
    if (n == 0) return out;
    auto* buf_in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* buf_out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan = fftw_plan_dft_1d(n, buf_in, buf_out, sign == DftSign::Positive ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    std::memcpy(buf_in, in.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(out.data()), buf_out, sizeof(fftw_complex) * n);
    {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
    return out;
}

std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> in, DftSign sign) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    const double s = static_cast<int>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> acc{};
        for (std::size_t k = 0; k < n; ++k) acc += in[k] * std::polar(1.0, s * static_cast<double>((j * k) % n));
        out[j] = acc;
    }
    return out;
}

}  // namespace lnv
