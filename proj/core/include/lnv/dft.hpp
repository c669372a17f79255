#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lnv {

// out[j] = sum_k in[k] exp(sign * 2 pi i j k / n), any length n (FFTW).
// Positive sign is the convention for character sums:
//   sum_n a_n chi_j(n) = sum_k A_k e(jk/(p-1)),  A_k = sum_{ind n = k} a_n.
enum class DftSign : int { Negative = -1, Positive = 1 };

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in, DftSign sign);

// O(n^2) reference transform with exact-angle twiddles; used as the test oracle.
std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> in, DftSign sign);

}  // namespace lnv
