#pragma once

#include <complex>
#include <span>
#include <vector>

namespace stochflow::detail {

// Unnormalized 2-D real transforms on an n x n array, half-spectrum n x (n/2+1).
// Plans are cached per size; execution is thread-safe.
void forward_r2c(int n, const double* in, std::complex<double>* out);
// The input is copied first, so it is left intact.
void inverse_c2r(int n, const std::complex<double>* in, double* out);

// Samples f(s_i), s_i = 2 pi i / P, of a periodic function.
// d/ds by FFT, Nyquist dropped.
std::vector<double> periodic_derivative(std::span<const double> f);
// trigonometric interpolant resampled at P * factor points (zero padding)
std::vector<double> periodic_upsample(std::span<const double> f, int factor);

}  // namespace stochflow::detail
