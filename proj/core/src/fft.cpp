#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace stochflow::detail {
namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const Plans& plans_for(int n) {
  static std::map<int, Plans> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
  double* r = fftw_alloc_real(static_cast<std::size_t>(n) * n);
  fftw_complex* c = fftw_alloc_complex(nc);
  // ESTIMATE keeps plan selection deterministic; UNALIGNED lets us run on std::vector storage
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p;
  p.r2c = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
  p.c2r = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
  fftw_free(r);
  fftw_free(c);
  return cache.emplace(n, p).first->second;
}

struct Plans1 {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

const Plans1& plans_1d(int n) {
  static std::map<int, Plans1> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* c = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans1 p;
  p.r2c = fftw_plan_dft_r2c_1d(n, r, c, flags);
  p.c2r = fftw_plan_dft_c2r_1d(n, c, r, flags);
  fftw_free(r);
  fftw_free(c);
  return cache.emplace(n, p).first->second;
}

std::vector<std::complex<double>> spectrum_1d(std::span<const double> f) {
  const int n = static_cast<int>(f.size());
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n / 2 + 1));
  fftw_execute_dft_r2c(plans_1d(n).r2c, const_cast<double*>(f.data()), reinterpret_cast<fftw_complex*>(c.data()));
  return c;
}

std::vector<double> physical_1d(std::vector<std::complex<double>> c, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  fftw_execute_dft_c2r(plans_1d(n).c2r, reinterpret_cast<fftw_complex*>(c.data()), out.data());
  return out;
}

}  // namespace

std::vector<double> periodic_derivative(std::span<const double> f) {
  const int n = static_cast<int>(f.size());
  std::vector<std::complex<double>> c = spectrum_1d(f);
  for (int k = 0; k < static_cast<int>(c.size()); ++k)
    c[k] *= (2 * k == n) ? std::complex<double>(0) : std::complex<double>(0, k) / static_cast<double>(n);
  return physical_1d(std::move(c), n);
}

std::vector<double> periodic_upsample(std::span<const double> f, int factor) {
  const int n = static_cast<int>(f.size()), m = n * factor;
  const std::vector<std::complex<double>> c = spectrum_1d(f);
  std::vector<std::complex<double>> d(static_cast<std::size_t>(m / 2 + 1));
  for (int k = 0; k < static_cast<int>(c.size()); ++k)
    if (2 * k != n) d[k] = c[k] / static_cast<double>(n);
  return physical_1d(std::move(d), m);
}

void forward_r2c(int n, const double* in, std::complex<double>* out) {
  const Plans& p = plans_for(n);
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void inverse_c2r(int n, const std::complex<double>* in, double* out) {
  const Plans& p = plans_for(n);
  std::vector<std::complex<double>> scratch(in, in + static_cast<std::size_t>(n) * (n / 2 + 1));
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

}  // namespace stochflow::detail
