#pragma once

// Independent reference evaluations used only by tests.

#include <cstdint>
#include <span>
#include <vector>

#include "stochflow/grid.hpp"

namespace oracle {

using stochflow::Grid;
using stochflow::Point;
using stochflow::ScalarField;
using stochflow::VectorField;

// Direct O(n^2) evaluation of the trigonometric interpolant (plain DFT, no FFT library).
class DirectTrig {
 public:
  explicit DirectTrig(const ScalarField& f);
  double operator()(Point p) const;

 private:
  int n_;
  std::vector<int> kx_, ky_;
  std::vector<double> re_, im_;
};

// Random field with Fourier content only for 0 < |k| <= kmax, drawn with std::mt19937_64.
ScalarField random_band_limited(const Grid& g, double kmax, std::uint64_t seed);
VectorField random_band_limited_vector(const Grid& g, double kmax, std::uint64_t seed);
// Divergence-free band-limited field built from a random stream function by finite sums of modes
VectorField random_solenoidal(const Grid& g, double kmax, std::uint64_t seed);

double rel_l2(const ScalarField& a, const ScalarField& b);
double rel_l2(const VectorField& a, const VectorField& b);
double max_diff(const ScalarField& a, const ScalarField& b);

// Least-squares slope of log y against log x
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace oracle
