#include "stochflow/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

constexpr int kHalf = SpectralInterpolant::kStencil / 2;
constexpr int kLo = kHalf - 1;  // stencil covers offsets -kLo..kHalf around floor(x / h_fine)
constexpr int kGhost = kHalf;

std::shared_ptr<const std::vector<double>> upsample(const ScalarField& f, int fine) {
  if (!f.all_finite()) throw NumericalError("SpectralInterpolant: non-finite field");
  const Spectrum s = to_spectrum(f);
  const int fc = fine / 2 + 1;
  std::vector<cplx> padded(static_cast<std::size_t>(fine) * fc);
  for (int iy = 0; iy < s.rows(); ++iy) {
    const int ky = s.ky(iy);
    const int fy = ky >= 0 ? ky : ky + fine;
    for (int ix = 0; ix < s.cols(); ++ix) {
      if (s.nyquist(iy, ix)) continue;
      padded[static_cast<std::size_t>(fy) * fc + ix] = s.at(iy, ix);
    }
  }
  std::vector<double> values(static_cast<std::size_t>(fine) * fine);
  detail::inverse_c2r(fine, padded.data(), values.data());

  const int stride = fine + 2 * kGhost;
  auto out = std::make_shared<std::vector<double>>(static_cast<std::size_t>(stride) * stride);
  for (int py = 0; py < stride; ++py) {
    const int iy = ((py - kGhost) % fine + fine) % fine;
    const double* src = values.data() + static_cast<std::size_t>(iy) * fine;
    double* dst = out->data() + static_cast<std::size_t>(py) * stride;
    std::copy(src + fine - kGhost, src + fine, dst);
    std::copy(src, src + fine, dst + kGhost);
    std::copy(src, src + kGhost, dst + kGhost + fine);
  }
  return out;
}

constexpr int S = SpectralInterpolant::kStencil;

// Lagrange weights on nodes -3..4 at t in [0,1); products only, so t = 0 is exact
inline void weights(double t, double* w) {
  static constexpr double c[S] = {-1.0 / 5040, 1.0 / 720,  -1.0 / 240, 1.0 / 144,
                                  -1.0 / 144,  1.0 / 240, -1.0 / 720, 1.0 / 5040};
  double d[S], pre[S], suf[S];
  for (int j = 0; j < S; ++j) d[j] = t - (j - kLo);
  pre[0] = 1;
  for (int j = 1; j < S; ++j) pre[j] = pre[j - 1] * d[j - 1];
  suf[S - 1] = 1;
  for (int j = S - 2; j >= 0; --j) suf[j] = suf[j + 1] * d[j + 1];
  for (int j = 0; j < S; ++j) w[j] = c[j] * pre[j] * suf[j];
}

}  // namespace

SpectralInterpolant::SpectralInterpolant(const ScalarField& f) : SpectralInterpolant(std::vector{&f}) {}

SpectralInterpolant::SpectralInterpolant(const VectorField& v) : SpectralInterpolant(std::vector{&v.x, &v.y}) {}

SpectralInterpolant::SpectralInterpolant(const std::vector<const ScalarField*>& fields) {
  if (fields.empty()) throw StructuralError("SpectralInterpolant: no fields");
  n_ = fields.front()->grid().n();
  fine_ = n_ * kOversample;
  stride_ = fine_ + 2 * kGhost;
  for (const ScalarField* f : fields) {
    require_same_grid(fields.front()->grid(), f->grid(), "SpectralInterpolant");
    comps_.push_back(upsample(*f, fine_));
  }
}

SpectralInterpolant SpectralInterpolant::blend(const SpectralInterpolant& a, const SpectralInterpolant& b,
                                               double lambda) {
  if (a.n_ != b.n_ || a.comps_.size() != b.comps_.size())
    throw StructuralError("SpectralInterpolant::blend: shape mismatch");
  if (lambda == 0) return a;
  if (lambda == 1) return b;
  SpectralInterpolant r;
  r.n_ = a.n_;
  r.fine_ = a.fine_;
  r.stride_ = a.stride_;
  for (std::size_t c = 0; c < a.comps_.size(); ++c) {
    const auto& x = *a.comps_[c];
    const auto& y = *b.comps_[c];
    auto v = std::make_shared<std::vector<double>>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) (*v)[i] = (1 - lambda) * x[i] + lambda * y[i];
    r.comps_.push_back(std::move(v));
  }
  return r;
}

void SpectralInterpolant::evaluate(Point p, double* out) const {
  const double scale = fine_ / kTwoPi;
  const double ux = p.x * scale, uy = p.y * scale;
  const double fx = std::floor(ux), fy = std::floor(uy);
  double wx[S], wy[S];
  weights(ux - fx, wx);
  weights(uy - fy, wy);
  // wrap the floor index into [0, fine); the ghost layer absorbs the stencil overhang
  long ix = static_cast<long>(fx) % fine_;
  long iy = static_cast<long>(fy) % fine_;
  if (ix < 0) ix += fine_;
  if (iy < 0) iy += fine_;
  const std::size_t base = static_cast<std::size_t>(iy + kGhost - kLo) * stride_ + (ix + kGhost - kLo);
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    const double* g = comps_[c]->data() + base;
    double acc = 0;
    for (int r = 0; r < S; ++r) {
      const double* row = g + static_cast<std::size_t>(r) * stride_;
      double s = 0;
      for (int q = 0; q < S; ++q) s += wx[q] * row[q];
      acc += wy[r] * s;
    }
    out[c] = acc;
  }
}

double SpectralInterpolant::value(Point p) const {
  if (comps_.size() != 1) throw StructuralError("SpectralInterpolant::value: not a scalar interpolant");
  double v;
  evaluate(p, &v);
  return v;
}

Point SpectralInterpolant::vector_value(Point p) const {
  if (comps_.size() != 2) throw StructuralError("SpectralInterpolant::vector_value: not a vector interpolant");
  double v[2];
  evaluate(p, v);
  return {v[0], v[1]};
}

void SpectralInterpolant::evaluate(std::span<const Point> pts, std::span<double> out) const {
  const std::size_t m = pts.size(), nc = comps_.size();
  if (out.size() < m * nc) throw StructuralError("SpectralInterpolant::evaluate: output too small");
  double buf[16];
  if (nc > 16) throw StructuralError("SpectralInterpolant: too many components");
  for (std::size_t i = 0; i < m; ++i) {
    evaluate(pts[i], buf);
    for (std::size_t c = 0; c < nc; ++c) out[c * m + i] = buf[c];
  }
}

std::vector<double> interpolate_field(const ScalarField& f, std::span<const Point> pts) {
  SpectralInterpolant it(f);
  std::vector<double> out(pts.size());
  it.evaluate(pts, out);
  return out;
}

std::vector<Point> interpolate_field(const VectorField& v, std::span<const Point> pts) {
  SpectralInterpolant it(v);
  std::vector<Point> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = it.vector_value(pts[i]);
  return out;
}

}  // namespace stochflow
