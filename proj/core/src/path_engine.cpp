#include "path_engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "stochflow/flow_map.hpp"
#include "stochflow/parallel.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow::detail {
namespace {

std::vector<Point> shifted_nodes(const Grid& g, Point s) {
  std::vector<Point> p = grid_points(g);
  for (Point& q : p) q = {q.x - s.x, q.y - s.y};
  return p;
}

VectorField displacement(const Grid& g, std::span<const Point> pts) {
  VectorField d(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const std::size_t i = g.index(ix, iy);
      d.x[i] = pts[i].x - g.coord(ix);
      d.y[i] = pts[i].y - g.coord(iy);
    }
  return d;
}

void require_finite(std::span<const Point> pts, double t) {
  for (const Point& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw NumericalError("stochastic flow left the resolvable range near t = " + std::to_string(t));
}

// Leray projection times |k|^{2 alpha} per mode, written as (re, im) pairs, one layer per component
void projected_coeffs(const VectorField& v, double alpha, double* out) {
  const Spectrum sx = to_spectrum(v.x), sy = to_spectrum(v.y);
  const std::size_t nc = sx.coeffs().size();
  for (int iy = 0; iy < sx.rows(); ++iy) {
    const double ky = sx.ky(iy);
    for (int ix = 0; ix < sx.cols(); ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * sx.cols() + ix;
      const double k2 = ix * ix + ky * ky;
      cplx a = 0, b = 0;
      if (k2 > 0 && !sx.nyquist(iy, ix)) {
        const cplx p = sx.at(iy, ix), q = sy.at(iy, ix);
        const cplx kv = (static_cast<double>(ix) * p + ky * q) / k2;
        const double s = alpha == 0 ? 1.0 : std::pow(k2, alpha);
        a = s * (p - static_cast<double>(ix) * kv);
        b = s * (q - ky * kv);
      }
      out[2 * i] = a.real();
      out[2 * i + 1] = a.imag();
      out[2 * (nc + i)] = b.real();
      out[2 * (nc + i) + 1] = b.imag();
    }
  }
}

void scalar_coeffs(const ScalarField& f, double* out) {
  const Spectrum s = to_spectrum(f);
  const auto c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[2 * i] = c[i].real();
    out[2 * i + 1] = c[i].imag();
  }
}

ScalarField layer_to_field(const Grid& g, const double* layer) {
  Spectrum s(g);
  auto c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(layer[2 * i], layer[2 * i + 1]);
  return to_physical(s);
}

// Parseval weight of each (re, im) entry of a layer
std::vector<double> layer_weights(const Grid& g) {
  Spectrum s(g);
  std::vector<double> w(2 * s.coeffs().size());
  for (int iy = 0; iy < s.rows(); ++iy)
    for (int ix = 0; ix < s.cols(); ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * s.cols() + ix;
      w[2 * i] = w[2 * i + 1] = kTwoPi * kTwoPi * s.multiplicity(ix);
    }
  return w;
}

double rel_diff(double diff, double base) { return base > 0 ? diff / base : diff; }

}  // namespace

struct WindowMap::Shared {
  std::unique_ptr<TimeSampledVelocity> u;
  std::unique_ptr<VelocitySampler> sampler;
  // per stamp: d_x B_x, d_y B_x, d_x B_y, d_y B_y
  std::vector<SpectralInterpolant> bgrad;
};

WindowMap::WindowMap(const ModelSpec& model, const WindowSpec& win, const VectorField& u_start,
                     const std::optional<ScalarField>& theta_start, const std::optional<VectorField>& B_start)
    : model_(model),
      win_(win),
      grid_(u_start.grid()),
      forced_(model.boussinesq()),
      u_start_(u_start),
      theta_start_(theta_start),
      B_start_(B_start),
      xi_(momentum(model, u_start)) {
  if (win_.stamps < 1) throw StructuralError("window needs at least one step");
  if (forced_) {
    if (!theta_start_) theta_start_.emplace(grid_);
    if (!B_start_) B_start_.emplace(grid_);
    if (win_.frame != Frame::averaged) throw StructuralError("forced models use the averaged frame");
    tb_ = SpectralInterpolant(std::vector<const ScalarField*>{&*theta_start_, &B_start_->x, &B_start_->y});
  }
  nc_ = 2 * static_cast<std::size_t>(grid_.n()) * (grid_.n() / 2 + 1);
  per_stamp_ = nc_ * (forced_ ? 5 : 2);
}

std::vector<double> WindowMap::path_samples(const Shared& sh, const Iterate& it, const BrownianPath& path) const {
  const Grid& g = grid_;
  const std::size_t N = g.size(), S = win_.stamps;
  const double t0 = win_.t0, dt = win_.dt;
  auto stamp = [&](std::size_t j) { return t0 + dt * static_cast<double>(j); };
  const Point s0 = path.shift(t0);
  auto srel = [&path, s0](double t) {
    const Point p = path.shift(t);
    return Point{p.x - s0.x, p.y - s0.y};
  };

  std::unique_ptr<TimeSampledVelocity> own_u;
  std::unique_ptr<VelocitySampler> own_sampler;
  const VelocitySampler* sampler = sh.sampler.get();
  ShiftFn shift = srel;
  if (win_.frame == Frame::shifted) {
    std::vector<VectorField> v;
    for (std::size_t j = 0; j <= S; ++j) v.push_back(shift_field(it.u[j], srel(stamp(j))));
    own_u = std::make_unique<TimeSampledVelocity>(t0, dt, std::move(v));
    own_sampler = std::make_unique<VelocitySampler>(*own_u);
    own_sampler->prepare_all();
    sampler = own_sampler.get();
    shift = {};
  }

  std::vector<double> out(S * per_stamp_);
  std::vector<double> vals(4 * N), xv(2 * N), tbv(3 * N);
  for (std::size_t j = 1; j <= S; ++j) {
    std::vector<Point> pts = shifted_nodes(g, srel(stamp(j)));
    std::vector<std::vector<Point>> phys;
    if (forced_) {
      phys.resize(j + 1);
      phys[j] = grid_points(g);
    }
    for (std::size_t i = j; i >= 1; --i) {
      advance_points_prepared(*sampler, pts, stamp(i), stamp(i - 1), dt, shift);
      if (forced_) {
        const Point si = srel(stamp(i - 1));
        phys[i - 1] = pts;
        for (Point& p : phys[i - 1]) p = {p.x + si.x, p.y + si.y};
      }
    }
    require_finite(pts, stamp(j));
    const Jacobian JA = jacobian_of_displacement(displacement(g, pts));
    xi_.evaluate(pts, xv);
    VectorField su(g);
    for (std::size_t n = 0; n < N; ++n) {
      su.x[n] = JA.xx[n] * xv[n] + JA.yx[n] * xv[N + n];
      su.y[n] = JA.xy[n] * xv[n] + JA.yy[n] * xv[N + n];
    }
    double* dst = out.data() + (j - 1) * per_stamp_;
    if (forced_) {
      tb_.evaluate(pts, tbv);
      ScalarField sth(g);
      VectorField sB(g);
      // (grad A)^{-1} B_k(a): the transported field at this stamp
      for (std::size_t n = 0; n < N; ++n) {
        const double det = JA.xx[n] * JA.yy[n] - JA.xy[n] * JA.yx[n];
        const double bx = tbv[N + n], by = tbv[2 * N + n];
        sth[n] = tbv[n];
        sB.x[n] = (JA.yy[n] * bx - JA.xy[n] * by) / det;
        sB.y[n] = (-JA.yx[n] * bx + JA.xx[n] * by) / det;
      }
      for (std::size_t i = 0; i <= j; ++i) {
        const double w = dt * ((i == 0 || i == j) ? 0.5 : 1.0);
        sh.bgrad[i].evaluate(phys[i], vals);
        std::optional<Jacobian> own;
        const Jacobian* JP = &JA;
        if (i > 0) {
          own.emplace(jacobian_of_displacement(displacement(g, phys[i])));
          JP = &*own;
        }
        for (std::size_t n = 0; n < N; ++n) {
          // B~ = grad P_i (grad P_0)^{-1} B_k(a) = grad P_i sB
          const double px = JP->xx[n] * sB.x[n] + JP->xy[n] * sB.y[n];
          const double py = JP->yx[n] * sB.x[n] + JP->yy[n] * sB.y[n];
          const double bxx = vals[n], bxy = vals[N + n], byx = vals[2 * N + n], byy = vals[3 * N + n];
          // theta e_y + (B~.grad) B - grad* B B~ ; the gradient part of grad* B~ B is dropped by P
          const double fx = px * bxx + py * bxy - (bxx * px + byx * py);
          const double fy = sth[n] + px * byx + py * byy - (bxy * px + byy * py);
          su.x[n] += w * (JP->xx[n] * fx + JP->yx[n] * fy);
          su.y[n] += w * (JP->xy[n] * fx + JP->yy[n] * fy);
        }
      }
      projected_coeffs(su, model_.alpha, dst);
      scalar_coeffs(sth, dst + 2 * nc_);
      projected_coeffs(sB, 0.0, dst + 3 * nc_);
    } else {
      projected_coeffs(su, model_.alpha, dst);
    }
  }
  return out;
}

MapResult WindowMap::apply(const Iterate& it, std::span<const BrownianPath> paths) const {
  const std::size_t S = win_.stamps, m = paths.size();
  if (m == 0) throw StructuralError("window map: empty ensemble");
  if (it.u.size() != S + 1) throw StructuralError("window map: iterate has the wrong number of stamps");

  Shared sh;
  if (win_.frame == Frame::averaged) {
    sh.u = std::make_unique<TimeSampledVelocity>(win_.t0, win_.dt, it.u);
    sh.sampler = std::make_unique<VelocitySampler>(*sh.u);
    sh.sampler->prepare_all();
  }
  if (forced_) {
    for (std::size_t i = 0; i <= S; ++i) {
      const Gradients gx = gradients(it.B[i].x), gy = gradients(it.B[i].y);
      sh.bgrad.emplace_back(
          std::vector<const ScalarField*>{&gx.dx, &gx.dy, &gy.dx, &gy.dy});
    }
  }

  const std::size_t len = S * per_stamp_;
  PairwiseSum sum(len), sq(len);
  const std::size_t block = std::max<std::size_t>(1, win_.block);
  std::vector<std::vector<double>> slots(std::min(block, m));
  std::vector<double> squares(len);
  for (std::size_t b0 = 0; b0 < m; b0 += block) {
    const std::size_t nb = std::min(block, m - b0);
    parallel_for(nb, [&](std::size_t i) { slots[i] = path_samples(sh, it, paths[b0 + i]); });
    for (std::size_t i = 0; i < nb; ++i) {
      sum.add(slots[i]);
      for (std::size_t e = 0; e < len; ++e) squares[e] = slots[i][e] * slots[i][e];
      sq.add(squares);
    }
  }
  std::vector<double> mean = sum.total();
  const std::vector<double> s2 = sq.total();
  const double md = static_cast<double>(m);
  for (double& v : mean) v /= md;

  const std::vector<double> w = layer_weights(grid_);
  // relative standard error of the quantity stored in layers [first, first + count) of a stamp
  auto std_error = [&](std::size_t j, std::size_t first, std::size_t count) {
    double var = 0, norm = 0;
    for (std::size_t l = first; l < first + count; ++l) {
      const std::size_t off = (j - 1) * per_stamp_ + l * nc_;
      for (std::size_t e = 0; e < nc_; ++e) {
        const double mu = mean[off + e];
        norm += w[e] * mu * mu;
        if (m > 1) var += w[e] * std::max(0.0, s2[off + e] / md - mu * mu) * md / (md - 1);
      }
    }
    const double se = std::sqrt(var / md);
    return rel_diff(se, std::sqrt(norm));
  };

  MapResult r;
  r.next.u.push_back(u_start_);
  r.se_u.push_back(0);
  if (forced_) {
    r.next.theta.push_back(*theta_start_);
    r.next.B.push_back(*B_start_);
    r.se_theta.push_back(0);
    r.se_B.push_back(0);
  }
  for (std::size_t j = 1; j <= S; ++j) {
    const double* base = mean.data() + (j - 1) * per_stamp_;
    r.next.u.emplace_back(layer_to_field(grid_, base), layer_to_field(grid_, base + nc_));
    r.se_u.push_back(std_error(j, 0, 2));
    if (forced_) {
      r.next.theta.push_back(layer_to_field(grid_, base + 2 * nc_));
      r.next.B.emplace_back(layer_to_field(grid_, base + 3 * nc_), layer_to_field(grid_, base + 4 * nc_));
      r.se_theta.push_back(std_error(j, 2, 1));
      r.se_B.push_back(std_error(j, 3, 2));
    }
  }
  return r;
}

double iterate_difference(const Iterate& a, const Iterate& b) {
  double sup = 0;
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    double s = 0;
    auto add = [&s](double diff, double base) {
      const double r = rel_diff(diff, base);
      s += r * r;
    };
    add(l2_norm(a.u[j] - b.u[j]), l2_norm(b.u[j]));
    if (j < a.theta.size() && j < b.theta.size()) add(l2_norm(a.theta[j] - b.theta[j]), l2_norm(b.theta[j]));
    if (j < a.B.size() && j < b.B.size()) add(l2_norm(a.B[j] - b.B[j]), l2_norm(b.B[j]));
    sup = std::max(sup, std::sqrt(s));
  }
  return sup;
}

}  // namespace stochflow::detail
