#include "stochflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "stochflow/interpolation.hpp"
#include "stochflow/spectral.hpp"
#include "stochflow/transport.hpp"

namespace stochflow {
namespace {

double relative_or_absolute(double diff, double base) {
  return std::abs(base) < 1e-8 ? std::abs(diff) : std::abs(diff) / std::abs(base);
}

// Gauss-Legendre nodes and weights on [0, 1]: Newton on P_n from the Chebyshev guess
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1 - z);
    w[i] = 1.0 / ((1 - z * z) * dp * dp);
  }
}

ScalarField field_mean(std::span<const ScalarField> s) { return ensemble_mean(s); }

}  // namespace

double pathwise_kelvin_residual(const VectorField& xi0, const MaterialLoop& loop, const FlowPair& flows) {
  const double c0 = circulation(xi0, loop);
  const VectorField xi = pullback_covector(xi0, flows.backward);
  const double ct = circulation(xi, advect_loop(loop, flows.forward));
  return relative_or_absolute(ct - c0, c0);
}

StatisticalKelvin statistical_kelvin_residual(const VectorField& xi_t, const VectorField& xi0, const MaterialLoop& loop,
                                              std::span<const FlowMap> A) {
  if (A.empty()) throw StructuralError("statistical_kelvin_residual: no paths");
  PairwiseSum sum(2);
  for (const FlowMap& a : A) {
    const double c = circulation(xi0, advect_loop(loop, a));
    const double v[2] = {c, c * c};
    sum.add(v);
  }
  const std::vector<double> s = sum.total();
  const double m = static_cast<double>(A.size());
  StatisticalKelvin r;
  r.rhs = s[0] / m;
  if (A.size() > 1) r.standard_error = std::sqrt(std::max(0.0, s[1] / m - r.rhs * r.rhs) / (m - 1));
  r.lhs = circulation(xi_t, loop);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

ScalarField ertel_defect(const VectorField& w_t, const VectorField& v_t, const FlowMap& X, const VectorField& w0,
                         const VectorField& v0) {
  return compose_scalar(dot(w_t, v_t), X) - dot(w0, v0);
}

ViscousErtel viscous_ertel(const VectorField& xi0, const VectorField& v0, std::span<const FlowPair> flows) {
  if (flows.empty()) throw StructuralError("viscous_ertel: no paths");
  std::vector<ScalarField> lam, fk;
  const ScalarField pair0 = dot(xi0, v0);
  for (const FlowPair& f : flows) {
    lam.push_back(dot(pullback_covector(xi0, f.backward), pushforward_vector(v0, f.forward, f.backward)));
    fk.push_back(compose_scalar(pair0, f.backward));
  }
  ViscousErtel r{field_mean(lam), field_mean(fk), 0};
  r.defect = max_abs(r.lambda - r.feynman_kac);
  return r;
}

std::pair<double, double> det_extremes(const FlowMap& X) {
  const ScalarField d = X.det_jacobian();
  const auto [lo, hi] = std::minmax_element(d.values().begin(), d.values().end());
  return {*lo, *hi};
}

double pathwise_enstrophy_defect(const ScalarField& q0, const FlowMap& A) {
  const double e0 = inner(q0, q0);
  const ScalarField q = compose_scalar(q0, A);
  return relative_or_absolute(inner(q, q) - e0, e0);
}

double stokes_defect(const VectorField& u, Point c, double radius, std::size_t loop_nodes) {
  const double circ = circulation(u, MaterialLoop::circle(c, radius, loop_nodes));
  const SpectralInterpolant w(curl2d(u));
  const int nr = 48, nphi = 2 * u.grid().n();
  std::vector<double> x, wt;
  gauss_legendre(nr, x, wt);
  std::vector<Point> pts;
  for (int i = 0; i < nr; ++i)
    for (int k = 0; k < nphi; ++k) {
      const double rho = radius * x[i], phi = kTwoPi * k / nphi;
      pts.push_back({c.x + rho * std::cos(phi), c.y + rho * std::sin(phi)});
    }
  std::vector<double> v(pts.size());
  w.evaluate(pts, v);
  double area = 0;
  for (int i = 0; i < nr; ++i) {
    double ring = 0;
    for (int k = 0; k < nphi; ++k) ring += v[static_cast<std::size_t>(i) * nphi + k];
    area += wt[i] * radius * x[i] * radius * ring * kTwoPi / nphi;
  }
  return relative_or_absolute(circ - area, area);
}

void ConservationLedger::begin_row(double t) {
  times_.push_back(t);
  rows_.emplace_back(columns_.size(), std::numeric_limits<double>::quiet_NaN());
}

std::size_t ConservationLedger::column_index(const std::string& column) {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it != columns_.end()) return static_cast<std::size_t>(it - columns_.begin());
  columns_.push_back(column);
  for (auto& r : rows_) r.push_back(std::numeric_limits<double>::quiet_NaN());
  return columns_.size() - 1;
}

void ConservationLedger::set(const std::string& column, double value) {
  if (rows_.empty()) throw StructuralError("ConservationLedger: begin_row first");
  rows_.back()[column_index(column)] = value;
}

bool ConservationLedger::has(const std::string& column) const {
  return std::find(columns_.begin(), columns_.end(), column) != columns_.end();
}

std::vector<double> ConservationLedger::series(const std::string& column) const {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end()) throw StructuralError("ConservationLedger: no column " + column);
  const std::size_t c = static_cast<std::size_t>(it - columns_.begin());
  std::vector<double> s;
  for (const auto& r : rows_) s.push_back(r[c]);
  return s;
}

std::string ConservationLedger::to_csv() const {
  std::string out = "t";
  for (const auto& c : columns_) out += "," + c;
  out += "\n";
  char buf[40];
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", times_[i]);
    out += buf;
    for (double v : rows_[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void ledger_update(ConservationLedger& ledger, const ModelSpec& model, const FluidState& state, const LedgerInputs& in) {
  ledger.begin_row(state.t);
  const VectorField xi = momentum(model, state.u);
  ledger.set("energy", 0.5 * inner(xi, state.u));
  const ScalarField q = model.alpha == 0 ? state.omega : curl2d(xi);
  ledger.set("enstrophy", inner(q, q));
  for (const MaterialLoop& l : in.loops) ledger.set("circulation_" + l.name(), circulation(state.u, l));
  if (in.forward) {
    const auto [lo, hi] = det_extremes(*in.forward);
    ledger.set("det_min", lo);
    ledger.set("det_max", hi);
  }
  if (in.ertel_defect) ledger.set("ertel_defect", *in.ertel_defect);
  if (state.B) ledger.set("cross_helicity", inner(xi, *state.B));
  if (in.pathwise_enstrophy_defect) ledger.set("pathwise_enstrophy_defect", *in.pathwise_enstrophy_defect);
}

}  // namespace stochflow
