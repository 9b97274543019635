#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochflow/ensemble.hpp"
#include "stochflow/loop.hpp"
#include "stochflow/model.hpp"

namespace stochflow {

// |circ(xi', X(loop)) - circ(xi0, loop)| / |circ(xi0, loop)| with xi' = pullback_covector(xi0, A);
// absolute when the reference circulation is below 1e-8 in magnitude.
double pathwise_kelvin_residual(const VectorField& xi0, const MaterialLoop& loop, const FlowPair& flows);

struct StatisticalKelvin {
  double lhs = 0;             // circ(xi_t, loop)
  double rhs = 0;             // mean over paths of circ(xi0, A(loop))
  double standard_error = 0;  // of rhs; 0 for a single path
  double residual = 0;        // |lhs - rhs|
};
// A holds the back-to-label map of each path at time t, in path order
StatisticalKelvin statistical_kelvin_residual(const VectorField& xi_t, const VectorField& xi0, const MaterialLoop& loop,
                                              std::span<const FlowMap> A);

// (w_t . v_t) o X - w0 . v0
ScalarField ertel_defect(const VectorField& w_t, const VectorField& v_t, const FlowMap& X, const VectorField& w0,
                         const VectorField& v0);

struct ViscousErtel {
  ScalarField lambda;    // mean over paths of pullback(xi0, A) . pushforward(v0, X)
  ScalarField feynman_kac;  // mean over paths of (xi0 . v0) o A
  double defect = 0;     // sup |lambda - feynman_kac|
};
ViscousErtel viscous_ertel(const VectorField& xi0, const VectorField& v0, std::span<const FlowPair> flows);

// min and max of det grad X over the nodes
std::pair<double, double> det_extremes(const FlowMap& X);

// |(||q0 o A||^2 - ||q0||^2)| / ||q0||^2
double pathwise_enstrophy_defect(const ScalarField& q0, const FlowMap& A);

// circulation of u around a circle against the area integral of curl u over the disk
// (polar Gauss-Legendre x trapezoid on the interpolant of curl u); relative difference
double stokes_defect(const VectorField& u, Point center, double radius, std::size_t loop_nodes = 256);

// Time series keyed by column name; columns appear in first-use order. Missing entries are NaN.
class ConservationLedger {
 public:
  void begin_row(double t);
  void set(const std::string& column, double value);
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::vector<double> series(const std::string& column) const;
  bool has(const std::string& column) const;
  // header "t,<columns>", then one row per time, %.17g
  std::string to_csv() const;

 private:
  std::size_t column_index(const std::string& column);
  std::vector<double> times_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

struct LedgerInputs {
  // loops already carried to the state's time; column circulation_<name>
  std::span<const MaterialLoop> loops;
  // forward map to the state's time: det_min, det_max
  const FlowMap* forward = nullptr;
  std::optional<double> ertel_defect;
  std::optional<double> pathwise_enstrophy_defect;
};

// Appends a row: energy, enstrophy (||curl T u||^2), circulations, det extremes, ertel_defect,
// cross_helicity <T u, B> for boussinesq runs, pathwise_enstrophy_defect.
void ledger_update(ConservationLedger& ledger, const ModelSpec& model, const FluidState& state,
                   const LedgerInputs& in = {});

}  // namespace stochflow
