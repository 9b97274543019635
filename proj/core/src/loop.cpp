#include "stochflow/loop.hpp"

#include <cmath>

#include "fft.hpp"
#include "stochflow/interpolation.hpp"

namespace stochflow {
namespace {

// periodic parts r(s) = X(s) - winding * s
std::array<std::vector<double>, 2> periodic_parts(const std::vector<Point>& nodes, std::array<int, 2> w) {
  const std::size_t P = nodes.size();
  std::array<std::vector<double>, 2> r{std::vector<double>(P), std::vector<double>(P)};
  for (std::size_t i = 0; i < P; ++i) {
    const double s = kTwoPi * static_cast<double>(i) / static_cast<double>(P);
    r[0][i] = nodes[i].x - w[0] * s;
    r[1][i] = nodes[i].y - w[1] * s;
  }
  return r;
}

}  // namespace

MaterialLoop::MaterialLoop(std::vector<Point> nodes, std::array<int, 2> winding, std::string name)
    : nodes_(std::move(nodes)), winding_(winding), name_(std::move(name)) {
  if (nodes_.size() < kMinNodes) throw StructuralError("MaterialLoop: at least 64 nodes required");
  if (nodes_.size() % 2 != 0) throw StructuralError("MaterialLoop: node count must be even");
  for (const Point& p : nodes_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NumericalError("MaterialLoop: non-finite node");
}

MaterialLoop MaterialLoop::circle(Point c, double radius, std::size_t nodes, std::string name) {
  if (!(radius > 0)) throw StructuralError("MaterialLoop::circle: radius must be positive");
  std::vector<Point> p(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = kTwoPi * static_cast<double>(i) / static_cast<double>(nodes);
    p[i] = {c.x + radius * std::cos(s), c.y + radius * std::sin(s)};
  }
  return MaterialLoop(std::move(p), {0, 0}, std::move(name));
}

MaterialLoop MaterialLoop::horizontal(double y0, std::size_t nodes, std::string name) {
  std::vector<Point> p(nodes);
  for (std::size_t i = 0; i < nodes; ++i) p[i] = {kTwoPi * static_cast<double>(i) / static_cast<double>(nodes), y0};
  return MaterialLoop(std::move(p), {1, 0}, std::move(name));
}

double MaterialLoop::max_spacing() const {
  const std::size_t P = nodes_.size();
  double m = 0;
  for (std::size_t i = 0; i < P; ++i) {
    Point b = nodes_[(i + 1) % P];
    if (i + 1 == P) b = {b.x + kTwoPi * winding_[0], b.y + kTwoPi * winding_[1]};
    m = std::max(m, std::hypot(b.x - nodes_[i].x, b.y - nodes_[i].y));
  }
  return m;
}

std::vector<Point> MaterialLoop::tangents() const {
  const auto r = periodic_parts(nodes_, winding_);
  const std::vector<double> dx = detail::periodic_derivative(r[0]), dy = detail::periodic_derivative(r[1]);
  std::vector<Point> t(nodes_.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = {dx[i] + winding_[0], dy[i] + winding_[1]};
  return t;
}

MaterialLoop MaterialLoop::refined() const {
  const auto r = periodic_parts(nodes_, winding_);
  const std::vector<double> x = detail::periodic_upsample(r[0], 2), y = detail::periodic_upsample(r[1], 2);
  std::vector<Point> p(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = kTwoPi * static_cast<double>(i) / static_cast<double>(p.size());
    p[i] = {x[i] + winding_[0] * s, y[i] + winding_[1] * s};
  }
  // keep the original nodes bit-exact
  for (std::size_t i = 0; i < nodes_.size(); ++i) p[2 * i] = nodes_[i];
  return MaterialLoop(std::move(p), winding_, name_);
}

double circulation(const VectorField& w, const MaterialLoop& loop) {
  if (!loop.resolved(w.grid()))
    throw StructuralError("circulation: loop '" + loop.name() + "' is under-resolved (max spacing " +
                          std::to_string(loop.max_spacing()) + "); refine it");
  const std::vector<Point> v = interpolate_field(w, loop.nodes());
  const std::vector<Point> t = loop.tangents();
  double sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += v[i].x * t[i].x + v[i].y * t[i].y;
  return sum * kTwoPi / static_cast<double>(v.size());
}

MaterialLoop advect_loop(const MaterialLoop& loop, const FlowMap& X, int max_refinements) {
  MaterialLoop src = loop;
  for (int r = 0;; ++r) {
    MaterialLoop img(X.apply(src.nodes()), src.winding(), src.name());
    if (img.resolved(X.grid()) || r == max_refinements) return img;
    src = src.refined();
  }
}

}  // namespace stochflow
