#include "quadfem/quadrature.hpp"

#include "quadfem/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace quadfem {

namespace {

void check_degree(int degree, const char* where) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    std::ostringstream msg;
    msg << where << ": unsupported quadrature degree " << degree
        << " (max " << kMaxQuadratureDegree << ")";
    throw UnsupportedDegree(msg.str());
  }
}

std::vector<std::pair<double, double>> compute_gauss_legendre(int n) {
  // Newton iteration on the Legendre polynomial P_n, starting from the
  // Chebyshev-like initial guess.  Nodes symmetric about zero.
  std::vector<std::pair<double, double>> rule(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return rule;
}

} // namespace

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw UnsupportedDegree("gauss_legendre: n out of range");
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  check_degree(degree, "triangle_rule");
  // Duffy map from the unit square: (u, v) = (ta, tb (1 - ta)) with Jacobian
  // (1 - ta); the collapsed direction needs one extra degree of exactness.
  const int na = (degree + 2) / 2 + 1;
  const int nb = (degree + 1) / 2 + 1;
  const auto& gla = gauss_legendre(na);
  const auto& glb = gauss_legendre(nb);

  const double jac = 2.0 * triangle_signed_area(a, b, c);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(na) * nb);
  rule.weights.reserve(static_cast<std::size_t>(na) * nb);
  for (const auto& [xa, wa] : gla) {
    const double ta = 0.5 * (xa + 1.0);
    for (const auto& [xb, wb] : glb) {
      const double tb = 0.5 * (xb + 1.0);
      const double u = ta;
      const double v = tb * (1.0 - ta);
      rule.points.push_back(a + u * (b - a) + v * (c - a));
      rule.weights.push_back(0.25 * wa * wb * (1.0 - ta) * jac);
    }
  }
  return rule;
}

QuadratureRule quad_cell_rule(const QuadFrame& frame, int degree, int diagonal) {
  check_degree(degree, "quad_cell_rule");
  // Preimage corners in the (eta, xi) plane.
  std::array<Vec2, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = Vec2(frame.vertex_eta[i], frame.vertex_xi[i]);

  const int i0 = (diagonal == 0) ? 0 : 1;
  QuadratureRule t1 = triangle_rule(c[i0], c[(i0 + 1) % 4], c[(i0 + 2) % 4], degree);
  QuadratureRule t2 = triangle_rule(c[i0], c[(i0 + 2) % 4], c[(i0 + 3) % 4], degree);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(t1.points.size() + t2.points.size());
  rule.weights.reserve(t1.points.size() + t2.points.size());
  auto append = [&](const QuadratureRule& t) {
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const double eta = t.points[i].x();
      const double xi = t.points[i].y();
      rule.points.push_back(frame.origin + eta * frame.r + xi * frame.s);
      rule.weights.push_back(t.weights[i] * frame.rxs);
    }
  };
  append(t1);
  append(t2);
  return rule;
}

QuadratureRule edge_rule(const Vec2& p0, const Vec2& p1, int degree) {
  check_degree(degree, "edge_rule");
  const int n = degree / 2 + 1;
  const auto& gl = gauss_legendre(n);
  const double len = (p1 - p0).norm();
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  rule.points.reserve(gl.size());
  rule.weights.reserve(gl.size());
  for (const auto& [x, w] : gl) {
    const double t = 0.5 * (x + 1.0);
    rule.points.push_back(p0 + t * (p1 - p0));
    rule.weights.push_back(0.5 * w * len);
  }
  return rule;
}

} // namespace quadfem
