#ifndef QUADFEM_QUADRATURE_HPP
#define QUADFEM_QUADRATURE_HPP

#include "quadfem/geometry.hpp"

#include <vector>

namespace quadfem {

/// Highest polynomial exactness degree the rule factories accept.
inline constexpr int kMaxQuadratureDegree = 20;

/// Default over-integration degree for non-polynomial data (loads, error
/// norms, interpolation of transcendental functions).
inline constexpr int kOverIntegrationDegree = 10;

/// Quadrature rule with points in physical coordinates; weights carry the
/// measure (area or length) of the integration domain.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0; ///< polynomial exactness

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) sum += weights[i] * f(points[i]);
    return sum;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1] (exact to degree 2n-1).
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

/// Rule on a (counterclockwise) triangle, exact for total degree <= degree.
QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree);

/// Rule on a convex quadrilateral built by pulling the cell back through the
/// affine frame map p = O + eta r + xi s (constant Jacobian rxs), splitting
/// the (eta, xi) preimage along one of its diagonals, and applying triangle
/// rules.  `diagonal` selects the split (0 or 1); both give exact results.
QuadratureRule quad_cell_rule(const QuadFrame& frame, int degree, int diagonal = 0);

/// Rule on the segment [p0, p1], exact for polynomial degree <= degree.
QuadratureRule edge_rule(const Vec2& p0, const Vec2& p1, int degree);

/// Integral of f over the quadrilateral, exact for polynomials of total
/// degree <= degree.
template <class F>
double integrate_quad(const QuadFrame& frame, F&& f, int degree, int diagonal = 0) {
  return quad_cell_rule(frame, degree, diagonal).integrate(std::forward<F>(f));
}

template <class F>
double integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c, F&& f, int degree) {
  return triangle_rule(a, b, c, degree).integrate(std::forward<F>(f));
}

/// Line integral over [p0, p1] (not divided by the length).
template <class F>
double integrate_segment(const Vec2& p0, const Vec2& p1, F&& f, int degree) {
  return edge_rule(p0, p1, degree).integrate(std::forward<F>(f));
}

/// Average of f along [p0, p1].
template <class F>
double segment_average(const Vec2& p0, const Vec2& p1, F&& f, int degree) {
  return integrate_segment(p0, p1, std::forward<F>(f), degree) / (p1 - p0).norm();
}

} // namespace quadfem

#endif
