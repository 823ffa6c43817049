#ifndef QUADFEM_GEOMETRY_HPP
#define QUADFEM_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <utility>

namespace quadfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rotate a vector by +90 degrees (counterclockwise).
inline Vec2 rot90(const Vec2& a) { return Vec2(-a.y(), a.x()); }

/// Coordinate frame of a strictly convex quadrilateral.
///
/// Let a1..a4 be the vertices in counterclockwise order and m_i the midpoint
/// of edge e_i = (a_i, a_{i+1}).  The midpoints form a parallelogram; its
/// center is O, and the axes are r = O->m3 and s = O->m4.  Writing the
/// distortion vector d = alpha*r + beta*s, the vertices are
///
///   a1 = O - r + s - d,   a2 = O - r - s + d,
///   a3 = O + r - s - d,   a4 = O + r + s + d,
///
/// which is the unique +/- pattern consistent with m1 = O-r, m2 = O-s,
/// m3 = O+r, m4 = O+s.  Strict convexity is |alpha| + |beta| < 1, and
/// counterclockwise orientation is cross2(r, s) > 0.
///
/// The frame coordinates (xi, eta) of a point p are defined through
/// p = O + eta*r + xi*s; they are affine functions of p and play the role
/// barycentric coordinates play on triangles.
struct QuadFrame {
  Vec2 origin;                   ///< O, center of the midpoint parallelogram
  Vec2 r;                        ///< O -> midpoint of edge e3
  Vec2 s;                        ///< O -> midpoint of edge e4
  double alpha = 0.0;            ///< distortion coefficient along r
  double beta = 0.0;             ///< distortion coefficient along s
  double rxs = 0.0;              ///< cross2(r, s) > 0; cell area is 4*rxs

  std::array<Vec2, 4> vertex;    ///< physical vertices, counterclockwise
  Vec2 grad_xi;                  ///< constant physical gradient of xi
  Vec2 grad_eta;                 ///< constant physical gradient of eta

  /// Frame coordinates (eta_i, xi_i) of vertex i.
  std::array<double, 4> vertex_eta;
  std::array<double, 4> vertex_xi;

  double area() const { return 4.0 * rxs; }
  double diameter() const;
};

/// Convexity / degeneracy tolerances used when building frames.
inline constexpr double kConvexityEps = 1e-10;
inline constexpr double kAreaEps = 1e-12;

/// Build the frame of a convex quadrilateral from its counterclockwise
/// vertices.  Throws BadOrientation for clockwise input, Degenerate when
/// cross2(r,s) <= kAreaEps*|r||s|, and NonConvex when |alpha|+|beta| >=
/// 1 - kConvexityEps.
QuadFrame quad_frame(const std::array<Vec2, 4>& vertices);

/// Frame coordinates (xi, eta) of a physical point, i.e. the solution of
/// p - O = eta*r + xi*s.
std::pair<double, double> xi_eta(const QuadFrame& frame, const Vec2& p);

/// Shape regularity indicator max{|r||s|/(rxs), |r|/|s|, |s|/|r|} >= 1,
/// with equality exactly for squares.
double shape_regularity(const QuadFrame& frame);

/// Signed area of a triangle (positive for counterclockwise vertices).
inline double triangle_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross2(b - a, c - a);
}

} // namespace quadfem

#endif
