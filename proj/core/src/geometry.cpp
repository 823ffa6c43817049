#include "quadfem/geometry.hpp"

#include "quadfem/errors.hpp"

#include <cmath>
#include <sstream>

namespace quadfem {

double QuadFrame::diameter() const {
  const double d02 = (vertex[2] - vertex[0]).norm();
  const double d13 = (vertex[3] - vertex[1]).norm();
  return std::max(d02, d13);
}

QuadFrame quad_frame(const std::array<Vec2, 4>& a) {
  const Vec2 m1 = 0.5 * (a[0] + a[1]);
  const Vec2 m2 = 0.5 * (a[1] + a[2]);
  const Vec2 m3 = 0.5 * (a[2] + a[3]);
  const Vec2 m4 = 0.5 * (a[3] + a[0]);

  QuadFrame f;
  f.origin = 0.25 * (a[0] + a[1] + a[2] + a[3]); // = (m1+m3)/2 = (m2+m4)/2
  f.r = m3 - f.origin;
  f.s = m4 - f.origin;
  f.rxs = cross2(f.r, f.s);

  const double scale = f.r.norm() * f.s.norm();
  if (f.rxs < 0.0) {
    std::ostringstream msg;
    msg << "quad_frame: vertices are clockwise (r x s = " << f.rxs << ")";
    throw BadOrientation(msg.str());
  }
  if (f.rxs <= kAreaEps * scale || scale == 0.0) {
    std::ostringstream msg;
    msg << "quad_frame: degenerate cell (r x s = " << f.rxs << ")";
    throw Degenerate(msg.str());
  }

  // Distortion of a4 from the parallelogram corner O + r + s, expressed in
  // the (r, s) basis.
  const Vec2 d = a[3] - (f.origin + f.r + f.s);
  f.alpha = cross2(d, f.s) / f.rxs;
  f.beta = cross2(f.r, d) / f.rxs;
  if (std::abs(f.alpha) + std::abs(f.beta) >= 1.0 - kConvexityEps) {
    std::ostringstream msg;
    msg << "quad_frame: not strictly convex (|alpha|+|beta| = "
        << std::abs(f.alpha) + std::abs(f.beta) << ")";
    throw NonConvex(msg.str());
  }

  f.vertex = a;
  f.vertex_eta = {-1.0 - f.alpha, -1.0 + f.alpha, 1.0 - f.alpha, 1.0 + f.alpha};
  f.vertex_xi = {1.0 - f.beta, -1.0 + f.beta, -1.0 - f.beta, 1.0 + f.beta};

  // xi = cross2(r, p - O)/rxs and eta = cross2(p - O, s)/rxs.
  f.grad_xi = rot90(f.r) / f.rxs;
  f.grad_eta = -rot90(f.s) / f.rxs;
  return f;
}

std::pair<double, double> xi_eta(const QuadFrame& frame, const Vec2& p) {
  const Vec2 q = p - frame.origin;
  const double xi = cross2(frame.r, q) / frame.rxs;
  const double eta = cross2(q, frame.s) / frame.rxs;
  return {xi, eta};
}

double shape_regularity(const QuadFrame& frame) {
  const double nr = frame.r.norm();
  const double ns = frame.s.norm();
  return std::max({nr * ns / frame.rxs, nr / ns, ns / nr});
}

} // namespace quadfem
