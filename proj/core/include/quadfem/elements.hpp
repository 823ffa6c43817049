#ifndef QUADFEM_ELEMENTS_HPP
#define QUADFEM_ELEMENTS_HPP

#include "quadfem/geometry.hpp"
#include "quadfem/mesh.hpp"

#include <array>
#include <vector>

namespace quadfem {

enum class ElementKind {
  Qltz,        ///< P1(Q) + span{xi^2, eta^2}; one cell-average and four edge-average DOFs
  QuadMorley,  ///< P2(Q) + span{xi^3, eta^3}; vertex values and edge normal-derivative averages
  TriP1nc,     ///< nonconforming P1 on triangles; edge-average DOFs
  TriMorley,   ///< P2 on triangles; vertex values and edge normal-derivative averages
  PressureP1,  ///< P1(Q) in the frame basis {1, xi, eta} (no dual DOFs)
  PressureP0,  ///< constants on a triangle
};

int element_dimension(ElementKind kind);

/// Basis of a local polynomial space on one cell, stored as a coefficient
/// table over monomials u^i v^j of affine local coordinates (u, v):
/// (xi, eta) on quadrilaterals, the barycentric pair (lambda_1, lambda_2) on
/// triangles.  Values, physical gradients and Hessians come from the chain
/// rule through the constant gradients of u and v.
struct LocalBasis {
  ElementKind kind;
  int dim = 0;

  // Affine chart u = off_u + grad_u . p, v = off_v + grad_v . p.
  Vec2 grad_u, grad_v;
  double off_u = 0.0, off_v = 0.0;

  std::vector<std::array<int, 2>> monomials; ///< (i, j) exponent pairs
  Eigen::MatrixXd coef;                      ///< dim x monomials.size()

  std::pair<double, double> local_coords(const Vec2& p) const {
    return {off_u + grad_u.dot(p), off_v + grad_v.dot(p)};
  }

  void eval(const Vec2& p, Eigen::VectorXd& values) const;
  void eval_grad(const Vec2& p, std::vector<Vec2>& grads) const;
  void eval_hessian(const Vec2& p, std::vector<Mat2>& hessians) const;
};

/// Dual basis phi_0..phi_4 of the QLTZ element (cell-average DOF first, then
/// the four edge-average DOFs), from its closed-form expression in
/// (xi, eta, alpha, beta).
LocalBasis qltz_basis(const QuadFrame& frame);

/// Values and physical gradients of the five QLTZ basis functions at p.
void qltz_eval(const QuadFrame& frame, const Vec2& p,
               std::array<double, 5>& values, std::array<Vec2, 5>& gradients);

/// Dual basis of the quadrilateral Morley element for the DOFs
/// {v(a_1)..v(a_4), avg over e_i of d v/d n_i}.  The normal direction of
/// each edge is a caller-supplied unit vector (the globally stored edge
/// normal during assembly); pass outward normals for standalone use.
/// Built by inverting the 8x8 DOF-on-monomial matrix; throws IllConditioned
/// when its condition number exceeds 1e12.
LocalBasis quad_morley_basis(const QuadFrame& frame,
                             const std::array<Vec2, 4>& edge_normals);

/// Same with outward edge normals.
LocalBasis quad_morley_basis(const QuadFrame& frame);

/// Nonconforming P1 basis on a triangle: avg over e_i of phi_j = delta_ij
/// with e_i the edge from vertex i to vertex i+1 (closed form 1 - 2*lambda
/// of the opposite vertex).
LocalBasis tri_p1nc_basis(const std::array<Vec2, 3>& vertices);

/// Triangular Morley dual basis for {v(a_1)..v(a_3), avg over e_i of
/// d v/d n_i}; 6x6 DOF-matrix inversion with the same conditioning check.
LocalBasis tri_morley_basis(const std::array<Vec2, 3>& vertices,
                            const std::array<Vec2, 3>& edge_normals);
LocalBasis tri_morley_basis(const std::array<Vec2, 3>& vertices);

/// Pressure bases: {1, xi, eta} on a quad, {1} on a triangle.
LocalBasis pressure_p1_basis(const QuadFrame& frame);
LocalBasis pressure_p0_basis(const std::array<Vec2, 3>& vertices);

/// Coefficient matrix of the divergence-moment system solved in step 2 of
/// the vector QLTZ interpolant:
///   [ int dx(phi0) xi   int dy(phi0) xi  ]
///   [ int dx(phi0) eta  int dy(phi0) eta ]
/// computed by exact quadrature.  The determinant is positive on every
/// strictly convex cell; SingularStep2 signals an internal error.
Mat2 step2_matrix(const QuadFrame& frame);
double step2_determinant(const Mat2& m);

/// Outward unit normals of a cell's edges (local edge i from vertex i to
/// vertex i+1, counterclockwise cells).
std::array<Vec2, 4> outward_normals_quad(const QuadFrame& frame);
std::array<Vec2, 3> outward_normals_tri(const std::array<Vec2, 3>& vertices);

} // namespace quadfem

#endif
