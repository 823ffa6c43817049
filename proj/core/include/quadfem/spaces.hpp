#ifndef QUADFEM_SPACES_HPP
#define QUADFEM_SPACES_HPP

#include "quadfem/elements.hpp"
#include "quadfem/mesh.hpp"

#include <functional>
#include <vector>

namespace quadfem {

/// Global finite element spaces.  The trailing 0 marks the homogeneous
/// essential-boundary variant (constrained DOFs eliminated); Pressure0 is
/// the zero-mean pressure space (flagged, no DOF eliminated).
enum class SpaceKind { Qltz, Qltz0, Morley, Morley0, Pressure, Pressure0 };

/// Which local element a space uses on a given cell shape.  Velocity spaces
/// pair QLTZ on quads with nonconforming P1 on triangles; Morley spaces pair
/// the quadrilateral and triangular Morley elements; pressure pairs P1(Q)
/// with P0(T).
ElementKind element_kind_for(SpaceKind kind, CellKind cell);

/// Local basis of a space on one mesh cell.  Morley normal-derivative DOFs
/// use the globally stored edge normals, which makes them single-valued
/// across cells.
LocalBasis local_basis(const Mesh& mesh, SpaceKind kind, int cell);

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;
using MatrixFn = std::function<Mat2(const Vec2&)>;

/// Global DOF enumeration of a space on a mesh.  Scalar DOFs are numbered
/// edge DOFs first (by edge id), then cell DOFs (by cell id), then vertex
/// DOFs (by vertex id); constrained DOFs are eliminated and appear as -1 in
/// the tables.  Vector-valued spaces stack `components` copies: the global
/// index of scalar DOF g in component k is k*n_scalar + g.
struct DofMap {
  SpaceKind kind = SpaceKind::Qltz;
  const Mesh* mesh = nullptr;
  int components = 1;
  int n_scalar = 0;      ///< free scalar DOFs
  int n_constrained = 0; ///< eliminated scalar DOFs
  bool zero_mean = false;

  std::vector<std::vector<int>> cell_dofs; ///< scalar local -> global, local basis order
  std::vector<int> edge_dof;               ///< per edge, -1 if constrained/absent
  std::vector<int> vertex_dof;             ///< per vertex (Morley), -1 otherwise
  std::vector<int> cell_dof;               ///< bubble DOF (Qltz) or block start (pressure)

  /// Coefficient vector length.
  int size() const { return components * n_scalar; }
  /// Mathematical dimension of the space (one less when zero-mean).
  int dim() const { return components * n_scalar - (zero_mean ? 1 : 0); }
  int global(int component, int scalar_dof) const { return component * n_scalar + scalar_dof; }
};

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, int components = 1);

/// Finite element function: a coefficient vector over a DofMap.  Eliminated
/// DOFs evaluate as zero.
struct FeFunction {
  const DofMap* map = nullptr;
  Eigen::VectorXd coef;
};

FeFunction zero_function(const DofMap& map);

/// Local coefficients of one component on a cell, in local basis order.
Eigen::VectorXd local_coefficients(const FeFunction& f, int cell, int component = 0);

// Point evaluation with broken (cellwise) derivatives.  All throw
// PointOutsideCell when p does not lie in the cell.
double fe_value(const FeFunction& f, int cell, const Vec2& p, int component = 0);
Vec2 fe_broken_grad(const FeFunction& f, int cell, const Vec2& p, int component = 0);
Mat2 fe_broken_hessian(const FeFunction& f, int cell, const Vec2& p, int component = 0);
Vec2 fe_vector_value(const FeFunction& f, int cell, const Vec2& p);
/// Jacobian (row k is the gradient of component k).
Mat2 fe_vector_grad(const FeFunction& f, int cell, const Vec2& p);
double fe_broken_div(const FeFunction& f, int cell, const Vec2& p);
/// curl v = d v2/dx - d v1/dy.
double fe_broken_curl(const FeFunction& f, int cell, const Vec2& p);

/// Scalar QLTZ interpolant: every DOF is the corresponding edge or cell
/// average of w.
FeFunction interpolate_qltz_scalar(const Mesh& mesh, const DofMap& map, const ScalarFn& w,
                                   int degree = kOverIntegrationDegree);

/// Vector QLTZ interpolant in two steps: edge averages fix the component
/// edge DOFs, then the two cell-bubble coefficients are chosen so that every
/// P1 divergence moment of w is preserved on each quad:
///   int_Q div(Pi w) q = int_Q div(w) q   for q in {1, xi, eta}.
/// The divergence of w is supplied analytically.  On triangles the edge
/// averages alone determine the local P1 field.
FeFunction interpolate_qltz_vector(const Mesh& mesh, const DofMap& map, const VectorFn& w,
                                   const ScalarFn& div_w,
                                   int degree = kOverIntegrationDegree);

/// Morley interpolant: vertex values plus edge averages of the normal
/// derivative (along the globally stored edge normal).
FeFunction interpolate_morley(const Mesh& mesh, const DofMap& map, const ScalarFn& phi,
                              const VectorFn& grad_phi,
                              int degree = kOverIntegrationDegree);

/// Cellwise L2 projection onto the pressure space; subtracts the global mean
/// when the map is zero-mean.
FeFunction l2_project_pressure(const Mesh& mesh, const DofMap& map, const ScalarFn& q,
                               int degree = kOverIntegrationDegree);

/// Coefficients of the constant function 1 in a pressure space.
Eigen::VectorXd pressure_constant_coefficients(const Mesh& mesh, const DofMap& map);

/// Mean value of a pressure FE function over the domain.
double pressure_mean(const Mesh& mesh, const FeFunction& p);

} // namespace quadfem

#endif
