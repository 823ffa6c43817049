#ifndef QUADFEM_ASSEMBLY_HPP
#define QUADFEM_ASSEMBLY_HPP

#include "quadfem/spaces.hpp"

#include <Eigen/Sparse>
#include <iosfwd>

namespace quadfem {

using SpMat = Eigen::SparseMatrix<double>;

/// Assembled symmetric system (optionally with a mean-zero constraint row
/// appended by the caller).
struct SparseSystem {
  SpMat matrix;
  Eigen::VectorXd rhs;
};

/// Broken-gradient stiffness sum_K int_K grad(u) . grad(v).  For a
/// two-component map the matrix is block diagonal with one scalar block per
/// component.  SPD on the constrained spaces.
SpMat assemble_stiffness(const Mesh& mesh, const DofMap& V);

/// Divergence coupling B(q, v) = sum_K int_K div(v) q, rows indexed by
/// pressure DOFs and columns by velocity DOFs.
SpMat assemble_div(const Mesh& mesh, const DofMap& V, const DofMap& W);

/// Broken-Hessian form sum_K int_K hess(u) : hess(v) on a Morley space.
SpMat assemble_hessian(const Mesh& mesh, const DofMap& M);

/// Block-diagonal pressure mass matrix.
SpMat assemble_pressure_mass(const Mesh& mesh, const DofMap& W);

/// Load vector int f v against all basis functions of the space.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& V, const ScalarFn& f,
                              int degree = kOverIntegrationDegree);
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& V, const VectorFn& f,
                              int degree = kOverIntegrationDegree);

/// Integrals int_Omega q_i of the pressure basis functions (the mean-zero
/// constraint row).
Eigen::VectorXd pressure_integrals(const Mesh& mesh, const DofMap& W);

/// Exact solution bundles for error measurement; only the members a norm
/// needs have to be set.
struct ExactScalar {
  ScalarFn value;
  VectorFn grad;
  MatrixFn hessian;
};
struct ExactVector {
  VectorFn value;
  MatrixFn grad; ///< Jacobian, row k = gradient of component k
};

enum class NormKind { L2, H1Broken, H2Broken };

/// Broken-norm error against an exact solution, by cellwise over-integrated
/// quadrature.
double error_norm(const Mesh& mesh, const ExactScalar& exact, const FeFunction& uh,
                  NormKind norm, int degree = kOverIntegrationDegree);
double error_norm(const Mesh& mesh, const ExactVector& exact, const FeFunction& uh,
                  NormKind norm, int degree = kOverIntegrationDegree);

/// L2 norm of the broken divergence of a velocity field (exact quadrature).
double divergence_l2(const Mesh& mesh, const FeFunction& uh);

/// MatrixMarket coordinate-format export (for debugging).
void write_matrix_market(const SpMat& matrix, std::ostream& out);

} // namespace quadfem

#endif
