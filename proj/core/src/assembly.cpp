#include "quadfem/assembly.hpp"

#include "quadfem/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace quadfem {

namespace {

// Exact for all the polynomial element integrands (products of chart
// polynomials of degree <= 2 with constant-Jacobian pullbacks).
constexpr int kFormDegree = 4;

using Triplet = Eigen::Triplet<double>;

void scatter_symmetric(std::vector<Triplet>& triplets, const DofMap& map,
                       const std::vector<int>& dofs, const Eigen::MatrixXd& ke) {
  for (int k = 0; k < map.components; ++k) {
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (dofs[i] < 0) continue;
      for (std::size_t j = 0; j < dofs.size(); ++j) {
        if (dofs[j] < 0) continue;
        triplets.emplace_back(map.global(k, dofs[i]), map.global(k, dofs[j]),
                              ke(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
}

} // namespace

SpMat assemble_stiffness(const Mesh& mesh, const DofMap& V) {
  std::vector<Triplet> triplets;
  std::vector<Vec2> grads;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, V.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, kFormDegree);
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval_grad(rule.points[q], grads);
      for (int i = 0; i < basis.dim; ++i) {
        for (int j = 0; j < basis.dim; ++j) {
          ke(i, j) += rule.weights[q] *
                      grads[static_cast<std::size_t>(i)].dot(grads[static_cast<std::size_t>(j)]);
        }
      }
    }
    scatter_symmetric(triplets, V, V.cell_dofs[static_cast<std::size_t>(c)], ke);
  }
  SpMat a(V.size(), V.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

SpMat assemble_hessian(const Mesh& mesh, const DofMap& M) {
  if (M.kind != SpaceKind::Morley && M.kind != SpaceKind::Morley0) {
    throw ConfigError("assemble_hessian: needs a Morley-space map");
  }
  std::vector<Triplet> triplets;
  std::vector<Mat2> hessians;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, M.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, kFormDegree);
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval_hessian(rule.points[q], hessians);
      for (int i = 0; i < basis.dim; ++i) {
        for (int j = 0; j < basis.dim; ++j) {
          ke(i, j) += rule.weights[q] * (hessians[static_cast<std::size_t>(i)].array() *
                                         hessians[static_cast<std::size_t>(j)].array())
                                            .sum();
        }
      }
    }
    scatter_symmetric(triplets, M, M.cell_dofs[static_cast<std::size_t>(c)], ke);
  }
  SpMat k(M.size(), M.size());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

SpMat assemble_div(const Mesh& mesh, const DofMap& V, const DofMap& W) {
  if (V.components != 2) throw ConfigError("assemble_div: velocity map must have 2 components");
  if (V.mesh != W.mesh) throw IncompatibleMesh("assemble_div: maps built on different meshes");
  std::vector<Triplet> triplets;
  std::vector<Vec2> grads;
  Eigen::VectorXd pvals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis vbasis = local_basis(mesh, V.kind, c);
    const LocalBasis pbasis = local_basis(mesh, W.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, kFormDegree);
    Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(pbasis.dim, vbasis.dim);
    Eigen::MatrixXd by = Eigen::MatrixXd::Zero(pbasis.dim, vbasis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      vbasis.eval_grad(rule.points[q], grads);
      pbasis.eval(rule.points[q], pvals);
      for (int i = 0; i < pbasis.dim; ++i) {
        for (int j = 0; j < vbasis.dim; ++j) {
          bx(i, j) += rule.weights[q] * pvals[i] * grads[static_cast<std::size_t>(j)].x();
          by(i, j) += rule.weights[q] * pvals[i] * grads[static_cast<std::size_t>(j)].y();
        }
      }
    }
    const std::vector<int>& vdofs = V.cell_dofs[static_cast<std::size_t>(c)];
    const std::vector<int>& pdofs = W.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < pdofs.size(); ++i) {
      for (std::size_t j = 0; j < vdofs.size(); ++j) {
        if (vdofs[j] < 0) continue;
        triplets.emplace_back(pdofs[i], V.global(0, vdofs[j]),
                              bx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        triplets.emplace_back(pdofs[i], V.global(1, vdofs[j]),
                              by(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
  SpMat b(W.size(), V.size());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

SpMat assemble_pressure_mass(const Mesh& mesh, const DofMap& W) {
  std::vector<Triplet> triplets;
  Eigen::VectorXd vals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, W.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, kFormDegree);
    Eigen::MatrixXd me = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval(rule.points[q], vals);
      me += rule.weights[q] * vals * vals.transpose();
    }
    scatter_symmetric(triplets, W, W.cell_dofs[static_cast<std::size_t>(c)], me);
  }
  SpMat m(W.size(), W.size());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& V, const ScalarFn& f, int degree) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(V.size());
  Eigen::VectorXd vals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, V.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, degree);
    Eigen::VectorXd fe = Eigen::VectorXd::Zero(basis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval(rule.points[q], vals);
      fe += rule.weights[q] * f(rule.points[q]) * vals;
    }
    const std::vector<int>& dofs = V.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (dofs[i] >= 0) b[dofs[i]] += fe[static_cast<Eigen::Index>(i)];
    }
  }
  return b;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& V, const VectorFn& f, int degree) {
  if (V.components != 2) throw ConfigError("assemble_load: vector load needs 2 components");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(V.size());
  Eigen::VectorXd vals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, V.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, degree);
    Eigen::MatrixXd fe = Eigen::MatrixXd::Zero(basis.dim, 2);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval(rule.points[q], vals);
      const Vec2 fq = f(rule.points[q]);
      fe.col(0) += rule.weights[q] * fq.x() * vals;
      fe.col(1) += rule.weights[q] * fq.y() * vals;
    }
    const std::vector<int>& dofs = V.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (dofs[i] < 0) continue;
      b[V.global(0, dofs[i])] += fe(static_cast<Eigen::Index>(i), 0);
      b[V.global(1, dofs[i])] += fe(static_cast<Eigen::Index>(i), 1);
    }
  }
  return b;
}

Eigen::VectorXd pressure_integrals(const Mesh& mesh, const DofMap& W) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(W.size());
  Eigen::VectorXd vals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, W.kind, c);
    const QuadratureRule rule = mesh.cell_rule(c, 2);
    Eigen::VectorXd fe = Eigen::VectorXd::Zero(basis.dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval(rule.points[q], vals);
      fe += rule.weights[q] * vals;
    }
    const std::vector<int>& dofs = W.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i) t[dofs[i]] += fe[static_cast<Eigen::Index>(i)];
  }
  return t;
}

namespace {

double accumulate_error(const Mesh& mesh, const FeFunction& uh, NormKind norm, int degree,
                        int components, const ExactScalar* es, const ExactVector* ev) {
  double total = 0.0;
  std::vector<Vec2> grads;
  std::vector<Mat2> hessians;
  Eigen::VectorXd vals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, uh.map->kind, c);
    std::vector<Eigen::VectorXd> local(static_cast<std::size_t>(components));
    for (int k = 0; k < components; ++k) local[static_cast<std::size_t>(k)] = local_coefficients(uh, c, k);
    const QuadratureRule rule = mesh.cell_rule(c, degree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& p = rule.points[q];
      double term = 0.0;
      if (norm == NormKind::L2) {
        basis.eval(p, vals);
        for (int k = 0; k < components; ++k) {
          const double vh = vals.dot(local[static_cast<std::size_t>(k)]);
          const double ve = es ? es->value(p) : ev->value(p)[k];
          term += (ve - vh) * (ve - vh);
        }
      } else if (norm == NormKind::H1Broken) {
        basis.eval_grad(p, grads);
        for (int k = 0; k < components; ++k) {
          Vec2 gh = Vec2::Zero();
          for (int i = 0; i < basis.dim; ++i) {
            gh += local[static_cast<std::size_t>(k)][i] * grads[static_cast<std::size_t>(i)];
          }
          const Vec2 ge = es ? es->grad(p) : Vec2(ev->grad(p).row(k).transpose());
          term += (ge - gh).squaredNorm();
        }
      } else {
        basis.eval_hessian(p, hessians);
        Mat2 hh = Mat2::Zero();
        for (int i = 0; i < basis.dim; ++i) hh += local[0][i] * hessians[static_cast<std::size_t>(i)];
        term = (es->hessian(p) - hh).squaredNorm();
      }
      total += rule.weights[q] * term;
    }
  }
  return std::sqrt(total);
}

} // namespace

double error_norm(const Mesh& mesh, const ExactScalar& exact, const FeFunction& uh,
                  NormKind norm, int degree) {
  if (uh.map->components != 1) throw ConfigError("error_norm: scalar exact vs vector FE function");
  return accumulate_error(mesh, uh, norm, degree, 1, &exact, nullptr);
}

double error_norm(const Mesh& mesh, const ExactVector& exact, const FeFunction& uh,
                  NormKind norm, int degree) {
  if (uh.map->components != 2) throw ConfigError("error_norm: vector exact vs scalar FE function");
  if (norm == NormKind::H2Broken) throw ConfigError("error_norm: H2 norm is for scalar fields");
  return accumulate_error(mesh, uh, norm, degree, 2, nullptr, &exact);
}

double divergence_l2(const Mesh& mesh, const FeFunction& uh) {
  double total = 0.0;
  std::vector<Vec2> grads;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, uh.map->kind, c);
    const Eigen::VectorXd lx = local_coefficients(uh, c, 0);
    const Eigen::VectorXd ly = local_coefficients(uh, c, 1);
    const QuadratureRule rule = mesh.cell_rule(c, kFormDegree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.eval_grad(rule.points[q], grads);
      double div = 0.0;
      for (int i = 0; i < basis.dim; ++i) {
        div += lx[i] * grads[static_cast<std::size_t>(i)].x() + ly[i] * grads[static_cast<std::size_t>(i)].y();
      }
      total += rule.weights[q] * div * div;
    }
  }
  return std::sqrt(total);
}

void write_matrix_market(const SpMat& matrix, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << " " << matrix.cols() << " " << matrix.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SpMat::InnerIterator it(matrix, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                    static_cast<long>(it.col() + 1), it.value());
      out << buf;
    }
  }
}

} // namespace quadfem
