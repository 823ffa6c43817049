#include "quadfem/elements.hpp"

#include "quadfem/errors.hpp"
#include "quadfem/quadrature.hpp"

#include <cmath>

namespace quadfem {

int element_dimension(ElementKind kind) {
  switch (kind) {
    case ElementKind::Qltz: return 5;
    case ElementKind::QuadMorley: return 8;
    case ElementKind::TriP1nc: return 3;
    case ElementKind::TriMorley: return 6;
    case ElementKind::PressureP1: return 3;
    case ElementKind::PressureP0: return 1;
  }
  return 0;
}

namespace {

double ipow(double x, int n) {
  double y = 1.0;
  for (int i = 0; i < n; ++i) y *= x;
  return y;
}

const std::vector<std::array<int, 2>>& monomials_for(ElementKind kind) {
  static const std::vector<std::array<int, 2>> qltz = {
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}};
  static const std::vector<std::array<int, 2>> p3_plus = {
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {0, 3}};
  static const std::vector<std::array<int, 2>> p1 = {{0, 0}, {1, 0}, {0, 1}};
  static const std::vector<std::array<int, 2>> p2 = {
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  static const std::vector<std::array<int, 2>> p0 = {{0, 0}};
  switch (kind) {
    case ElementKind::Qltz: return qltz;
    case ElementKind::QuadMorley: return p3_plus;
    case ElementKind::TriP1nc: return p1;
    case ElementKind::TriMorley: return p2;
    case ElementKind::PressureP1: return p1;
    case ElementKind::PressureP0: return p0;
  }
  return p0;
}

void set_quad_chart(LocalBasis& basis, const QuadFrame& frame) {
  basis.grad_u = frame.grad_xi;
  basis.grad_v = frame.grad_eta;
  basis.off_u = -frame.grad_xi.dot(frame.origin);
  basis.off_v = -frame.grad_eta.dot(frame.origin);
}

/// Chart (u, v) = (lambda_1, lambda_2): barycentric coordinates of the
/// second and third vertex, so lambda_0 = 1 - u - v.
void set_tri_chart(LocalBasis& basis, const std::array<Vec2, 3>& v) {
  const double det = 2.0 * triangle_signed_area(v[0], v[1], v[2]);
  const Vec2 e1 = v[1] - v[0];
  const Vec2 e2 = v[2] - v[0];
  basis.grad_u = Vec2(e2.y(), -e2.x()) / det;
  basis.grad_v = Vec2(-e1.y(), e1.x()) / det;
  basis.off_u = -basis.grad_u.dot(v[0]);
  basis.off_v = -basis.grad_v.dot(v[0]);
}

/// DOF values of one local-chart monomial: vertex evaluations followed by
/// edge averages of the directional derivative along the given normals.
Eigen::VectorXd morley_dofs_of_monomial(const LocalBasis& chart,
                                        const std::vector<Vec2>& vertices,
                                        const std::vector<Vec2>& normals,
                                        std::array<int, 2> mono) {
  const int nv = static_cast<int>(vertices.size());
  Eigen::VectorXd dofs(2 * nv);
  auto value = [&](const Vec2& p) {
    const auto [u, v] = chart.local_coords(p);
    return ipow(u, mono[0]) * ipow(v, mono[1]);
  };
  auto normal_derivative = [&](const Vec2& p, const Vec2& n) {
    const auto [u, v] = chart.local_coords(p);
    const double du = mono[0] > 0 ? mono[0] * ipow(u, mono[0] - 1) * ipow(v, mono[1]) : 0.0;
    const double dv = mono[1] > 0 ? mono[1] * ipow(u, mono[0]) * ipow(v, mono[1] - 1) : 0.0;
    return du * chart.grad_u.dot(n) + dv * chart.grad_v.dot(n);
  };
  for (int i = 0; i < nv; ++i) dofs[i] = value(vertices[static_cast<std::size_t>(i)]);
  for (int i = 0; i < nv; ++i) {
    const Vec2& a = vertices[static_cast<std::size_t>(i)];
    const Vec2& b = vertices[static_cast<std::size_t>((i + 1) % nv)];
    const Vec2& n = normals[static_cast<std::size_t>(i)];
    dofs[nv + i] = segment_average(a, b, [&](const Vec2& p) { return normal_derivative(p, n); }, 4);
  }
  return dofs;
}

/// Invert the DOF-on-monomial matrix to obtain the dual basis coefficients.
void build_dual_basis(LocalBasis& basis, const std::vector<Vec2>& vertices,
                      const std::vector<Vec2>& normals) {
  const int n = basis.dim;
  Eigen::MatrixXd dof_matrix(n, n); // (i, m): DOF_i applied to monomial m
  for (int m = 0; m < n; ++m) {
    dof_matrix.col(m) = morley_dofs_of_monomial(basis, vertices, normals,
                                                basis.monomials[static_cast<std::size_t>(m)]);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dof_matrix);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  if (!(cond < 1e12)) {
    throw IllConditioned("Morley DOF matrix condition " + std::to_string(cond));
  }
  // Row j of coef solves sum_m coef(j, m) * DOF_i(mono_m) = delta_ij.
  basis.coef = dof_matrix.transpose().fullPivLu().solve(
      Eigen::MatrixXd::Identity(n, n)).transpose();
}

} // namespace

void LocalBasis::eval(const Vec2& p, Eigen::VectorXd& values) const {
  const auto [u, v] = local_coords(p);
  Eigen::VectorXd mono(static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    mono[static_cast<Eigen::Index>(m)] = ipow(u, monomials[m][0]) * ipow(v, monomials[m][1]);
  }
  values = coef * mono;
}

void LocalBasis::eval_grad(const Vec2& p, std::vector<Vec2>& grads) const {
  const auto [u, v] = local_coords(p);
  Eigen::VectorXd du(static_cast<Eigen::Index>(monomials.size()));
  Eigen::VectorXd dv(static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    const auto [i, j] = monomials[m];
    du[static_cast<Eigen::Index>(m)] = i > 0 ? i * ipow(u, i - 1) * ipow(v, j) : 0.0;
    dv[static_cast<Eigen::Index>(m)] = j > 0 ? j * ipow(u, i) * ipow(v, j - 1) : 0.0;
  }
  const Eigen::VectorXd cu = coef * du;
  const Eigen::VectorXd cv = coef * dv;
  grads.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) grads[static_cast<std::size_t>(k)] = cu[k] * grad_u + cv[k] * grad_v;
}

void LocalBasis::eval_hessian(const Vec2& p, std::vector<Mat2>& hessians) const {
  const auto [u, v] = local_coords(p);
  Eigen::VectorXd duu(static_cast<Eigen::Index>(monomials.size()));
  Eigen::VectorXd duv(static_cast<Eigen::Index>(monomials.size()));
  Eigen::VectorXd dvv(static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    const auto [i, j] = monomials[m];
    duu[static_cast<Eigen::Index>(m)] = i > 1 ? i * (i - 1) * ipow(u, i - 2) * ipow(v, j) : 0.0;
    duv[static_cast<Eigen::Index>(m)] = (i > 0 && j > 0) ? i * j * ipow(u, i - 1) * ipow(v, j - 1) : 0.0;
    dvv[static_cast<Eigen::Index>(m)] = j > 1 ? j * (j - 1) * ipow(u, i) * ipow(v, j - 2) : 0.0;
  }
  const Eigen::VectorXd cuu = coef * duu;
  const Eigen::VectorXd cuv = coef * duv;
  const Eigen::VectorXd cvv = coef * dvv;
  const Mat2 guu = grad_u * grad_u.transpose();
  const Mat2 guv = grad_u * grad_v.transpose() + grad_v * grad_u.transpose();
  const Mat2 gvv = grad_v * grad_v.transpose();
  hessians.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    hessians[static_cast<std::size_t>(k)] = cuu[k] * guu + cuv[k] * guv + cvv[k] * gvv;
  }
}

LocalBasis qltz_basis(const QuadFrame& frame) {
  LocalBasis basis;
  basis.kind = ElementKind::Qltz;
  basis.dim = 5;
  basis.monomials = monomials_for(ElementKind::Qltz);
  set_quad_chart(basis, frame);

  const double a = frame.alpha;
  const double b = frame.beta;
  basis.coef.setZero(5, 5);

  // phi_0 = -3(3 xi^2 + 3 eta^2 - 2 a xi - 2 b eta - (4 + a^2 + b^2)) / (2 a^2 + 2 b^2 + 6)
  const double den = 2.0 * (a * a + b * b + 3.0);
  Eigen::RowVectorXd phi0(5);
  phi0 << 3.0 * (4.0 + a * a + b * b) / den, 6.0 * a / den, 6.0 * b / den,
      -9.0 / den, -9.0 / den;
  basis.coef.row(0) = phi0;

  // phi_i = quadratic part + c_i * phi_0, with the edge index pairing
  // (e1, e3) <-> xi^2 rows and (e2, e4) <-> eta^2 rows.
  auto xi_row = [&](double sign) {
    // -(3/4) xi^2 + ((b + sign)/2) eta + (3 + b^2)/4 - ((b^2 + sign*b + 3)/6) phi_0
    Eigen::RowVectorXd row(5);
    row << (3.0 + b * b) / 4.0, 0.0, (b + sign) / 2.0, -0.75, 0.0;
    return (row - ((b * b + sign * b + 3.0) / 6.0) * phi0).eval();
  };
  auto eta_row = [&](double sign) {
    Eigen::RowVectorXd row(5);
    row << (3.0 + a * a) / 4.0, (a + sign) / 2.0, 0.0, 0.0, -0.75;
    return (row - ((a * a + sign * a + 3.0) / 6.0) * phi0).eval();
  };
  basis.coef.row(1) = xi_row(-1.0);  // edge e1
  basis.coef.row(2) = eta_row(-1.0); // edge e2
  basis.coef.row(3) = xi_row(1.0);   // edge e3
  basis.coef.row(4) = eta_row(1.0);  // edge e4
  return basis;
}

void qltz_eval(const QuadFrame& frame, const Vec2& p,
               std::array<double, 5>& values, std::array<Vec2, 5>& gradients) {
  const LocalBasis basis = qltz_basis(frame);
  Eigen::VectorXd vals;
  std::vector<Vec2> grads;
  basis.eval(p, vals);
  basis.eval_grad(p, grads);
  for (int i = 0; i < 5; ++i) {
    values[static_cast<std::size_t>(i)] = vals[i];
    gradients[static_cast<std::size_t>(i)] = grads[static_cast<std::size_t>(i)];
  }
}

std::array<Vec2, 4> outward_normals_quad(const QuadFrame& frame) {
  std::array<Vec2, 4> normals;
  for (int i = 0; i < 4; ++i) {
    const Vec2 t = frame.vertex[static_cast<std::size_t>((i + 1) % 4)] - frame.vertex[static_cast<std::size_t>(i)];
    normals[static_cast<std::size_t>(i)] = Vec2(t.y(), -t.x()).normalized();
  }
  return normals;
}

std::array<Vec2, 3> outward_normals_tri(const std::array<Vec2, 3>& v) {
  std::array<Vec2, 3> normals;
  for (int i = 0; i < 3; ++i) {
    const Vec2 t = v[static_cast<std::size_t>((i + 1) % 3)] - v[static_cast<std::size_t>(i)];
    normals[static_cast<std::size_t>(i)] = Vec2(t.y(), -t.x()).normalized();
  }
  return normals;
}

LocalBasis quad_morley_basis(const QuadFrame& frame,
                             const std::array<Vec2, 4>& edge_normals) {
  LocalBasis basis;
  basis.kind = ElementKind::QuadMorley;
  basis.dim = 8;
  basis.monomials = monomials_for(ElementKind::QuadMorley);
  set_quad_chart(basis, frame);
  build_dual_basis(basis, {frame.vertex.begin(), frame.vertex.end()},
                   {edge_normals.begin(), edge_normals.end()});
  return basis;
}

LocalBasis quad_morley_basis(const QuadFrame& frame) {
  return quad_morley_basis(frame, outward_normals_quad(frame));
}

LocalBasis tri_p1nc_basis(const std::array<Vec2, 3>& vertices) {
  if (triangle_signed_area(vertices[0], vertices[1], vertices[2]) <=
      kAreaEps * std::max((vertices[1] - vertices[0]).squaredNorm(),
                          (vertices[2] - vertices[0]).squaredNorm())) {
    throw Degenerate("tri_p1nc_basis: degenerate triangle");
  }
  LocalBasis basis;
  basis.kind = ElementKind::TriP1nc;
  basis.dim = 3;
  basis.monomials = monomials_for(ElementKind::TriP1nc);
  set_tri_chart(basis, vertices);
  // phi_i = 1 - 2 lambda_{i+2}, opposite the edge from vertex i to i+1;
  // lambda_0 = 1 - u - v, lambda_1 = u, lambda_2 = v.
  basis.coef.resize(3, 3);
  basis.coef.row(0) << 1.0, 0.0, -2.0;  // 1 - 2 lambda_2
  basis.coef.row(1) << -1.0, 2.0, 2.0;  // 1 - 2 lambda_0
  basis.coef.row(2) << 1.0, -2.0, 0.0;  // 1 - 2 lambda_1
  return basis;
}

LocalBasis tri_morley_basis(const std::array<Vec2, 3>& vertices,
                            const std::array<Vec2, 3>& edge_normals) {
  if (triangle_signed_area(vertices[0], vertices[1], vertices[2]) <=
      kAreaEps * std::max((vertices[1] - vertices[0]).squaredNorm(),
                          (vertices[2] - vertices[0]).squaredNorm())) {
    throw Degenerate("tri_morley_basis: degenerate triangle");
  }
  LocalBasis basis;
  basis.kind = ElementKind::TriMorley;
  basis.dim = 6;
  basis.monomials = monomials_for(ElementKind::TriMorley);
  set_tri_chart(basis, vertices);
  build_dual_basis(basis, {vertices.begin(), vertices.end()},
                   {edge_normals.begin(), edge_normals.end()});
  return basis;
}

LocalBasis tri_morley_basis(const std::array<Vec2, 3>& vertices) {
  return tri_morley_basis(vertices, outward_normals_tri(vertices));
}

LocalBasis pressure_p1_basis(const QuadFrame& frame) {
  LocalBasis basis;
  basis.kind = ElementKind::PressureP1;
  basis.dim = 3;
  basis.monomials = monomials_for(ElementKind::PressureP1);
  set_quad_chart(basis, frame);
  basis.coef = Eigen::MatrixXd::Identity(3, 3);
  return basis;
}

LocalBasis pressure_p0_basis(const std::array<Vec2, 3>& vertices) {
  LocalBasis basis;
  basis.kind = ElementKind::PressureP0;
  basis.dim = 1;
  basis.monomials = monomials_for(ElementKind::PressureP0);
  set_tri_chart(basis, vertices);
  basis.coef = Eigen::MatrixXd::Identity(1, 1);
  return basis;
}

Mat2 step2_matrix(const QuadFrame& frame) {
  const LocalBasis basis = qltz_basis(frame);
  const QuadratureRule rule = quad_cell_rule(frame, 4);
  Mat2 m = Mat2::Zero();
  std::vector<Vec2> grads;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    basis.eval_grad(rule.points[q], grads);
    const auto [xi, eta] = xi_eta(frame, rule.points[q]);
    const Vec2 g = grads[0]; // phi_0
    m(0, 0) += rule.weights[q] * g.x() * xi;
    m(0, 1) += rule.weights[q] * g.y() * xi;
    m(1, 0) += rule.weights[q] * g.x() * eta;
    m(1, 1) += rule.weights[q] * g.y() * eta;
  }
  if (step2_determinant(m) <= 0.0) {
    throw SingularStep2("step2_matrix: nonpositive determinant on a convex cell");
  }
  return m;
}

double step2_determinant(const Mat2& m) { return m.determinant(); }

} // namespace quadfem
