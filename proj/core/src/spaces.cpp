#include "quadfem/spaces.hpp"

#include "quadfem/errors.hpp"

#include <cmath>

namespace quadfem {

namespace {

bool is_velocity(SpaceKind kind) { return kind == SpaceKind::Qltz || kind == SpaceKind::Qltz0; }
bool is_morley(SpaceKind kind) { return kind == SpaceKind::Morley || kind == SpaceKind::Morley0; }
bool is_pressure(SpaceKind kind) { return kind == SpaceKind::Pressure || kind == SpaceKind::Pressure0; }
bool is_constrained_kind(SpaceKind kind) {
  return kind == SpaceKind::Qltz0 || kind == SpaceKind::Morley0;
}

} // namespace

ElementKind element_kind_for(SpaceKind kind, CellKind cell) {
  if (is_velocity(kind)) {
    return cell == CellKind::Quad ? ElementKind::Qltz : ElementKind::TriP1nc;
  }
  if (is_morley(kind)) {
    return cell == CellKind::Quad ? ElementKind::QuadMorley : ElementKind::TriMorley;
  }
  return cell == CellKind::Quad ? ElementKind::PressureP1 : ElementKind::PressureP0;
}

LocalBasis local_basis(const Mesh& mesh, SpaceKind kind, int cell) {
  const MeshCell& c = mesh.cells()[static_cast<std::size_t>(cell)];
  if (c.kind == CellKind::Quad) {
    const QuadFrame& frame = mesh.frame(cell);
    if (is_velocity(kind)) return qltz_basis(frame);
    if (is_pressure(kind)) return pressure_p1_basis(frame);
    std::array<Vec2, 4> normals;
    for (int i = 0; i < 4; ++i) {
      normals[static_cast<std::size_t>(i)] = mesh.edges()[static_cast<std::size_t>(c.edges[static_cast<std::size_t>(i)])].normal;
    }
    return quad_morley_basis(frame, normals);
  }
  const auto tri = mesh.triangle(cell);
  if (is_velocity(kind)) return tri_p1nc_basis(tri);
  if (is_pressure(kind)) return pressure_p0_basis(tri);
  std::array<Vec2, 3> normals;
  for (int i = 0; i < 3; ++i) {
    normals[static_cast<std::size_t>(i)] = mesh.edges()[static_cast<std::size_t>(c.edges[static_cast<std::size_t>(i)])].normal;
  }
  return tri_morley_basis(tri, normals);
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, int components) {
  if (components < 1 || components > 2) throw ConfigError("build_dofmap: components must be 1 or 2");
  DofMap map;
  map.kind = kind;
  map.mesh = &mesh;
  map.components = components;
  map.zero_mean = (kind == SpaceKind::Pressure0);

  const bool constrained = is_constrained_kind(kind);
  int next = 0;

  map.edge_dof.assign(static_cast<std::size_t>(mesh.num_edges()), -1);
  map.vertex_dof.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  map.cell_dof.assign(static_cast<std::size_t>(mesh.num_cells()), -1);

  if (!is_pressure(kind)) {
    // Edge DOFs: function averages (velocity) or normal-derivative averages
    // (Morley); constrained on boundary edges for the 0-variants.
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (constrained && mesh.edges()[static_cast<std::size_t>(e)].boundary) {
        ++map.n_constrained;
      } else {
        map.edge_dof[static_cast<std::size_t>(e)] = next++;
      }
    }
  }
  if (is_velocity(kind)) {
    // One bubble DOF per quadrilateral cell.
    for (int c = 0; c < mesh.num_cells(); ++c) {
      if (mesh.cells()[static_cast<std::size_t>(c)].kind == CellKind::Quad) {
        map.cell_dof[static_cast<std::size_t>(c)] = next++;
      }
    }
  }
  if (is_pressure(kind)) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      map.cell_dof[static_cast<std::size_t>(c)] = next;
      next += mesh.cells()[static_cast<std::size_t>(c)].kind == CellKind::Quad ? 3 : 1;
    }
  }
  if (is_morley(kind)) {
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (constrained && mesh.vertex_on_boundary(v)) {
        ++map.n_constrained;
      } else {
        map.vertex_dof[static_cast<std::size_t>(v)] = next++;
      }
    }
  }
  map.n_scalar = next;

  map.cell_dofs.resize(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MeshCell& cell = mesh.cells()[static_cast<std::size_t>(c)];
    const int nv = cell.num_vertices();
    std::vector<int>& dofs = map.cell_dofs[static_cast<std::size_t>(c)];
    if (is_velocity(kind)) {
      if (cell.kind == CellKind::Quad) dofs.push_back(map.cell_dof[static_cast<std::size_t>(c)]);
      for (int i = 0; i < nv; ++i) dofs.push_back(map.edge_dof[static_cast<std::size_t>(cell.edges[static_cast<std::size_t>(i)])]);
    } else if (is_morley(kind)) {
      for (int i = 0; i < nv; ++i) dofs.push_back(map.vertex_dof[static_cast<std::size_t>(cell.v[static_cast<std::size_t>(i)])]);
      for (int i = 0; i < nv; ++i) dofs.push_back(map.edge_dof[static_cast<std::size_t>(cell.edges[static_cast<std::size_t>(i)])]);
    } else {
      const int start = map.cell_dof[static_cast<std::size_t>(c)];
      const int block = cell.kind == CellKind::Quad ? 3 : 1;
      for (int i = 0; i < block; ++i) dofs.push_back(start + i);
    }
  }
  return map;
}

FeFunction zero_function(const DofMap& map) {
  FeFunction f;
  f.map = &map;
  f.coef = Eigen::VectorXd::Zero(map.size());
  return f;
}

Eigen::VectorXd local_coefficients(const FeFunction& f, int cell, int component) {
  const DofMap& map = *f.map;
  const std::vector<int>& dofs = map.cell_dofs[static_cast<std::size_t>(cell)];
  Eigen::VectorXd local(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    local[static_cast<Eigen::Index>(i)] =
        dofs[i] < 0 ? 0.0 : f.coef[map.global(component, dofs[i])];
  }
  return local;
}

namespace {

void require_inside(const FeFunction& f, int cell, const Vec2& p) {
  if (!f.map->mesh->point_in_cell(cell, p)) {
    throw PointOutsideCell("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                           ") is outside cell " + std::to_string(cell));
  }
}

double local_value(const LocalBasis& basis, const Eigen::VectorXd& local, const Vec2& p) {
  Eigen::VectorXd values;
  basis.eval(p, values);
  return values.dot(local);
}

Vec2 local_grad(const LocalBasis& basis, const Eigen::VectorXd& local, const Vec2& p) {
  std::vector<Vec2> grads;
  basis.eval_grad(p, grads);
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < basis.dim; ++i) g += local[i] * grads[static_cast<std::size_t>(i)];
  return g;
}

} // namespace

double fe_value(const FeFunction& f, int cell, const Vec2& p, int component) {
  require_inside(f, cell, p);
  const LocalBasis basis = local_basis(*f.map->mesh, f.map->kind, cell);
  return local_value(basis, local_coefficients(f, cell, component), p);
}

Vec2 fe_broken_grad(const FeFunction& f, int cell, const Vec2& p, int component) {
  require_inside(f, cell, p);
  const LocalBasis basis = local_basis(*f.map->mesh, f.map->kind, cell);
  return local_grad(basis, local_coefficients(f, cell, component), p);
}

Mat2 fe_broken_hessian(const FeFunction& f, int cell, const Vec2& p, int component) {
  require_inside(f, cell, p);
  const LocalBasis basis = local_basis(*f.map->mesh, f.map->kind, cell);
  const Eigen::VectorXd local = local_coefficients(f, cell, component);
  std::vector<Mat2> hessians;
  basis.eval_hessian(p, hessians);
  Mat2 h = Mat2::Zero();
  for (int i = 0; i < basis.dim; ++i) h += local[i] * hessians[static_cast<std::size_t>(i)];
  return h;
}

Vec2 fe_vector_value(const FeFunction& f, int cell, const Vec2& p) {
  require_inside(f, cell, p);
  const LocalBasis basis = local_basis(*f.map->mesh, f.map->kind, cell);
  return Vec2(local_value(basis, local_coefficients(f, cell, 0), p),
              local_value(basis, local_coefficients(f, cell, 1), p));
}

Mat2 fe_vector_grad(const FeFunction& f, int cell, const Vec2& p) {
  require_inside(f, cell, p);
  const LocalBasis basis = local_basis(*f.map->mesh, f.map->kind, cell);
  Mat2 jac;
  jac.row(0) = local_grad(basis, local_coefficients(f, cell, 0), p).transpose();
  jac.row(1) = local_grad(basis, local_coefficients(f, cell, 1), p).transpose();
  return jac;
}

double fe_broken_div(const FeFunction& f, int cell, const Vec2& p) {
  const Mat2 jac = fe_vector_grad(f, cell, p);
  return jac(0, 0) + jac(1, 1);
}

double fe_broken_curl(const FeFunction& f, int cell, const Vec2& p) {
  const Mat2 jac = fe_vector_grad(f, cell, p);
  return jac(1, 0) - jac(0, 1);
}

namespace {

void require_kind(const DofMap& map, bool ok, const char* what) {
  (void)map;
  if (!ok) throw ConfigError(what);
}

} // namespace

FeFunction interpolate_qltz_scalar(const Mesh& mesh, const DofMap& map, const ScalarFn& w,
                                   int degree) {
  require_kind(map, is_velocity(map.kind) && map.components == 1,
               "interpolate_qltz_scalar: needs a scalar velocity-space map");
  FeFunction f = zero_function(map);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int dof = map.edge_dof[static_cast<std::size_t>(e)];
    if (dof >= 0) f.coef[dof] = mesh.edge_average(e, w, degree);
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int dof = map.cell_dof[static_cast<std::size_t>(c)];
    if (dof >= 0) f.coef[dof] = mesh.integrate_cell(c, w, degree) / mesh.cell_area(c);
  }
  return f;
}

FeFunction interpolate_qltz_vector(const Mesh& mesh, const DofMap& map, const VectorFn& w,
                                   const ScalarFn& div_w, int degree) {
  require_kind(map, is_velocity(map.kind) && map.components == 2,
               "interpolate_qltz_vector: needs a two-component velocity map");
  FeFunction f = zero_function(map);

  // Step 1: componentwise edge averages.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int dof = map.edge_dof[static_cast<std::size_t>(e)];
    if (dof < 0) continue;
    const Vec2 avg = mesh.edge_quadrature(e, degree).integrate([&](const Vec2& p) { return w(p); }) /
                     mesh.edges()[static_cast<std::size_t>(e)].length;
    f.coef[map.global(0, dof)] = avg.x();
    f.coef[map.global(1, dof)] = avg.y();
  }

  // Step 2: on each quad, pick the bubble coefficients so all P1 divergence
  // moments of w are preserved.  The q = 1 moment already matches through
  // the edge averages; q in {xi, eta} gives a 2x2 system with the step-2
  // matrix.
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MeshCell& cell = mesh.cells()[static_cast<std::size_t>(c)];
    if (cell.kind != CellKind::Quad) continue;
    const QuadFrame& frame = mesh.frame(c);
    const LocalBasis basis = qltz_basis(frame);

    std::array<Vec2, 4> edge_avg;
    for (int i = 0; i < 4; ++i) {
      const int e = cell.edges[static_cast<std::size_t>(i)];
      edge_avg[static_cast<std::size_t>(i)] =
          mesh.edge_quadrature(e, degree).integrate([&](const Vec2& p) { return w(p); }) /
          mesh.edges()[static_cast<std::size_t>(e)].length;
    }

    Vec2 rhs = Vec2::Zero(); // moments against xi and eta
    const QuadratureRule exact = mesh.cell_rule(c, 4);
    std::vector<Vec2> grads;
    for (std::size_t q = 0; q < exact.points.size(); ++q) {
      basis.eval_grad(exact.points[q], grads);
      double div_w1 = 0.0; // divergence of the step-1 field
      for (int i = 0; i < 4; ++i) {
        div_w1 += edge_avg[static_cast<std::size_t>(i)].x() * grads[static_cast<std::size_t>(i) + 1].x() +
                  edge_avg[static_cast<std::size_t>(i)].y() * grads[static_cast<std::size_t>(i) + 1].y();
      }
      const auto [xi, eta] = xi_eta(frame, exact.points[q]);
      rhs.x() -= exact.weights[q] * div_w1 * xi;
      rhs.y() -= exact.weights[q] * div_w1 * eta;
    }
    const QuadratureRule over = mesh.cell_rule(c, degree);
    for (std::size_t q = 0; q < over.points.size(); ++q) {
      const auto [xi, eta] = xi_eta(frame, over.points[q]);
      const double dw = div_w(over.points[q]);
      rhs.x() += over.weights[q] * dw * xi;
      rhs.y() += over.weights[q] * dw * eta;
    }

    const Mat2 m = step2_matrix(frame);
    const Vec2 bubble = m.fullPivLu().solve(rhs);
    const int dof = map.cell_dof[static_cast<std::size_t>(c)];
    f.coef[map.global(0, dof)] = bubble.x();
    f.coef[map.global(1, dof)] = bubble.y();
  }
  return f;
}

FeFunction interpolate_morley(const Mesh& mesh, const DofMap& map, const ScalarFn& phi,
                              const VectorFn& grad_phi, int degree) {
  require_kind(map, is_morley(map.kind) && map.components == 1,
               "interpolate_morley: needs a Morley-space map");
  FeFunction f = zero_function(map);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const int dof = map.vertex_dof[static_cast<std::size_t>(v)];
    if (dof >= 0) f.coef[dof] = phi(mesh.vertices()[static_cast<std::size_t>(v)]);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int dof = map.edge_dof[static_cast<std::size_t>(e)];
    if (dof < 0) continue;
    const Vec2 n = mesh.edges()[static_cast<std::size_t>(e)].normal;
    f.coef[dof] = mesh.edge_average(e, [&](const Vec2& p) { return n.dot(grad_phi(p)); }, degree);
  }
  return f;
}

FeFunction l2_project_pressure(const Mesh& mesh, const DofMap& map, const ScalarFn& q,
                               int degree) {
  require_kind(map, is_pressure(map.kind) && map.components == 1,
               "l2_project_pressure: needs a pressure map");
  FeFunction f = zero_function(map);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MeshCell& cell = mesh.cells()[static_cast<std::size_t>(c)];
    const int start = map.cell_dof[static_cast<std::size_t>(c)];
    if (cell.kind == CellKind::Triangle) {
      f.coef[start] = mesh.integrate_cell(c, q, degree) / mesh.cell_area(c);
      continue;
    }
    const LocalBasis basis = pressure_p1_basis(mesh.frame(c));
    Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    const QuadratureRule exact = mesh.cell_rule(c, 4);
    Eigen::VectorXd values;
    for (std::size_t k = 0; k < exact.points.size(); ++k) {
      basis.eval(exact.points[k], values);
      gram += exact.weights[k] * values * values.transpose();
    }
    const QuadratureRule over = mesh.cell_rule(c, degree);
    for (std::size_t k = 0; k < over.points.size(); ++k) {
      basis.eval(over.points[k], values);
      rhs += over.weights[k] * q(over.points[k]) * values;
    }
    f.coef.segment<3>(start) = gram.ldlt().solve(rhs);
  }
  if (map.zero_mean) {
    const double mean = pressure_mean(mesh, f) ;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      f.coef[map.cell_dof[static_cast<std::size_t>(c)]] -= mean;
    }
  }
  return f;
}

Eigen::VectorXd pressure_constant_coefficients(const Mesh& mesh, const DofMap& map) {
  require_kind(map, is_pressure(map.kind), "pressure_constant_coefficients: needs a pressure map");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(map.size());
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    c[map.cell_dof[static_cast<std::size_t>(cell)]] = 1.0;
  }
  return c;
}

double pressure_mean(const Mesh& mesh, const FeFunction& p) {
  double integral = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis = local_basis(mesh, p.map->kind, c);
    const Eigen::VectorXd local = local_coefficients(p, c);
    integral += mesh.integrate_cell(c, [&](const Vec2& x) {
      Eigen::VectorXd values;
      basis.eval(x, values);
      return values.dot(local);
    }, 2);
  }
  return integral / mesh.domain_area();
}

} // namespace quadfem
