#ifndef QUADFEM_MESH_HPP
#define QUADFEM_MESH_HPP

#include "quadfem/geometry.hpp"
#include "quadfem/quadrature.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quadfem {

enum class CellKind { Triangle, Quad };

/// Mesh edge.  The tangent points from the lower-indexed to the
/// higher-indexed global vertex; the normal is the tangent rotated by -90
/// degrees, so cross2(normal, tangent) = 1 on every edge.
struct MeshEdge {
  int v0 = -1;              ///< lower-indexed endpoint
  int v1 = -1;              ///< higher-indexed endpoint
  bool boundary = false;
  Vec2 tangent;             ///< unit, v0 -> v1
  Vec2 normal;              ///< unit, rot(-90) of tangent
  double length = 0.0;
  std::array<int, 2> cells = {-1, -1}; ///< incident cells (second is -1 on boundary)
};

/// Mesh cell: 3 or 4 counterclockwise vertices.  Local edge i connects local
/// vertices i and i+1 (mod nv).  edge_sign[i] is +1 when the cell traverses
/// the global edge along its stored tangent, -1 otherwise.
struct MeshCell {
  CellKind kind = CellKind::Quad;
  std::array<int, 4> v = {-1, -1, -1, -1};
  std::array<int, 4> edges = {-1, -1, -1, -1};
  std::array<int, 4> edge_sign = {0, 0, 0, 0};

  int num_vertices() const { return kind == CellKind::Quad ? 4 : 3; }
};

/// Two-dimensional conforming mesh of triangles and strictly convex
/// quadrilaterals.  Immutable after construction; all topology (edges,
/// orientations, boundary flags) is derived deterministically from the
/// vertex coordinates and the cell lists.
class Mesh {
public:
  /// Build from raw vertices and cells; validates orientation, convexity and
  /// edge-manifoldness.  Error messages name the offending cell.
  Mesh(std::vector<Vec2> vertices, std::vector<MeshCell> cells);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::vector<MeshCell>& cells() const { return cells_; }
  bool vertex_on_boundary(int v) const { return vertex_boundary_[static_cast<std::size_t>(v)]; }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const { return num_interior_edges_; }
  int num_boundary_edges() const { return num_edges() - num_interior_edges_; }
  int num_interior_vertices() const { return num_interior_vertices_; }
  int num_boundary_vertices() const { return num_vertices() - num_interior_vertices_; }
  int num_quads() const { return num_quads_; }
  int num_triangles() const { return num_cells() - num_quads_; }

  /// F - E + X; equals 1 exactly when the meshed domain is simply connected.
  int euler_characteristic() const { return num_cells() - num_edges() + num_vertices(); }
  bool simply_connected() const { return euler_characteristic() == 1; }

  /// Frame of a quad cell (throws for triangles).
  const QuadFrame& frame(int cell) const;
  std::array<Vec2, 3> triangle(int cell) const;
  Vec2 cell_vertex(int cell, int local) const {
    return vertices_[static_cast<std::size_t>(cells_[static_cast<std::size_t>(cell)].v[static_cast<std::size_t>(local)])];
  }
  double cell_area(int cell) const;
  double cell_diameter(int cell) const;
  double max_diameter() const;
  double domain_area() const;

  /// Quadrature over a cell, exact for total polynomial degree <= degree.
  QuadratureRule cell_rule(int cell, int degree, int diagonal = 0) const;
  /// Quadrature along an edge, exact for polynomial degree <= degree.
  QuadratureRule edge_quadrature(int edge, int degree) const;

  template <class F>
  double integrate_cell(int cell, F&& f, int degree) const {
    return cell_rule(cell, degree).integrate(std::forward<F>(f));
  }
  template <class F>
  double integrate_edge(int edge, F&& f, int degree) const {
    return edge_quadrature(edge, degree).integrate(std::forward<F>(f));
  }
  template <class F>
  double edge_average(int edge, F&& f, int degree) const {
    return integrate_edge(edge, std::forward<F>(f), degree) /
           edges_[static_cast<std::size_t>(edge)].length;
  }

  /// True when p lies in the (closed) cell, with a relative slack tol.
  bool point_in_cell(int cell, const Vec2& p, double tol = 1e-10) const;

private:
  std::vector<Vec2> vertices_;
  std::vector<MeshEdge> edges_;
  std::vector<MeshCell> cells_;
  std::vector<bool> vertex_boundary_;
  std::vector<std::optional<QuadFrame>> frames_;
  int num_interior_edges_ = 0;
  int num_interior_vertices_ = 0;
  int num_quads_ = 0;
};

/// n x n uniform quadrilateral grid of the unit square.
Mesh generate_structured_quads(int n);

/// n x n grid with interior vertices displaced by up to magnitude*h in each
/// coordinate (deterministic in seed).  Rejection keeps every cell strictly
/// convex with |alpha| + |beta| <= 0.8; throws PerturbationFailed when a
/// vertex cannot be placed within 100 attempts.
Mesh generate_perturbed_quads(int n, double magnitude, std::uint64_t seed);

/// Which quads of the n x n grid are split into two triangles.
enum class MixedPattern { None, Checkerboard, DiagonalHalf, All };

/// Mixed triangle/quad grid: optionally perturb (as in
/// generate_perturbed_quads), then split the selected cells along the
/// diagonal through their first vertex.
Mesh generate_mixed(int n, MixedPattern pattern, double magnitude = 0.0,
                    std::uint64_t seed = 0);

/// Plain-text mesh format:
///   mesh2d 1
///   vertices N
///   x y            (N lines)
///   cells M
///   tri i j k | quad i j k l   (M lines, counterclockwise, 0-based)
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

} // namespace quadfem

#endif
