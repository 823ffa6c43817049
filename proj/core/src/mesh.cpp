#include "quadfem/mesh.hpp"

#include "quadfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace quadfem {

namespace {

MeshCell make_tri(int a, int b, int c) {
  MeshCell cell;
  cell.kind = CellKind::Triangle;
  cell.v = {a, b, c, -1};
  return cell;
}

MeshCell make_quad(int a, int b, int c, int d) {
  MeshCell cell;
  cell.kind = CellKind::Quad;
  cell.v = {a, b, c, d};
  return cell;
}

} // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<MeshCell> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();

  // Validate cells and cache quad frames.
  frames_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    MeshCell& cell = cells_[c];
    const int n = cell.num_vertices();
    for (int i = 0; i < n; ++i) {
      if (cell.v[static_cast<std::size_t>(i)] < 0 || cell.v[static_cast<std::size_t>(i)] >= nv) {
        std::ostringstream msg;
        msg << "cell " << c << ": vertex index out of range";
        throw TopologyError(msg.str());
      }
    }
    if (cell.kind == CellKind::Quad) {
      std::array<Vec2, 4> pts;
      for (int i = 0; i < 4; ++i) pts[static_cast<std::size_t>(i)] = vertices_[static_cast<std::size_t>(cell.v[static_cast<std::size_t>(i)])];
      try {
        frames_[c] = quad_frame(pts);
      } catch (const BadOrientation& e) {
        throw BadOrientation("cell " + std::to_string(c) + ": " + e.what());
      } catch (const NonConvex& e) {
        throw NonConvex("cell " + std::to_string(c) + ": " + e.what());
      } catch (const Degenerate& e) {
        throw Degenerate("cell " + std::to_string(c) + ": " + e.what());
      }
      ++num_quads_;
    } else {
      const Vec2 a = vertices_[static_cast<std::size_t>(cell.v[0])];
      const Vec2 b = vertices_[static_cast<std::size_t>(cell.v[1])];
      const Vec2 d = vertices_[static_cast<std::size_t>(cell.v[2])];
      const double area = triangle_signed_area(a, b, d);
      const double scale = std::max((b - a).squaredNorm(), (d - a).squaredNorm());
      if (std::abs(area) <= kAreaEps * scale) {
        throw Degenerate("cell " + std::to_string(c) + ": degenerate triangle");
      }
      if (area < 0.0) {
        throw BadOrientation("cell " + std::to_string(c) + ": triangle vertices are clockwise");
      }
    }
  }

  // Deterministic edge numbering: lexicographic by (min vertex, max vertex).
  std::map<std::pair<int, int>, int> edge_id;
  for (const MeshCell& cell : cells_) {
    const int n = cell.num_vertices();
    for (int i = 0; i < n; ++i) {
      const int a = cell.v[static_cast<std::size_t>(i)];
      const int b = cell.v[static_cast<std::size_t>((i + 1) % n)];
      edge_id.emplace(std::minmax(a, b), -1);
    }
  }
  edges_.reserve(edge_id.size());
  for (auto& [key, id] : edge_id) {
    id = static_cast<int>(edges_.size());
    MeshEdge e;
    e.v0 = key.first;
    e.v1 = key.second;
    const Vec2 t = vertices_[static_cast<std::size_t>(e.v1)] - vertices_[static_cast<std::size_t>(e.v0)];
    e.length = t.norm();
    if (e.length == 0.0) throw Degenerate("edge with coincident endpoints");
    e.tangent = t / e.length;
    e.normal = Vec2(e.tangent.y(), -e.tangent.x());
    edges_.push_back(e);
  }

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    MeshCell& cell = cells_[c];
    const int n = cell.num_vertices();
    for (int i = 0; i < n; ++i) {
      const int a = cell.v[static_cast<std::size_t>(i)];
      const int b = cell.v[static_cast<std::size_t>((i + 1) % n)];
      const int id = edge_id.at(std::minmax(a, b));
      cell.edges[static_cast<std::size_t>(i)] = id;
      cell.edge_sign[static_cast<std::size_t>(i)] = (a < b) ? 1 : -1;
      MeshEdge& e = edges_[static_cast<std::size_t>(id)];
      if (e.cells[0] < 0) {
        e.cells[0] = static_cast<int>(c);
      } else if (e.cells[1] < 0) {
        e.cells[1] = static_cast<int>(c);
      } else {
        std::ostringstream msg;
        msg << "edge (" << e.v0 << "," << e.v1 << ") is shared by more than two cells";
        throw TopologyError(msg.str());
      }
    }
  }

  vertex_boundary_.assign(static_cast<std::size_t>(nv), false);
  for (MeshEdge& e : edges_) {
    e.boundary = (e.cells[1] < 0);
    if (e.boundary) {
      vertex_boundary_[static_cast<std::size_t>(e.v0)] = true;
      vertex_boundary_[static_cast<std::size_t>(e.v1)] = true;
    } else {
      ++num_interior_edges_;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!vertex_boundary_[static_cast<std::size_t>(v)]) ++num_interior_vertices_;
  }
}

const QuadFrame& Mesh::frame(int cell) const {
  const auto& f = frames_[static_cast<std::size_t>(cell)];
  if (!f) throw TopologyError("cell " + std::to_string(cell) + " is not a quadrilateral");
  return *f;
}

std::array<Vec2, 3> Mesh::triangle(int cell) const {
  const MeshCell& c = cells_[static_cast<std::size_t>(cell)];
  if (c.kind != CellKind::Triangle) {
    throw TopologyError("cell " + std::to_string(cell) + " is not a triangle");
  }
  return {vertices_[static_cast<std::size_t>(c.v[0])], vertices_[static_cast<std::size_t>(c.v[1])],
          vertices_[static_cast<std::size_t>(c.v[2])]};
}

double Mesh::cell_area(int cell) const {
  const MeshCell& c = cells_[static_cast<std::size_t>(cell)];
  if (c.kind == CellKind::Quad) return frame(cell).area();
  const auto t = triangle(cell);
  return triangle_signed_area(t[0], t[1], t[2]);
}

double Mesh::cell_diameter(int cell) const {
  const MeshCell& c = cells_[static_cast<std::size_t>(cell)];
  if (c.kind == CellKind::Quad) return frame(cell).diameter();
  const auto t = triangle(cell);
  return std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

double Mesh::domain_area() const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) a += cell_area(c);
  return a;
}

QuadratureRule Mesh::cell_rule(int cell, int degree, int diagonal) const {
  const MeshCell& c = cells_[static_cast<std::size_t>(cell)];
  if (c.kind == CellKind::Quad) return quad_cell_rule(frame(cell), degree, diagonal);
  const auto t = triangle(cell);
  return triangle_rule(t[0], t[1], t[2], degree);
}

QuadratureRule Mesh::edge_quadrature(int edge, int degree) const {
  const MeshEdge& e = edges_[static_cast<std::size_t>(edge)];
  return edge_rule(vertices_[static_cast<std::size_t>(e.v0)], vertices_[static_cast<std::size_t>(e.v1)], degree);
}

bool Mesh::point_in_cell(int cell, const Vec2& p, double tol) const {
  const MeshCell& c = cells_[static_cast<std::size_t>(cell)];
  const int n = c.num_vertices();
  const double slack = tol * cell_diameter(cell) * cell_diameter(cell);
  for (int i = 0; i < n; ++i) {
    const Vec2 a = vertices_[static_cast<std::size_t>(c.v[static_cast<std::size_t>(i)])];
    const Vec2 b = vertices_[static_cast<std::size_t>(c.v[static_cast<std::size_t>((i + 1) % n)])];
    if (cross2(b - a, p - a) < -slack) return false;
  }
  return true;
}

Mesh generate_structured_quads(int n) {
  if (n < 1) throw ConfigError("generate_structured_quads: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<MeshCell> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back(make_quad(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)));
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

namespace {

/// Perturb interior vertices of the n x n grid in place.  Every incident
/// quad must stay strictly convex with |alpha| + |beta| <= 0.8.
void perturb_grid_vertices(int n, double magnitude, std::uint64_t seed,
                           std::vector<Vec2>& vertices) {
  if (magnitude < 0.0 || magnitude > 0.3) {
    throw ConfigError("perturbation magnitude must lie in [0, 0.3]");
  }
  if (magnitude == 0.0) return;

  const double h = 1.0 / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  auto cell_ok = [&](int ci, int cj) {
    const std::array<Vec2, 4> pts = {
        vertices[static_cast<std::size_t>(vid(ci, cj))], vertices[static_cast<std::size_t>(vid(ci + 1, cj))],
        vertices[static_cast<std::size_t>(vid(ci + 1, cj + 1))], vertices[static_cast<std::size_t>(vid(ci, cj + 1))]};
    try {
      const QuadFrame f = quad_frame(pts);
      return std::abs(f.alpha) + std::abs(f.beta) <= 0.8;
    } catch (const Error&) {
      return false;
    }
  };

  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const Vec2 base = vertices[static_cast<std::size_t>(vid(i, j))];
      bool placed = false;
      for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
        const Vec2 shift(magnitude * h * unit(rng), magnitude * h * unit(rng));
        vertices[static_cast<std::size_t>(vid(i, j))] = base + shift;
        placed = cell_ok(i - 1, j - 1) && cell_ok(i, j - 1) && cell_ok(i - 1, j) && cell_ok(i, j);
      }
      if (!placed) {
        std::ostringstream msg;
        msg << "could not perturb vertex (" << i << "," << j << ") within 100 attempts";
        throw PerturbationFailed(msg.str());
      }
    }
  }
}

} // namespace

Mesh generate_perturbed_quads(int n, double magnitude, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generate_perturbed_quads: n must be >= 1");
  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  perturb_grid_vertices(n, magnitude, seed, vertices);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<MeshCell> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back(make_quad(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)));
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh generate_mixed(int n, MixedPattern pattern, double magnitude, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generate_mixed: n must be >= 1");
  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  perturb_grid_vertices(n, magnitude, seed, vertices);

  auto split = [&](int i, int j) {
    switch (pattern) {
      case MixedPattern::None: return false;
      case MixedPattern::Checkerboard: return (i + j) % 2 == 0;
      case MixedPattern::DiagonalHalf: return i + j < n;
      case MixedPattern::All: return true;
    }
    return false;
  };

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<MeshCell> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (split(i, j)) {
        cells.push_back(make_tri(a, b, c));
        cells.push_back(make_tri(a, c, d));
      } else {
        cells.push_back(make_quad(a, b, c, d));
      }
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

namespace {

std::string next_content_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return line;
  }
  throw ParseError("unexpected end of mesh file at line " + std::to_string(lineno));
}

} // namespace

Mesh read_mesh(std::istream& in) {
  int lineno = 0;
  auto fail = [&lineno](const std::string& what) {
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
  };

  {
    std::istringstream header(next_content_line(in, lineno));
    std::string tag;
    int version = 0;
    header >> tag >> version;
    if (tag != "mesh2d" || version != 1) fail("expected header 'mesh2d 1'");
  }

  int nv = 0;
  {
    std::istringstream ls(next_content_line(in, lineno));
    std::string tag;
    ls >> tag >> nv;
    if (tag != "vertices" || nv < 0 || ls.fail()) fail("expected 'vertices N'");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    std::istringstream ls(next_content_line(in, lineno));
    double x = 0.0, y = 0.0;
    ls >> x >> y;
    if (ls.fail()) fail("expected vertex 'x y'");
    vertices.emplace_back(x, y);
  }

  int nc = 0;
  {
    std::istringstream ls(next_content_line(in, lineno));
    std::string tag;
    ls >> tag >> nc;
    if (tag != "cells" || nc < 0 || ls.fail()) fail("expected 'cells M'");
  }
  std::vector<MeshCell> cells;
  cells.reserve(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    std::istringstream ls(next_content_line(in, lineno));
    std::string kind;
    ls >> kind;
    if (kind == "tri") {
      int a = 0, b = 0, d = 0;
      ls >> a >> b >> d;
      if (ls.fail()) fail("expected 'tri i j k'");
      cells.push_back(make_tri(a, b, d));
    } else if (kind == "quad") {
      int a = 0, b = 0, d = 0, e = 0;
      ls >> a >> b >> d >> e;
      if (ls.fail()) fail("expected 'quad i j k l'");
      cells.push_back(make_quad(a, b, d, e));
    } else {
      fail("unknown cell kind '" + kind + "'");
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "mesh2d 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  char buf[96];
  for (const Vec2& p : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "cells " << mesh.num_cells() << "\n";
  for (const MeshCell& c : mesh.cells()) {
    if (c.kind == CellKind::Triangle) {
      out << "tri " << c.v[0] << " " << c.v[1] << " " << c.v[2] << "\n";
    } else {
      out << "quad " << c.v[0] << " " << c.v[1] << " " << c.v[2] << " " << c.v[3] << "\n";
    }
  }
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
}

} // namespace quadfem
