#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forchfem {

/// Plain 2D vector, value semantics.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  /// Rotation by +90 degrees (counterclockwise).
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Side of the unit square a boundary edge lies on.
enum class Side { x0, x1, y0, y1 };

inline const char* side_name(Side s) {
  switch (s) {
    case Side::x0: return "x=0";
    case Side::x1: return "x=1";
    case Side::y0: return "y=0";
    case Side::y1: return "y=1";
  }
  return "?";
}

/// Structured triangulation of the unit square: N x N cells, each split by
/// the diagonal from its lower-left to its upper-right corner.
///
/// Conventions baked into the construction (assembly relies on them):
///  - vertices are numbered row-major by grid position,
///  - triangles are counterclockwise,
///  - edges store the lower vertex index first; the global edge normal is
///    the (low -> high) tangent rotated by +90 degrees,
///  - local edge k of a triangle is the edge opposite local vertex k.
struct TriangleMesh {
  int n_divisions = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  /// Per triangle: { (edge index, orientation sign) } for local edges 0..2.
  /// sign = +1 when the triangle's outward normal on that edge equals the
  /// global edge normal.
  std::vector<std::array<std::pair<int, int>, 3>> tri_edges;
  std::vector<std::pair<int, Side>> boundary_edges;
  /// Maximal element diameter; equals sqrt(2)/N for this construction.
  double h = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  Vec2 edge_vertex(int e, int k) const { return vertices[edges[e][k]]; }
  double edge_length(int e) const { return (edge_vertex(e, 1) - edge_vertex(e, 0)).norm(); }
  /// Global unit normal of an edge ((low -> high) tangent rotated by +90).
  Vec2 edge_normal(int e) const {
    Vec2 t = edge_vertex(e, 1) - edge_vertex(e, 0);
    double len = t.norm();
    return {-t.y / len, t.x / len};
  }
  Vec2 centroid(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) * (1.0 / 3.0);
  }
};

/// Geometry of one triangle: area, vertex coordinates and the (constant)
/// gradients of the three barycentric coordinate functions.
struct TriangleGeometry {
  double area = 0.0;
  std::array<Vec2, 3> vertex;
  std::array<Vec2, 3> barycentric_gradient;

  /// Map barycentric coordinates to a physical point.
  Vec2 point(double l0, double l1, double l2) const {
    return vertex[0] * l0 + vertex[1] * l1 + vertex[2] * l2;
  }
};

inline TriangleGeometry triangle_geometry(const TriangleMesh& mesh, int t) {
  if (t < 0 || t >= mesh.triangle_count())
    throw std::out_of_range("triangle_geometry: index " + std::to_string(t));
  const auto& tri = mesh.triangles[t];
  TriangleGeometry g;
  for (int k = 0; k < 3; ++k) g.vertex[k] = mesh.vertices[tri[k]];
  Vec2 d1 = g.vertex[1] - g.vertex[0];
  Vec2 d2 = g.vertex[2] - g.vertex[0];
  g.area = 0.5 * (d1.x * d2.y - d1.y * d2.x);
  // grad(lambda_k) = perp(p_{k+2} - p_{k+1}) / (2 area)
  for (int k = 0; k < 3; ++k) {
    Vec2 opp = g.vertex[(k + 2) % 3] - g.vertex[(k + 1) % 3];
    g.barycentric_gradient[k] = opp.perp() * (1.0 / (2.0 * g.area));
  }
  return g;
}

inline TriangleMesh build_unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
  TriangleMesh m;
  m.n_divisions = n;
  m.h = std::sqrt(2.0) / n;

  const int nv = (n + 1) * (n + 1);
  m.vertices.reserve(nv);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  m.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = j * (n + 1) + i;
      int b = a + 1;
      int c = a + n + 2;  // (i+1, j+1)
      int d = a + n + 1;  // (i, j+1)
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }

  // Edges keyed by (min, max) vertex pair, numbered in first-encounter order.
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // vertex -> [(other, edge)]
  auto edge_index = [&](int a, int b) {
    int lo = a < b ? a : b, hi = a < b ? b : a;
    for (auto& [other, e] : adj[lo])
      if (other == hi) return e;
    int e = static_cast<int>(m.edges.size());
    m.edges.push_back({lo, hi});
    adj[lo].push_back({hi, e});
    return e;
  };

  m.tri_edges.resize(m.triangles.size());
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int va = tri[(k + 1) % 3], vb = tri[(k + 2) % 3];
      int e = edge_index(va, vb);
      // Orientation: outward normal on this edge vs global edge normal.
      Vec2 pa = m.vertices[m.edges[e][0]], pb = m.vertices[m.edges[e][1]];
      Vec2 tang = pb - pa;
      Vec2 n_glob = tang.perp();
      Vec2 mid = (pa + pb) * 0.5;
      Vec2 away = mid - m.vertices[tri[k]];  // points away from opposite vertex
      int sign = away.dot(n_glob) > 0 ? 1 : -1;
      m.tri_edges[t][k] = {e, sign};
    }
  }

  for (int e = 0; e < m.edge_count(); ++e) {
    Vec2 a = m.edge_vertex(e, 0), b = m.edge_vertex(e, 1);
    if (a.x == 0.0 && b.x == 0.0) m.boundary_edges.push_back({e, Side::x0});
    else if (a.x == 1.0 && b.x == 1.0) m.boundary_edges.push_back({e, Side::x1});
    else if (a.y == 0.0 && b.y == 0.0) m.boundary_edges.push_back({e, Side::y0});
    else if (a.y == 1.0 && b.y == 1.0) m.boundary_edges.push_back({e, Side::y1});
  }
  return m;
}

inline std::vector<int> boundary_edges_on_side(const TriangleMesh& mesh, Side side) {
  std::vector<int> out;
  for (const auto& [e, s] : mesh.boundary_edges)
    if (s == side) out.push_back(e);
  return out;
}

/// Plain-text dump (debugging/plotting): vertex, triangle and edge sections.
/// Edge tag is the side name for boundary edges, "-" for interior ones.
inline void write_mesh_text(const TriangleMesh& mesh, std::ostream& os) {
  os << "# vertices " << mesh.vertex_count() << "\n";
  for (const auto& v : mesh.vertices) os << v.x << " " << v.y << "\n";
  os << "# triangles " << mesh.triangle_count() << "\n";
  for (const auto& t : mesh.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "# edges " << mesh.edge_count() << "\n";
  std::vector<const char*> tag(mesh.edge_count(), "-");
  for (const auto& [e, s] : mesh.boundary_edges) tag[e] = side_name(s);
  for (int e = 0; e < mesh.edge_count(); ++e)
    os << mesh.edges[e][0] << " " << mesh.edges[e][1] << " " << tag[e] << "\n";
}

}  // namespace forchfem
