#pragma once

#include <array>
#include <stdexcept>

#include "forchfem/fields.hpp"
#include "forchfem/mesh.hpp"
#include "forchfem/quadrature.hpp"

namespace forchfem {

/// RT0 basis function of local edge `local_edge` (the edge opposite local
/// vertex `local_edge`) evaluated at a barycentric point:
///   phi_e(x) = sigma * |e| / (2|T|) * (x - p_opp),
/// sigma the triangle's orientation sign for that edge. With this scaling
/// phi_e . n_e == 1 along its own edge (n_e the global edge normal), so the
/// edge degree of freedom is the constant normal-flux value, and
/// div phi_e = sigma |e| / |T|.
inline Vec2 rt0_basis_eval(const TriangleMesh& mesh, int t, int local_edge,
                           std::array<double, 3> bary) {
  TriangleGeometry g = triangle_geometry(mesh, t);
  if (!(g.area > 0.0)) throw std::invalid_argument("rt0_basis_eval: degenerate triangle");
  const auto& [e, sign] = mesh.tri_edges[t][local_edge];
  Vec2 x = g.point(bary[0], bary[1], bary[2]);
  Vec2 p_opp = g.vertex[local_edge];
  return (sign * mesh.edge_length(e) / (2.0 * g.area)) * (x - p_opp);
}

/// Evaluate an RT0 field inside triangle `t` at a barycentric point.
inline Vec2 eval_rt0(const TriangleMesh& mesh, const RT0Field& field, int t,
                     std::array<double, 3> bary) {
  TriangleGeometry g = triangle_geometry(mesh, t);
  if (!(g.area > 0.0)) throw std::invalid_argument("eval_rt0: degenerate triangle");
  Vec2 x = g.point(bary[0], bary[1], bary[2]);
  Vec2 out{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    const auto& [e, sign] = mesh.tri_edges[t][k];
    double c = field.value[e] * sign * mesh.edge_length(e) / (2.0 * g.area);
    out = out + c * (x - g.vertex[k]);
  }
  return out;
}

inline Vec2 eval(const TriangleMesh& mesh, const RT0Field& f, int t, std::array<double, 3> bary) {
  return eval_rt0(mesh, f, t, bary);
}

/// Elementwise (constant) divergence of an RT0 field on triangle `t`.
inline double rt0_divergence(const TriangleMesh& mesh, const RT0Field& field, int t) {
  TriangleGeometry g = triangle_geometry(mesh, t);
  double div = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& [e, sign] = mesh.tri_edges[t][k];
    div += field.value[e] * sign * mesh.edge_length(e) / g.area;
  }
  return div;
}

/// RT0 interpolant of an analytic vector field: edge dof = mean normal flux
/// (1/|e|) integral_e u.n_e ds, by 3-point Gauss per edge.
inline RT0Field rt0_interpolate(const TriangleMesh& mesh, const VectorFn& u) {
  RT0Field f = RT0Field::zeros(mesh);
  EdgeGaussRule g = edge_gauss3();
  for (int e = 0; e < mesh.edge_count(); ++e) {
    Vec2 a = mesh.edge_vertex(e, 0), b = mesh.edge_vertex(e, 1);
    Vec2 n = mesh.edge_normal(e);
    double mean = 0.0;
    for (int q = 0; q < 3; ++q) {
      Vec2 x = a + g.points[q] * (b - a);
      mean += g.weights[q] * u(x).dot(n);
    }
    f.value[e] = mean;
  }
  return f;
}

}  // namespace forchfem
