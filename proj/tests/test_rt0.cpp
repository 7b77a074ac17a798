#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "forchfem/mesh.hpp"
#include "forchfem/quadrature.hpp"
#include "forchfem/rt0.hpp"

using namespace forchfem;

namespace {
// Barycentric coordinates of a physical point in triangle t.
std::array<double, 3> barycentric(const TriangleGeometry& g, Vec2 x) {
  std::array<double, 3> l;
  for (int k = 0; k < 3; ++k) {
    double at_v0 = (k == 0) ? 1.0 : 0.0;
    l[k] = at_v0 + g.barycentric_gradient[k].dot(x - g.vertex[0]);
  }
  return l;
}

// integral over edge e of phi . n_e, 3-point Gauss (exact: integrand linear)
double edge_flux_integral(const TriangleMesh& m, int t, int local_edge, int e) {
  EdgeGaussRule g = edge_gauss3();
  TriangleGeometry geo = triangle_geometry(m, t);
  Vec2 a = m.edge_vertex(e, 0), b = m.edge_vertex(e, 1);
  Vec2 n = m.edge_normal(e);
  double acc = 0.0;
  for (int q = 0; q < 3; ++q) {
    Vec2 x = a + g.points[q] * (b - a);
    acc += g.weights[q] * rt0_basis_eval(m, t, local_edge, barycentric(geo, x)).dot(n);
  }
  return acc * m.edge_length(e);
}
}  // namespace

TEST(RT0Basis, DualityOnOwnAndOtherEdges) {
  TriangleMesh m = build_unit_square_mesh(3);
  for (int t : {0, 5, 11}) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        int ej = m.tri_edges[t][j].first;
        double flux = edge_flux_integral(m, t, i, ej);
        double expected = (i == j) ? m.edge_length(ej) : 0.0;
        ASSERT_NEAR(flux, expected, 1e-12) << "t=" << t << " i=" << i << " j=" << j;
        if (i == j)  // normalized pairing: mean normal flux of own basis is 1
          ASSERT_NEAR(flux / m.edge_length(ej), 1.0, 1e-12);
      }
    }
  }
}

TEST(RT0Basis, DivergenceMatchesFiniteDifferenceOracle) {
  TriangleMesh m = build_unit_square_mesh(2);
  const double eps = 1e-6;
  for (int t = 0; t < m.triangle_count(); ++t) {
    TriangleGeometry g = triangle_geometry(m, t);
    Vec2 c = m.centroid(t);
    for (int k = 0; k < 3; ++k) {
      const auto& [e, sign] = m.tri_edges[t][k];
      double expected = sign * m.edge_length(e) / g.area;
      // central differences of the closed form around the centroid
      auto phi = [&](Vec2 x) { return rt0_basis_eval(m, t, k, barycentric(g, x)); };
      double div = (phi({c.x + eps, c.y}).x - phi({c.x - eps, c.y}).x) / (2 * eps) +
                   (phi({c.x, c.y + eps}).y - phi({c.x, c.y - eps}).y) / (2 * eps);
      ASSERT_NEAR(div, expected, 1e-6 * std::abs(expected));
      ASSERT_NEAR(rt0_divergence(m, {std::vector<double>(m.edge_count(), 0.0)}, t), 0.0, 1e-14);
      RT0Field unit = RT0Field::zeros(m);
      unit.value[e] = 1.0;
      ASSERT_NEAR(rt0_divergence(m, unit, t), expected, 1e-12);
    }
  }
}

TEST(RT0Eval, ZeroFieldAndSingleCoefficient) {
  TriangleMesh m = build_unit_square_mesh(2);
  RT0Field zero = RT0Field::zeros(m);
  std::array<double, 3> mid{1.0 / 3, 1.0 / 3, 1.0 / 3};
  Vec2 v = eval_rt0(m, zero, 3, mid);
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);

  int t = 4;
  int local = 1;
  int e = m.tri_edges[t][local].first;
  RT0Field unit = RT0Field::zeros(m);
  unit.value[e] = 1.0;
  Vec2 a = eval_rt0(m, unit, t, mid);
  Vec2 b = rt0_basis_eval(m, t, local, mid);
  EXPECT_NEAR(a.x, b.x, 1e-14);
  EXPECT_NEAR(a.y, b.y, 1e-14);
}

TEST(RT0Eval, ConstantFieldReproducedExactly) {
  TriangleMesh m = build_unit_square_mesh(3);
  const Vec2 c{0.7, -1.3};
  RT0Field f = rt0_interpolate(m, [&](Vec2) { return c; });
  QuadratureRule rule = quadrature_rule(5);
  for (int t = 0; t < m.triangle_count(); ++t)
    for (int q = 0; q < rule.size(); ++q) {
      Vec2 v = eval_rt0(m, f, t, rule.points[q]);
      ASSERT_NEAR(v.x, c.x, 1e-13);
      ASSERT_NEAR(v.y, c.y, 1e-13);
    }
}

TEST(RT0Eval, DegenerateTriangleThrows) {
  TriangleMesh m;
  m.vertices = {{0, 0}, {1, 0}, {2, 0}};  // collinear
  m.triangles = {{0, 1, 2}};
  m.edges = {{0, 1}, {1, 2}, {0, 2}};
  m.tri_edges = {{std::pair{1, 1}, std::pair{2, 1}, std::pair{0, 1}}};
  EXPECT_THROW(rt0_basis_eval(m, 0, 0, {1.0 / 3, 1.0 / 3, 1.0 / 3}), std::invalid_argument);
}

TEST(RT0Property, NormalContinuityAcrossInteriorEdges) {
  TriangleMesh m = build_unit_square_mesh(6);
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  RT0Field f = RT0Field::zeros(m);
  for (double& v : f.value) v = unif(rng);

  // incident triangles per edge
  std::vector<std::vector<int>> tris_of_edge(m.edge_count());
  for (int t = 0; t < m.triangle_count(); ++t)
    for (const auto& [e, sign] : m.tri_edges[t]) tris_of_edge[e].push_back(t);

  int checked = 0;
  for (int e = 0; e < m.edge_count() && checked < 20; ++e) {
    if (tris_of_edge[e].size() != 2) continue;
    ++checked;
    Vec2 mid = (m.edge_vertex(e, 0) + m.edge_vertex(e, 1)) * 0.5;
    Vec2 n = m.edge_normal(e);
    double trace[2];
    for (int s = 0; s < 2; ++s) {
      int t = tris_of_edge[e][s];
      TriangleGeometry g = triangle_geometry(m, t);
      trace[s] = eval_rt0(m, f, t, barycentric(g, mid)).dot(n);
    }
    ASSERT_NEAR(trace[0], trace[1], 1e-12);
  }
  EXPECT_EQ(checked, 20);
}
