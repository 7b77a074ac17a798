#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "forchfem/mesh.hpp"
#include "forchfem/norms.hpp"

using namespace forchfem;

TEST(L2Norm, ZeroFieldIsZero) {
  TriangleMesh m = build_unit_square_mesh(2);
  QuadratureRule r = quadrature_rule(5);
  EXPECT_EQ(l2_norm(m, P0ScalarField::zeros(m), r), 0.0);
  EXPECT_EQ(l2_norm(m, P0VectorField::zeros(m), r), 0.0);
  EXPECT_EQ(l2_norm(m, RT0Field::zeros(m), r), 0.0);
}

TEST(L2Norm, ConstantOneHasUnitNorm) {
  TriangleMesh m = build_unit_square_mesh(4);
  P0ScalarField one{std::vector<double>(m.triangle_count(), 1.0)};
  EXPECT_NEAR(l2_norm(m, one, quadrature_rule(1)), 1.0, 1e-14);
  EXPECT_NEAR(l2_norm(m, one, quadrature_rule(5)), 1.0, 1e-14);
}

TEST(L2Norm, P1NodalXFieldMatchesAnalyticIntegral) {
  TriangleMesh m = build_unit_square_mesh(2);
  P1ScalarField p = P1ScalarField::zeros(m);
  for (int v = 0; v < m.vertex_count(); ++v) p.value[v] = m.vertices[v].x;
  // P1 reproduces x exactly; int x^2 over the unit square = 1/3
  EXPECT_NEAR(l2_norm(m, p, quadrature_rule(5)), 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(L2Error, InterpolantOfMatchingDegreeIsExact) {
  TriangleMesh m = build_unit_square_mesh(3);
  P1ScalarField p = P1ScalarField::zeros(m);
  for (int v = 0; v < m.vertex_count(); ++v)
    p.value[v] = 2.0 * m.vertices[v].x - 0.5 * m.vertices[v].y + 1.0;
  auto exact = [](Vec2 x) { return 2.0 * x.x - 0.5 * x.y + 1.0; };
  EXPECT_NEAR(l2_error_vs_exact(m, p, exact, quadrature_rule(5)), 0.0, 1e-12);
}

TEST(L2Error, ZeroFieldAgainstOneIsOne) {
  TriangleMesh m = build_unit_square_mesh(3);
  auto one = [](Vec2) { return 1.0; };
  EXPECT_NEAR(l2_error_vs_exact(m, P0ScalarField::zeros(m), one, quadrature_rule(5)), 1.0, 1e-14);
}

// Brute-force oracle: refine each triangle 10^4-fold (100x100 similar copies)
// and integrate |field - exact|^2 by the midpoint rule on each sub-triangle.
namespace {
double subdivision_error_p0(const TriangleMesh& m, const P0VectorField& f,
                            const std::function<Vec2(Vec2)>& exact) {
  const int k = 100;
  double total = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    TriangleGeometry g = triangle_geometry(m, t);
    double sub_area = g.area / (k * k);
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k - i; ++j) {
        // "upright" sub-triangle centroid in barycentric coordinates
        double l1 = (i + 1.0 / 3) / k, l2 = (j + 1.0 / 3) / k;
        Vec2 x = g.point(1 - l1 - l2, l1, l2);
        Vec2 d = f.value[t] - exact(x);
        acc += d.x * d.x + d.y * d.y;
        if (i + j < k - 1) {  // "inverted" companion
          double m1 = (i + 2.0 / 3) / k, m2 = (j + 2.0 / 3) / k;
          Vec2 y = g.point(1 - m1 - m2, m1, m2);
          Vec2 e = f.value[t] - exact(y);
          acc += e.x * e.x + e.y * e.y;
        }
      }
    }
    total += acc * sub_area;
  }
  return std::sqrt(total);
}
}  // namespace

TEST(L2Error, P0InterpolantAgainstSubdivisionOracle) {
  TriangleMesh m = build_unit_square_mesh(2);
  auto exact = [](Vec2 x) { return Vec2{x.x, 0.0}; };
  P0VectorField f = P0VectorField::zeros(m);
  for (int t = 0; t < m.triangle_count(); ++t) f.value[t] = exact(m.centroid(t));
  double impl = l2_error_vs_exact(m, f, exact, quadrature_rule(5));
  double oracle = subdivision_error_p0(m, f, exact);
  // frozen oracle value for u(x,y) = (x,0) sampled at centroids on n = 2:
  // ||x - x_c|| over 8 congruent triangles = h-scaled second moment
  EXPECT_NEAR(oracle, impl, 1e-6);
  EXPECT_NEAR(impl, 0.068041381743977169, 1e-12);
}

TEST(Lemma21, MonotonicityOfPowerNonlinearity) {
  // (|x|^q x - |y|^q y)(x - y) >= 0 for q >= 0
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> val(-50.0, 50.0);
  std::uniform_real_distribution<double> pow(0.0, 4.0);
  for (int i = 0; i < 10000; ++i) {
    double x = val(rng), y = val(rng), q = pow(rng);
    double lhs = (std::pow(std::abs(x), q) * x - std::pow(std::abs(y), q) * y) * (x - y);
    ASSERT_GE(lhs, 0.0) << "x=" << x << " y=" << y << " q=" << q;
  }
}

TEST(MeanValue, P1FieldMeanMatchesAnalytic) {
  TriangleMesh m = build_unit_square_mesh(4);
  P1ScalarField p = P1ScalarField::zeros(m);
  for (int v = 0; v < m.vertex_count(); ++v) p.value[v] = m.vertices[v].x + 3.0;
  EXPECT_NEAR(mean_value(m, p, quadrature_rule(5)), 3.5, 1e-14);
}
