#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "forchfem/mesh.hpp"

namespace forchfem {

using ScalarFn = std::function<double(Vec2)>;
using VectorFn = std::function<Vec2(Vec2)>;

/// Piecewise-constant vector field, one 2-vector per triangle.
struct P0VectorField {
  std::vector<Vec2> value;

  static P0VectorField zeros(const TriangleMesh& mesh) {
    return {std::vector<Vec2>(mesh.triangle_count())};
  }
  int size() const { return static_cast<int>(value.size()); }
};

/// Continuous piecewise-linear scalar field, one value per vertex.
struct P1ScalarField {
  std::vector<double> value;

  static P1ScalarField zeros(const TriangleMesh& mesh) {
    return {std::vector<double>(mesh.vertex_count(), 0.0)};
  }
  int size() const { return static_cast<int>(value.size()); }
};

/// Lowest-order Raviart-Thomas field, one normal-flux coefficient per edge
/// (the constant value of u.n_e along the edge, n_e the global edge normal).
struct RT0Field {
  std::vector<double> value;

  static RT0Field zeros(const TriangleMesh& mesh) {
    return {std::vector<double>(mesh.edge_count(), 0.0)};
  }
  int size() const { return static_cast<int>(value.size()); }
};

/// Piecewise-constant scalar field, one value per triangle.
struct P0ScalarField {
  std::vector<double> value;

  static P0ScalarField zeros(const TriangleMesh& mesh) {
    return {std::vector<double>(mesh.triangle_count(), 0.0)};
  }
  int size() const { return static_cast<int>(value.size()); }
};

inline Vec2 eval(const TriangleMesh&, const P0VectorField& f, int t, std::array<double, 3>) {
  return f.value[t];
}

inline double eval(const TriangleMesh& mesh, const P1ScalarField& f, int t,
                   std::array<double, 3> bary) {
  const auto& tri = mesh.triangles[t];
  return bary[0] * f.value[tri[0]] + bary[1] * f.value[tri[1]] + bary[2] * f.value[tri[2]];
}

inline double eval(const TriangleMesh&, const P0ScalarField& f, int t, std::array<double, 3>) {
  return f.value[t];
}

}  // namespace forchfem
