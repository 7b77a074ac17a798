#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace forchfem {

/// Quadrature rule on the reference triangle in barycentric coordinates.
/// Weights are normalized to sum to 1, so on a physical triangle T
///   integral_T f dx  ~=  |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;  // barycentric triples
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Rules of exactness degree 1 (centroid), 2 (3 interior points) and
/// 5 (7-point Radon rule).
inline QuadratureRule quadrature_rule(int degree) {
  QuadratureRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
      r.weights = {1.0};
      return r;
    case 2: {
      const double a = 2.0 / 3, b = 1.0 / 6;
      r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
      r.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
      return r;
    }
    case 5: {
      const double s = std::sqrt(15.0);
      const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
      const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
      r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                  {a1, a1, 1 - 2 * a1}, {a1, 1 - 2 * a1, a1}, {1 - 2 * a1, a1, a1},
                  {a2, a2, 1 - 2 * a2}, {a2, 1 - 2 * a2, a2}, {1 - 2 * a2, a2, a2}};
      r.weights = {9.0 / 40, w1, w1, w1, w2, w2, w2};
      return r;
    }
    default:
      throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
  }
}

/// 3-point Gauss-Legendre rule on [0,1] (weights sum to 1), used for edge
/// integrals of boundary data: integral_e g ds ~= |e| * sum_q w_q g(s_q).
struct EdgeGaussRule {
  std::array<double, 3> points;
  std::array<double, 3> weights;
};

inline EdgeGaussRule edge_gauss3() {
  const double d = std::sqrt(15.0) / 10.0;
  return {{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18, 8.0 / 18, 5.0 / 18}};
}

}  // namespace forchfem
