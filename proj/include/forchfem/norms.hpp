#pragma once

#include <cmath>
#include <vector>

#include "forchfem/fields.hpp"
#include "forchfem/quadrature.hpp"
#include "forchfem/rt0.hpp"

namespace forchfem {

namespace detail {
inline double sq(double v) { return v * v; }
inline double sq(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double sqdiff(double a, double b) { return sq(a - b); }
inline double sqdiff(Vec2 a, Vec2 b) { return sq(a - b); }

/// Pairwise summation over triangles in index order: deterministic and
/// better conditioned than a running sum at 1e5 elements.
inline double pairwise_sum(std::vector<double>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += terms[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

template <class PerTriangle>
double integrate_over_mesh(const TriangleMesh& mesh, PerTriangle&& term) {
  std::vector<double> terms(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) terms[t] = term(t);
  return pairwise_sum(terms, 0, terms.size());
}
}  // namespace detail

/// L2(Omega) norm of a discrete field: sqrt( sum_T |T| sum_q w_q |f(x_q)|^2 ).
template <class Field>
double l2_norm(const TriangleMesh& mesh, const Field& field, const QuadratureRule& rule) {
  double s = detail::integrate_over_mesh(mesh, [&](int t) {
    TriangleGeometry g = triangle_geometry(mesh, t);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      acc += rule.weights[q] * detail::sq(eval(mesh, field, t, rule.points[q]));
    return g.area * acc;
  });
  return std::sqrt(s);
}

/// Quadrature approximation of || field - exact ||_{L2(Omega)}.
template <class Field, class ExactFn>
double l2_error_vs_exact(const TriangleMesh& mesh, const Field& field, const ExactFn& exact,
                         const QuadratureRule& rule) {
  double s = detail::integrate_over_mesh(mesh, [&](int t) {
    TriangleGeometry g = triangle_geometry(mesh, t);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      Vec2 x = g.point(rule.points[q][0], rule.points[q][1], rule.points[q][2]);
      acc += rule.weights[q] * detail::sqdiff(eval(mesh, field, t, rule.points[q]), exact(x));
    }
    return g.area * acc;
  });
  return std::sqrt(s);
}

/// L2 norm of an analytic function sampled on the mesh (used for the exact
/// solution's norms in relative errors).
template <class Fn>
double l2_norm_of_function(const TriangleMesh& mesh, const Fn& fn, const QuadratureRule& rule) {
  double s = detail::integrate_over_mesh(mesh, [&](int t) {
    TriangleGeometry g = triangle_geometry(mesh, t);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      Vec2 x = g.point(rule.points[q][0], rule.points[q][1], rule.points[q][2]);
      acc += rule.weights[q] * detail::sq(fn(x));
    }
    return g.area * acc;
  });
  return std::sqrt(s);
}

/// Mean value of a P1 field over the unit square (|Omega| = 1).
inline double mean_value(const TriangleMesh& mesh, const P1ScalarField& p,
                         const QuadratureRule& rule) {
  return detail::integrate_over_mesh(mesh, [&](int t) {
    TriangleGeometry g = triangle_geometry(mesh, t);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      acc += rule.weights[q] * eval(mesh, p, t, rule.points[q]);
    return g.area * acc;
  });
}

}  // namespace forchfem
