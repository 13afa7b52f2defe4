#pragma once

#include "kdeform/field.hpp"

#include <string>

namespace kdeform {

/// Sign convention used for every curvature quantity in the library.
/// Round spheres have positive sectional curvature under it.
inline constexpr const char* kCurvatureConvention =
    "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z";

/// Pointwise curvature of a metric field, computed from its 2-jet.
///
/// Index layout:
///   gamma(k,i,j)             = Gamma^k_{ij}
///   dgamma(m,k,i,j)          = d_m Gamma^k_{ij}
///   riemann(l,i,j,k)         = R^l_{ijk}, where R(d_i,d_j)d_k = R^l_{ijk} d_l
///   riemann_lowered(l,i,j,k) = g(R(d_i,d_j)d_k, d_l)
///   ricci(i,j)               = R^k_{kij}
struct CurvatureData {
  Mat metric;
  Mat metric_inv;
  Tensor3 gamma;
  Tensor4 dgamma;
  Tensor4 riemann;
  Tensor4 riemann_lowered;
  Mat ricci;
  std::string convention_tag = kCurvatureConvention;

  [[nodiscard]] int dim() const { return static_cast<int>(metric.rows()); }
  [[nodiscard]] double inner(const Vec& x, const Vec& y) const { return x.dot(metric * y); }
};

/// Inverse of a symmetric positive definite matrix; throws DegenerateError otherwise.
Mat spd_inverse(const Mat& g);

Tensor3 christoffel(const MatrixJets& g);
Tensor3 christoffel(const MatrixField& metric, const Point& x);
/// d_m Gamma^k_{ij} from the second jet of the metric.
Tensor4 christoffel_derivative(const MatrixJets& g, const Mat& g_inv);

CurvatureData curvature(const MatrixJets& g);
CurvatureData curvature(const MatrixField& metric, const Point& x);

/// nabla_X Y for a field Y with jacobian dY(i,k) = d_k Y^i.
Vec covariant_derivative(const Tensor3& gamma, const Vec& x, const Vec& y, const Mat& dy);

/// R(X,Y)Z.
Vec riemann_apply(const CurvatureData& curv, const Vec& x, const Vec& y, const Vec& z);

/// Sectional curvature g(R(X,Y)Y,X)/(|X|^2|Y|^2 - g(X,Y)^2).
/// Throws DegenerateError when the denominator is below 1e-12 (relative to |X|^2|Y|^2).
double sectional_curvature(const CurvatureData& curv, const Vec& x, const Vec& y);

/// Sectional curvature of the plane spanned by X and JX.
double holomorphic_sectional(const CurvatureData& curv, const Mat& complex_structure, const Vec& x);

/// Ricci tensor assembled as sum_a g(R(d_i,e_a)e_a, d_j) over a g-orthonormal frame.
Mat ricci_frame_trace(const CurvatureData& curv);

/// Ric(V/|V|, V/|V|) / (dim - 1). For |V| < 1e-12 returns 0 when
/// `zero_at_degenerate` is set and throws DegenerateError otherwise.
double ricci_direction(const CurvatureData& curv, const Vec& v, bool zero_at_degenerate = false);

/// Columns form a g-orthonormal basis obtained from the coordinate basis.
Mat orthonormal_frame(const Mat& g);

/// (L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k.
Mat lie_derivative_metric(const VectorField& v, const MatrixField& metric, const Point& x);

/// Residuals of the algebraic symmetries of the Riemann tensor, each divided
/// by max(1, max |R_lijk|).
struct RiemannSymmetryResiduals {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double first_bianchi = 0.0;
  double ricci_symmetry = 0.0;
  double christoffel_symmetry = 0.0;

  [[nodiscard]] double max() const;
};

RiemannSymmetryResiduals riemann_symmetry_residuals(const CurvatureData& curv);

}  // namespace kdeform
