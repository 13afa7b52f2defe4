#pragma once

#include "kdeform/curvature.hpp"
#include "kdeform/field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kdeform {

/// Axis-aligned coordinate box used for sampling.
struct Box {
  Vec lower;
  Vec upper;
};

/// Local parameterization u -> F(u) of a leaf through a base point, F(0) = base.
/// `embedding` maps leaf coordinates to chart coordinates, `jacobian` is dF
/// (dim x leaf_dim). Both are jet-evaluable in u.
struct LeafChart {
  int leaf_dim = 0;
  VectorField embedding;
  MatrixField jacobian;
};

using LeafChartFactory = std::function<LeafChart(const Point& base)>;

/// A single-chart geometry of real dimension `dim` with a distinguished field xi.
///
/// Fields are evaluated on jets, so every consumer gets derivatives up to
/// second order for free. The complex structure is optional: geometries
/// without one support only metric and conformal-field checks.
struct GeometrySpec {
  std::string name;
  int dim = 0;
  double c = 1.0;
  MatrixField metric;
  std::optional<MatrixField> complex_structure;  // J^i_j, acting on columns
  VectorField xi;
  std::function<bool(const Point&)> in_domain;
  Box sample_box;
  /// Parameterization of the leaf of <xi>^perp through a point; empty when
  /// the model does not materialize those leaves.
  LeafChartFactory leaf_chart;

  [[nodiscard]] int n_complex() const { return dim / 2; }
  [[nodiscard]] bool has_complex_structure() const { return complex_structure.has_value(); }
  void require_in_domain(const Point& x) const;
};

struct TangentVector {
  Point base;
  Vec comp;
};

/// Ordered (e_1, J e_1, ..., e_n, J e_n) at a common base point.
struct HermitianFrame {
  Point base;
  std::vector<Vec> vectors;
};

/// Everything first and second order about the base geometry at one point.
struct LocalGeometry {
  Point x;
  double c = 0.0;
  MatrixJets g;
  Mat g_inv;
  std::optional<MatrixJets> J;
  VectorJets xi;
  Tensor3 gamma;
  Tensor4 dgamma;
  double psi = 0.0;
  Vec dpsi;  // coordinate gradient d_l psi
  double xi_norm_sq = 0.0;
  Vec theta_xi;   // lowered xi
  Vec jxi;        // J xi (only with a complex structure)
  Vec theta_jxi;  // lowered J xi

  [[nodiscard]] int dim() const { return static_cast<int>(x.size()); }
  [[nodiscard]] double inner(const Vec& a, const Vec& b) const { return a.dot(g.value * b); }
  [[nodiscard]] Vec apply_J(const Vec& v) const;
  /// mu = (c - |xi|^2)^-1; throws DomainError when |xi|^2 >= c.
  [[nodiscard]] double mu() const;
  /// nabla_X xi.
  [[nodiscard]] Vec nabla_xi(const Vec& v) const;
};

LocalGeometry local_geometry(const GeometrySpec& geom, const Point& x);

JetMatrix metric_at(const GeometrySpec& geom, const Point& x);

double inner(const GeometrySpec& geom, const TangentVector& a, const TangentVector& b);
double norm_sq(const GeometrySpec& geom, const TangentVector& a);
double theta_xi(const GeometrySpec& geom, const TangentVector& a);
double theta_jxi(const GeometrySpec& geom, const TangentVector& a);

/// psi = div(xi) / dim.
double conformal_factor(const GeometrySpec& geom, const Point& x);

/// nabla_X xi - psi X.
Vec closed_conformal_residual(const GeometrySpec& geom, const Point& x, const Vec& v);
/// Largest component of closed_conformal_residual over the coordinate basis.
double closed_conformal_residual_max(const GeometrySpec& geom, const Point& x);

/// max |(nabla_k J)^i_j|.
double kahler_residual(const GeometrySpec& geom, const Point& x);
/// max |J^2 + I|.
double complex_structure_residual(const GeometrySpec& geom, const Point& x);
/// |g(JX,JY) - g(X,Y)|.
double hermitian_residual(const GeometrySpec& geom, const Point& x, const Vec& a, const Vec& b);

HermitianFrame hermitian_frame_at(const GeometrySpec& geom, const Point& x,
                                  const std::optional<Vec>& first = std::nullopt);
HermitianFrame hermitian_frame(const Mat& metric, const Mat& complex_structure,
                               const Point& base, const std::optional<Vec>& first = std::nullopt);

/// (d omega)_{ijk} = d_i omega_jk - d_j omega_ik + d_k omega_ij.
/// Throws std::invalid_argument when the form is not antisymmetric at x.
Tensor3 two_form_exterior_derivative(const MatrixField& form, const Point& x);

/// Kaehler form omega_ij = g(J d_i, d_j) as a jet-evaluable field.
MatrixField kahler_form_field(const GeometrySpec& geom);

/// The scalar r with grad psi = -r xi, read off as r = -dpsi(xi)/|xi|^2.
/// Zero where |xi| < 1e-12 if `zero_at_degenerate`, otherwise DegenerateError.
double normalized_ricci_xi(const LocalGeometry& local, bool zero_at_degenerate = true);

/// |1 + mu |xi|^2 - c mu|.
double mu_identity_residual(const GeometrySpec& geom, const Point& x);

/// [V, W] at x from the jets of both fields.
Vec lie_bracket(const VectorField& v, const VectorField& w, const Point& x);

/// J xi as a jet-evaluable field.
VectorField jxi_field(const GeometrySpec& geom);

}  // namespace kdeform
