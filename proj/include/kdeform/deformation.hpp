#pragma once

#include "kdeform/curvature.hpp"
#include "kdeform/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kdeform {

/// g~ = mu g + mu^2 (theta_xi^2 + theta_Jxi^2) with mu = (c - |xi|^2)^-1.
///
/// Every member is an ordinary jet-evaluable field, so the curvature oracle
/// applies to g~ exactly as it does to g.
struct DeformedGeometry {
  GeometrySpec base;
  ScalarField mu;
  MatrixField gtilde;
  /// mu omega + mu^2 theta_xi ^ theta_Jxi
  MatrixField omega_tilde;

  /// The base geometry with its metric replaced by g~.
  [[nodiscard]] GeometrySpec as_geometry() const;
};

/// Requires a complex structure. Field evaluation throws DomainError where |xi|^2 >= c.
DeformedGeometry deform(const GeometrySpec& geom);

/// All pointwise data the closed-form expressions consume.
struct DeformedPoint {
  LocalGeometry local;
  CurvatureData base_curv;   // numerical curvature of g
  CurvatureData tilde_curv;  // numerical curvature of g~
  MatrixJets gtilde;
  Mat J;
  double mu = 0.0;
  double psi = 0.0;
  double r = 0.0;  // Ric(xi_hat): grad psi = -r xi

  [[nodiscard]] int dim() const { return local.dim(); }
  [[nodiscard]] int n_complex() const { return dim() / 2; }
  [[nodiscard]] double inner(const Vec& a, const Vec& b) const { return local.inner(a, b); }
  [[nodiscard]] double inner_tilde(const Vec& a, const Vec& b) const { return a.dot(gtilde.value * b); }
};

DeformedPoint deformed_point(const DeformedGeometry& dg, const Point& x);

/// omega~ from the closed form mu omega + mu^2 theta_xi ^ theta_Jxi.
Mat kahler_form_tilde(const DeformedGeometry& dg, const Point& x);
/// omega~(X,Y) = g~(JX,Y), read off the deformed metric.
Mat kahler_form_tilde_from_metric(const DeformedGeometry& dg, const Point& x);

/// max_i |d_i mu - 2 psi mu^2 (theta_xi)_i|, each term scaled by max(1, |d_i mu|).
double dmu_identity_residual(const DeformedGeometry& dg, const Point& x);
/// max |(d theta_Jxi)_ij - 2 psi omega_ij|. Takes any geometry with J so that
/// corrupted fields can be fed in.
double dtheta_jxi_identity_residual(const GeometrySpec& geom, const Point& x);

/// nabla~_X Y = nabla_X Y + psi mu (<xi,X>Y + <xi,Y>X + <Jxi,X>JY + <Jxi,Y>JX).
/// dY(i,k) = d_k Y^i; coordinate fields have dY = 0.
Vec nabla_tilde(const DeformedPoint& p, const Vec& x, const Vec& y, const Mat& dy);
/// Christoffel symbols of g~ assembled from the closed-form connection.
Tensor3 christoffel_tilde_closed_form(const DeformedPoint& p);

/// Distance of the operator A X = nabla X xi from the scalar multiples of the
/// identity, measured as min over phi of the largest entry of A - phi I in a
/// g-orthonormal frame. Throws DegenerateError where xi vanishes.
double xi_conformal_obstruction_tilde(const DeformedPoint& p);
/// Same functional with the base connection (zero for closed conformal xi).
double xi_conformal_obstruction_base(const DeformedPoint& p);

/// Closed-form R~(X,Y)Z built from the base curvature and Ric(xi_hat).
Vec riemann_tilde_closed_form(const DeformedPoint& p, const Vec& x, const Vec& y, const Vec& z);

struct HolomorphicTilde {
  double value = 0.0;
  bool normalized = false;  // X was rescaled to g-unit length
  std::string note;
};

/// Closed-form K~(X) for g-unit X; other lengths are normalized first and a
/// note is attached.
HolomorphicTilde holomorphic_sectional_tilde_closed_form(const DeformedPoint& p, const Vec& x);

struct DecayBounds {
  double K = 0.0;
  double K_tilde = 0.0;
  double general = 0.0;
  std::optional<double> orthogonal;  // only when X is g-orthogonal to xi and Jxi
  bool satisfied = false;
};

/// Both sides of the curvature decay bounds; K and K~ come from the numerical oracle.
DecayBounds decay_bounds(const DeformedPoint& p, const Vec& x, double tol = 1e-6);

/// The six terms of the closed-form Ricci tensor of g~.
struct RicciTildeTerms {
  double t1 = 0.0;  // Ric(X,Y)
  double t2 = 0.0;  // curvature in the xi, Jxi planes
  double t3 = 0.0;  // Ric(xi_hat) terms
  double t4 = 0.0;  // Ric(X, xi), Ric(X, Jxi)
  double t5 = 0.0;  // mixed curvature terms
  double t6 = 0.0;  // psi^2 terms
  [[nodiscard]] double total() const { return t1 + t2 + t3 + t4 + t5 + t6; }
};

RicciTildeTerms ricci_tilde_closed_form(const DeformedPoint& p, const Vec& x, const Vec& y);

/// max over points of |Ric~ + 2(n+1) g~|_F / |g~|_F. Throws PreconditionError if
/// the base metric is not Ricci-flat at some point.
double einstein_residual(const DeformedGeometry& dg, const std::vector<Point>& points);
double einstein_residual(const DeformedPoint& p);

/// max |d_k g~_ij - g~(nabla~_k d_i, d_j) - g~(d_i, nabla~_k d_j)| scaled by
/// max(1, max |d g~|), using the closed-form connection.
double metric_compatibility_residual(const DeformedPoint& p);

/// Residuals of g~(X,xi) = c mu^2 <X,xi> over the coordinate basis and of
/// g~(xi,xi) = c mu^2 |xi|^2, scaled.
double gtilde_xi_identity_residual(const DeformedPoint& p);

/// A path t -> gamma(t) given on one-dimensional jets.
using Curve = std::function<JetVector(const Jet2& t)>;

/// g~-length of a curve by adaptive composite 16-point Gauss-Legendre.
/// Throws DomainError if the curve leaves the domain at a quadrature node.
double curve_length_tilde(const DeformedGeometry& dg, const Curve& curve, double t0, double t1,
                          double abs_tol = 1e-8);

/// Straight segment from a to b, t in [0, 1].
Curve straight_segment(const Point& a, const Point& b);

/// (1/2) |log(c - |xi(p0)|^2) - log(c - |xi(p)|^2)|.
double length_lower_bound(double c, double xi_sq_start, double xi_sq_end);

}  // namespace kdeform
