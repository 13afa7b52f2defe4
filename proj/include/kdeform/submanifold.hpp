#pragma once

#include "kdeform/deformation.hpp"

#include <optional>
#include <vector>

namespace kdeform {

/// Leaves of <xi>^perp (hypersurfaces) or of span{xi, Jxi} (complex curves).
enum class LeafKind { xi_perp, xi_jxi };
/// Which metric a frame or a second fundamental form refers to.
enum class MetricChoice { base, deformed };

struct LeafFrame {
  Point base;
  LeafKind kind = LeafKind::xi_perp;
  MetricChoice metric = MetricChoice::base;
  std::vector<Vec> tangent;
  std::vector<Vec> normal;
};

/// For xi_perp the tangent basis is orthonormal under the chosen metric and
/// starts with Jxi when J is present; the normal is xi, normalized. For xi_jxi
/// the tangent basis is exactly {xi, Jxi}. Throws DegenerateError where xi
/// vanishes.
LeafFrame leaf_frame(const GeometrySpec& geom, const MatrixField& metric, MetricChoice choice,
                     const Point& x, LeafKind kind);
LeafFrame leaf_frame(const DeformedGeometry& dg, const Point& x, LeafKind kind,
                     MetricChoice choice);

/// Largest |metric(t, v)| over tangent t and normal v of the frame.
double leaf_frame_orthogonality(const LeafFrame& frame, const Mat& metric);

/// Part of v normal to span(tangent) under the metric.
Vec normal_part(const Mat& metric, const Mat& tangent, const Vec& v);

/// alpha(DF a, DF b) = [D^2F(a,b) + Gamma(DF a, DF b)]^perp at u = 0 of the chart.
Vec second_fundamental_form_chart(const MatrixField& metric, const LeafChart& chart, const Vec& a,
                                  const Vec& b);

/// alpha(X,Y) for X, Y tangent to the <xi>^perp leaf through x, extending Y
/// by projection: Y~(p) = Y - <Y,xi(p)>/<xi,xi>(p) xi(p).
/// Throws std::invalid_argument if X or Y is not tangent.
Vec second_fundamental_form_extension(const GeometrySpec& geom, const MatrixField& metric,
                                      const Point& x, const Vec& X, const Vec& Y);

/// -psi <X,Y> xi / |xi|^2.
Vec alpha_closed_form(const LocalGeometry& local, const Vec& X, const Vec& Y);
/// -psi (<X,Y> + 2 mu <Jxi,X><Jxi,Y>) xi / |xi|^2.
Vec alpha_tilde_closed_form(const LocalGeometry& local, const Vec& X, const Vec& Y);

/// H with (2n-1) H = -psi (2nc + |xi|^2) / (c mu |xi|^2) xi.
Vec mean_curvature_tilde_formula(const LocalGeometry& local);
/// Trace of the closed-form alpha~ over a g~-orthonormal leaf frame, divided by 2n-1.
Vec mean_curvature_tilde_closed_trace(const DeformedGeometry& dg, const Point& x);
/// Trace of the numerical alpha~ over a g~-orthonormal leaf frame, divided by 2n-1.
Vec mean_curvature_tilde_trace(const DeformedGeometry& dg, const Point& x);

/// max - min of |H|_g~ over the given leaf points, relative to max(1, max |H|_g~).
double mean_curvature_norm_spread(const DeformedGeometry& dg, const std::vector<Point>& leaf_points);
/// `count` points F(u) on the leaf through x, u uniform in [-spread, spread]^k.
std::vector<Point> leaf_points(const GeometrySpec& geom, const Point& x, int count, double spread,
                               std::uint64_t seed);

/// Lowered curvature of the induced metric in leaf coordinates,
/// L(d,a,b,c) = h(R_N(e_a,e_b)e_c, e_d).
struct InducedCurvature {
  Mat h;         // induced metric at u = 0
  Tensor4 gauss;      // from ambient curvature and alpha
  Tensor4 intrinsic;  // from the induced metric's own jets
};

InducedCurvature induced_curvature(const MatrixField& metric, const LeafChart& chart);
/// max |gauss - intrinsic| / max(1, max |intrinsic|).
double gauss_equation_residual(const InducedCurvature& ic);

/// |R_N(X,T)Y - (g_N(T,Y)X - g_N(X,Y)T)| on the leaf through x, with T = Jxi
/// and g_N the induced metric divided by |xi|^2 when `rescale` is set.
/// X and Y are in leaf coordinates.
double sasaki_identity_residual(const GeometrySpec& geom, const Point& x, const Vec& X,
                                const Vec& Y, bool rescale = true);

/// Normal parts of nabla_U V for U, V in {xi, Jxi}, leaves of span{xi, Jxi}.
/// Returns nullopt in complex dimension one, where the leaf is open.
std::optional<double> totally_geodesic_residual(const GeometrySpec& geom,
                                                const MatrixField& metric, const Point& x);

/// max |(L_V g)(t_a, t_b)| over a g-orthonormal basis of the <xi>^perp leaf.
double killing_residual(const VectorField& v, const MatrixField& metric, const GeometrySpec& geom,
                        const Point& x);

/// max |[xi, Jxi]|.
double xi_jxi_bracket_residual(const GeometrySpec& geom, const Point& x);

}  // namespace kdeform
