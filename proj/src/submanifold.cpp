#include "kdeform/submanifold.hpp"
#include "kdeform/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kdeform {

namespace {

void require_nonzero_xi(const LocalGeometry& local) {
  if (!(std::sqrt(local.xi_norm_sq) >= 1e-12)) {
    throw DegenerateError("xi vanishes at the point: no leaf through it");
  }
}

// Appends v to an orthonormal list under G if it is independent of it.
bool orthonormal_append(std::vector<Vec>& basis, Vec v, const Mat& G) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : basis) v -= b.dot(G * v) * b;
  const double nn = v.dot(G * v);
  if (!(nn > 1e-20)) return false;
  basis.push_back(v / std::sqrt(nn));
  return true;
}

Vec gamma_apply(const Tensor3& gamma, const Vec& x, const Vec& y) {
  const int d = gamma.size();
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out(k) += gamma(k, i, j) * x(i) * y(j);
  return out;
}

Vec zeros(int k) { return Vec::Zero(k); }

}  // namespace

LeafFrame leaf_frame(const GeometrySpec& geom, const MatrixField& metric, MetricChoice choice,
                     const Point& x, LeafKind kind) {
  const LocalGeometry local = local_geometry(geom, x);
  require_nonzero_xi(local);
  const int d = local.dim();
  const Mat G = evaluate_value(metric, x);
  const Vec& xi = local.xi.value;

  LeafFrame frame;
  frame.base = x;
  frame.kind = kind;
  frame.metric = choice;

  if (kind == LeafKind::xi_perp) {
    std::vector<Vec> work;
    orthonormal_append(work, xi, G);
    frame.normal = work;
    if (local.J) orthonormal_append(work, local.jxi, G);
    for (int k = 0; k < d && static_cast<int>(work.size()) < d; ++k) {
      orthonormal_append(work, Vec::Unit(d, k), G);
    }
    frame.tangent.assign(work.begin() + 1, work.end());
    return frame;
  }

  if (!local.J) throw PreconditionError("span{xi, Jxi} leaves need a complex structure");
  frame.tangent = {xi, local.jxi};
  std::vector<Vec> work;
  orthonormal_append(work, xi, G);
  orthonormal_append(work, local.jxi, G);
  for (int k = 0; k < d && static_cast<int>(work.size()) < d; ++k) {
    orthonormal_append(work, Vec::Unit(d, k), G);
  }
  frame.normal.assign(work.begin() + 2, work.end());
  return frame;
}

LeafFrame leaf_frame(const DeformedGeometry& dg, const Point& x, LeafKind kind,
                     MetricChoice choice) {
  const MatrixField& metric = choice == MetricChoice::base ? dg.base.metric : dg.gtilde;
  return leaf_frame(dg.base, metric, choice, x, kind);
}

double leaf_frame_orthogonality(const LeafFrame& frame, const Mat& metric) {
  double worst = 0.0;
  for (const Vec& t : frame.tangent)
    for (const Vec& v : frame.normal) worst = std::max(worst, std::abs(t.dot(metric * v)));
  return worst;
}

Vec normal_part(const Mat& metric, const Mat& tangent, const Vec& v) {
  const Mat gram = tangent.transpose() * metric * tangent;
  return v - tangent * gram.ldlt().solve(tangent.transpose() * (metric * v));
}

Vec second_fundamental_form_chart(const MatrixField& metric, const LeafChart& chart, const Vec& a,
                                  const Vec& b) {
  const VectorJets F = evaluate_jets(chart.embedding, zeros(chart.leaf_dim));
  const Point& p = F.value;
  const int d = static_cast<int>(p.size());
  const Vec X = F.jacobian * a, Y = F.jacobian * b;
  Vec accel(d);
  for (int i = 0; i < d; ++i) accel(i) = a.dot(F.second[i] * b);
  const Vec v = accel + gamma_apply(christoffel(metric, p), X, Y);
  return normal_part(evaluate_value(metric, p), F.jacobian, v);
}

Vec second_fundamental_form_extension(const GeometrySpec& geom, const MatrixField& metric,
                                      const Point& x, const Vec& X, const Vec& Y) {
  const LocalGeometry local = local_geometry(geom, x);
  require_nonzero_xi(local);
  const double xi_norm = std::sqrt(local.xi_norm_sq);
  for (const Vec* v : {&X, &Y}) {
    const double len = std::sqrt(std::max(local.inner(*v, *v), 0.0));
    if (std::abs(local.theta_xi.dot(*v)) > 1e-9 * std::max(1.0, len * xi_norm)) {
      throw std::invalid_argument("vector is not tangent to the leaf of <xi>^perp");
    }
  }
  const GeometrySpec g = geom;
  const Vec y = Y;
  const VectorField extension = [g, y](JetSpan p) {
    const JetVector xi = g.xi(p);
    const JetVector theta = g.metric(p) * xi;
    Jet2 num;
    for (std::size_t i = 0; i < xi.size(); ++i) num += y(static_cast<Eigen::Index>(i)) * theta[i];
    const Jet2 coef = num / dot(xi, theta);
    JetVector out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = y(static_cast<Eigen::Index>(i)) - coef * xi[i];
    return out;
  };
  const VectorJets ext = evaluate_jets(extension, x);
  const Vec v = ext.jacobian * X + gamma_apply(christoffel(metric, x), X, ext.value);
  const Mat G = evaluate_value(metric, x);
  const Vec& xi = local.xi.value;
  return (xi.dot(G * v) / xi.dot(G * xi)) * xi;
}

Vec alpha_closed_form(const LocalGeometry& local, const Vec& X, const Vec& Y) {
  return -local.psi * local.inner(X, Y) / local.xi_norm_sq * local.xi.value;
}

Vec alpha_tilde_closed_form(const LocalGeometry& local, const Vec& X, const Vec& Y) {
  const double mu = local.mu();
  const double coef = local.inner(X, Y) + 2.0 * mu * local.theta_jxi.dot(X) * local.theta_jxi.dot(Y);
  return -local.psi * coef / local.xi_norm_sq * local.xi.value;
}

Vec mean_curvature_tilde_formula(const LocalGeometry& local) {
  require_nonzero_xi(local);
  const int n = local.dim() / 2;
  const double c = local.c, s = local.xi_norm_sq, mu = local.mu();
  return -local.psi * (2.0 * n * c + s) / (c * mu * s) / (2.0 * n - 1.0) * local.xi.value;
}

Vec mean_curvature_tilde_closed_trace(const DeformedGeometry& dg, const Point& x) {
  const LocalGeometry local = local_geometry(dg.base, x);
  const LeafFrame frame = leaf_frame(dg, x, LeafKind::xi_perp, MetricChoice::deformed);
  Vec sum = Vec::Zero(local.dim());
  for (const Vec& e : frame.tangent) sum += alpha_tilde_closed_form(local, e, e);
  return sum / (local.dim() - 1.0);
}

Vec mean_curvature_tilde_trace(const DeformedGeometry& dg, const Point& x) {
  const LeafFrame frame = leaf_frame(dg, x, LeafKind::xi_perp, MetricChoice::deformed);
  Vec sum = Vec::Zero(x.size());
  for (const Vec& e : frame.tangent) {
    sum += second_fundamental_form_extension(dg.base, dg.gtilde, x, e, e);
  }
  return sum / (x.size() - 1.0);
}

double mean_curvature_norm_spread(const DeformedGeometry& dg, const std::vector<Point>& leaf_points) {
  if (leaf_points.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Point& q : leaf_points) {
    const Vec H = mean_curvature_tilde_trace(dg, q);
    const double norm = std::sqrt(H.dot(evaluate_value(dg.gtilde, q) * H));
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  return (hi - lo) / std::max(1.0, hi);
}

std::vector<Point> leaf_points(const GeometrySpec& geom, const Point& x, int count, double spread,
                               std::uint64_t seed) {
  if (!geom.leaf_chart) throw PreconditionError("model '" + geom.name + "' has no leaf chart");
  const LeafChart chart = geom.leaf_chart(x);
  Sampler sampler(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int attempt = 0; static_cast<int>(out.size()) < count; ++attempt) {
    if (attempt >= 1000 * count) throw DomainError("leaf sample leaves the domain of " + geom.name);
    Vec u(chart.leaf_dim);
    for (int a = 0; a < chart.leaf_dim; ++a) u(a) = sampler.uniform(-spread, spread);
    Point q = evaluate_value(chart.embedding, u);
    if (geom.in_domain(q)) out.push_back(std::move(q));
  }
  return out;
}

InducedCurvature induced_curvature(const MatrixField& metric, const LeafChart& chart) {
  const int k = chart.leaf_dim;
  const MatrixField induced = [metric, chart](JetSpan u) {
    const JetVector F = chart.embedding(u);
    const JetMatrix DF = chart.jacobian(u);
    return transpose(DF) * (metric(F) * DF);
  };
  InducedCurvature out;
  const CurvatureData intrinsic = curvature(induced, zeros(k));
  out.h = intrinsic.metric;
  out.intrinsic = intrinsic.riemann_lowered;

  const VectorJets F = evaluate_jets(chart.embedding, zeros(k));
  const Point& p = F.value;
  const Mat& DF = F.jacobian;
  const CurvatureData ambient = curvature(metric, p);
  const Mat& G = ambient.metric;

  std::vector<Vec> alpha(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      alpha[a * k + b] = second_fundamental_form_chart(metric, chart, Vec::Unit(k, a), Vec::Unit(k, b));
    }
  auto al = [&](int a, int b) -> const Vec& { return alpha[a * k + b]; };

  out.gauss = Tensor4(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        const Vec R = riemann_apply(ambient, DF.col(a), DF.col(b), DF.col(c));
        for (int e = 0; e < k; ++e) {
          out.gauss(e, a, b, c) = DF.col(e).dot(G * R) + al(b, c).dot(G * al(a, e)) -
                                  al(a, c).dot(G * al(b, e));
        }
      }
  return out;
}

double gauss_equation_residual(const InducedCurvature& ic) {
  const int k = ic.intrinsic.size();
  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int e = 0; e < k; ++e)
          worst = std::max(worst, std::abs(ic.gauss(a, b, c, e) - ic.intrinsic(a, b, c, e)));
  return worst / std::max(1.0, ic.intrinsic.max_abs());
}

double sasaki_identity_residual(const GeometrySpec& geom, const Point& x, const Vec& X,
                                const Vec& Y, bool rescale) {
  if (!geom.leaf_chart) throw PreconditionError("model '" + geom.name + "' has no leaf chart");
  const LocalGeometry local = local_geometry(geom, x);
  require_nonzero_xi(local);
  if (!local.J) throw PreconditionError("Sasaki identity needs a complex structure");
  const LeafChart chart = geom.leaf_chart(x);
  const int k = chart.leaf_dim;
  const InducedCurvature ic = induced_curvature(geom.metric, chart);
  const Mat DF = evaluate_jets(chart.embedding, zeros(k)).jacobian;
  const Vec T = DF.colPivHouseholderQr().solve(local.jxi);
  if ((DF * T - local.jxi).norm() > 1e-9 * std::max(1.0, local.jxi.norm())) {
    throw std::invalid_argument("Jxi is not tangent to the leaf chart");
  }
  const double scale = rescale ? local.xi_norm_sq : 1.0;
  const Mat gN = ic.h / scale;
  const Mat h_inv = ic.h.inverse();

  Vec lowered = Vec::Zero(k);
  for (int e = 0; e < k; ++e)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) lowered(e) += ic.gauss(e, a, b, c) * X(a) * T(b) * Y(c);
  const Vec lhs = h_inv * lowered;
  const Vec rhs = T.dot(gN * Y) * X - X.dot(gN * Y) * T;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

std::optional<double> totally_geodesic_residual(const GeometrySpec& geom,
                                                const MatrixField& metric, const Point& x) {
  const LocalGeometry local = local_geometry(geom, x);
  require_nonzero_xi(local);
  if (!local.J) throw PreconditionError("span{xi, Jxi} leaves need a complex structure");
  if (local.dim() <= 2) return std::nullopt;
  const VectorJets xi = local.xi;
  const VectorJets jxi = evaluate_jets(jxi_field(geom), x);
  const Tensor3 gamma = christoffel(metric, x);
  const Mat G = evaluate_value(metric, x);
  Mat tangent(local.dim(), 2);
  tangent.col(0) = xi.value;
  tangent.col(1) = jxi.value;

  double worst = 0.0;
  for (const VectorJets* U : {&xi, &jxi})
    for (const VectorJets* V : {&xi, &jxi}) {
      const Vec nabla = V->jacobian * U->value + gamma_apply(gamma, U->value, V->value);
      const Vec nu = normal_part(G, tangent, nabla);
      const double scale = std::max(1.0, std::sqrt(std::max(0.0, nabla.dot(G * nabla))));
      worst = std::max(worst, std::sqrt(std::max(0.0, nu.dot(G * nu))) / scale);
    }
  return worst;
}

double killing_residual(const VectorField& v, const MatrixField& metric, const GeometrySpec& geom,
                        const Point& x) {
  const LeafFrame frame = leaf_frame(geom, geom.metric, MetricChoice::base, x, LeafKind::xi_perp);
  const Mat L = lie_derivative_metric(v, metric, x);
  const Mat G = evaluate_value(metric, x);
  double worst = 0.0, scale = 1.0;
  for (const Vec& a : frame.tangent)
    for (const Vec& b : frame.tangent) {
      worst = std::max(worst, std::abs(a.dot(L * b)));
      scale = std::max(scale, std::abs(a.dot(G * b)));
    }
  return worst / scale;
}

double xi_jxi_bracket_residual(const GeometrySpec& geom, const Point& x) {
  geom.require_in_domain(x);
  return lie_bracket(geom.xi, jxi_field(geom), x).cwiseAbs().maxCoeff();
}

}  // namespace kdeform
