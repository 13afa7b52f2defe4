#include "kdeform/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kdeform {

namespace {

std::string describe(const Point& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ')';
  return os.str();
}

const MatrixField& require_complex_structure(const GeometrySpec& geom) {
  if (!geom.complex_structure) {
    throw PreconditionError("geometry '" + geom.name + "' carries no complex structure");
  }
  return *geom.complex_structure;
}

}  // namespace

void GeometrySpec::require_in_domain(const Point& x) const {
  if (x.size() != dim) throw std::invalid_argument("point dimension does not match geometry");
  if (!in_domain(x)) throw DomainError("point " + describe(x) + " outside domain of " + name);
}

Vec LocalGeometry::apply_J(const Vec& v) const {
  if (!J) throw PreconditionError("local geometry has no complex structure");
  return J->value * v;
}

double LocalGeometry::mu() const {
  if (!(xi_norm_sq < c)) throw DomainError("|xi|^2 >= c: deformation undefined");
  return 1.0 / (c - xi_norm_sq);
}

Vec LocalGeometry::nabla_xi(const Vec& v) const {
  return covariant_derivative(gamma, v, xi.value, xi.jacobian);
}

LocalGeometry local_geometry(const GeometrySpec& geom, const Point& x) {
  geom.require_in_domain(x);
  const int n = geom.dim;
  LocalGeometry out;
  out.x = x;
  out.c = geom.c;
  out.g = evaluate_jets(geom.metric, x);
  out.g_inv = spd_inverse(out.g.value);
  if (geom.complex_structure) out.J = evaluate_jets(*geom.complex_structure, x);
  out.xi = evaluate_jets(geom.xi, x);
  out.gamma = christoffel(out.g);
  out.dgamma = christoffel_derivative(out.g, out.g_inv);

  double div = out.xi.jacobian.trace();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) div += out.gamma(i, i, k) * out.xi.value(k);
  out.psi = div / n;

  out.dpsi = Vec::Zero(n);
  for (int l = 0; l < n; ++l) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += out.xi.second[i](i, l);
      for (int k = 0; k < n; ++k) {
        acc += out.dgamma(l, i, i, k) * out.xi.value(k) + out.gamma(i, i, k) * out.xi.jacobian(k, l);
      }
    }
    out.dpsi(l) = acc / n;
  }

  out.theta_xi = out.g.value * out.xi.value;
  out.xi_norm_sq = out.xi.value.dot(out.theta_xi);
  if (out.J) {
    out.jxi = out.J->value * out.xi.value;
    out.theta_jxi = out.g.value * out.jxi;
  }
  return out;
}

JetMatrix metric_at(const GeometrySpec& geom, const Point& x) {
  geom.require_in_domain(x);
  return geom.metric(seed_point({x.data(), static_cast<std::size_t>(x.size())}));
}

namespace {

Mat metric_value_at(const GeometrySpec& geom, const TangentVector& a, const TangentVector& b) {
  if (a.base.size() != b.base.size() || !(a.base - b.base).isZero(0.0)) {
    throw std::invalid_argument("tangent vectors live at different base points");
  }
  geom.require_in_domain(a.base);
  return evaluate_value(geom.metric, a.base);
}

}  // namespace

double inner(const GeometrySpec& geom, const TangentVector& a, const TangentVector& b) {
  return a.comp.dot(metric_value_at(geom, a, b) * b.comp);
}

double norm_sq(const GeometrySpec& geom, const TangentVector& a) { return inner(geom, a, a); }

double theta_xi(const GeometrySpec& geom, const TangentVector& a) {
  const Vec xi = evaluate_value(geom.xi, a.base);
  return inner(geom, TangentVector{a.base, xi}, a);
}

double theta_jxi(const GeometrySpec& geom, const TangentVector& a) {
  const Vec jxi = evaluate_value(jxi_field(geom), a.base);
  return inner(geom, TangentVector{a.base, jxi}, a);
}

double conformal_factor(const GeometrySpec& geom, const Point& x) {
  return local_geometry(geom, x).psi;
}

Vec closed_conformal_residual(const GeometrySpec& geom, const Point& x, const Vec& v) {
  const LocalGeometry local = local_geometry(geom, x);
  return local.nabla_xi(v) - local.psi * v;
}

double closed_conformal_residual_max(const GeometrySpec& geom, const Point& x) {
  const LocalGeometry local = local_geometry(geom, x);
  double worst = 0.0;
  for (int k = 0; k < local.dim(); ++k) {
    const Vec e = Vec::Unit(local.dim(), k);
    worst = std::max(worst, (local.nabla_xi(e) - local.psi * e).cwiseAbs().maxCoeff());
  }
  return worst;
}

double kahler_residual(const GeometrySpec& geom, const Point& x) {
  require_complex_structure(geom);
  const LocalGeometry local = local_geometry(geom, x);
  const int n = local.dim();
  const MatrixJets& J = *local.J;
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = J.d(k)(i, j);
        for (int l = 0; l < n; ++l) {
          r += local.gamma(i, k, l) * J.value(l, j) - local.gamma(l, k, j) * J.value(i, l);
        }
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

double complex_structure_residual(const GeometrySpec& geom, const Point& x) {
  geom.require_in_domain(x);
  const Mat J = evaluate_value(require_complex_structure(geom), x);
  return (J * J + Mat::Identity(J.rows(), J.cols())).cwiseAbs().maxCoeff();
}

double hermitian_residual(const GeometrySpec& geom, const Point& x, const Vec& a, const Vec& b) {
  geom.require_in_domain(x);
  const Mat J = evaluate_value(require_complex_structure(geom), x);
  const Mat g = evaluate_value(geom.metric, x);
  return std::abs((J * a).dot(g * (J * b)) - a.dot(g * b));
}

HermitianFrame hermitian_frame(const Mat& metric, const Mat& complex_structure, const Point& base,
                               const std::optional<Vec>& first) {
  const int d = static_cast<int>(metric.rows());
  auto ip = [&](const Vec& a, const Vec& b) { return a.dot(metric * b); };
  HermitianFrame frame;
  frame.base = base;

  auto try_add = [&](Vec v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& f : frame.vectors) v -= ip(v, f) * f;
    const double nn = ip(v, v);
    if (!(nn > 1e-16)) return false;
    v /= std::sqrt(nn);
    Vec jv = complex_structure * v;
    frame.vectors.push_back(v);
    frame.vectors.push_back(std::move(jv));
    return true;
  };

  if (first) {
    const double nn = ip(*first, *first);
    if (!(std::sqrt(std::max(nn, 0.0)) > 1e-12)) {
      throw DegenerateError("hermitian frame: first vector has zero norm");
    }
    try_add(*first);
  }
  for (int c = 0; c < d && static_cast<int>(frame.vectors.size()) < d; ++c) {
    try_add(Vec::Unit(d, c));
  }
  if (static_cast<int>(frame.vectors.size()) != d) {
    throw DegenerateError("hermitian frame: could not complete the basis");
  }
  return frame;
}

HermitianFrame hermitian_frame_at(const GeometrySpec& geom, const Point& x,
                                  const std::optional<Vec>& first) {
  geom.require_in_domain(x);
  const Mat J = evaluate_value(require_complex_structure(geom), x);
  return hermitian_frame(evaluate_value(geom.metric, x), J, x, first);
}

Tensor3 two_form_exterior_derivative(const MatrixField& form, const Point& x) {
  const MatrixJets w = evaluate_jets(form, x);
  const double scale = std::max(1.0, w.value.cwiseAbs().maxCoeff());
  if ((w.value + w.value.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("two-form is not antisymmetric at the evaluation point");
  }
  const int n = static_cast<int>(x.size());
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out(i, j, k) = w.d(i)(j, k) - w.d(j)(i, k) + w.d(k)(i, j);
  return out;
}

MatrixField kahler_form_field(const GeometrySpec& geom) {
  const MatrixField metric = geom.metric;
  const MatrixField J = require_complex_structure(geom);
  return [metric, J](JetSpan x) { return transpose(J(x)) * metric(x); };
}

double normalized_ricci_xi(const LocalGeometry& local, bool zero_at_degenerate) {
  if (!(std::sqrt(local.xi_norm_sq) >= 1e-12)) {
    if (zero_at_degenerate) return 0.0;
    throw DegenerateError("Ric(xi_hat) requested where xi vanishes");
  }
  return -local.dpsi.dot(local.xi.value) / local.xi_norm_sq;
}

double mu_identity_residual(const GeometrySpec& geom, const Point& x) {
  const LocalGeometry local = local_geometry(geom, x);
  const double mu = local.mu();
  return std::abs(1.0 + mu * local.xi_norm_sq - geom.c * mu);
}

Vec lie_bracket(const VectorField& v, const VectorField& w, const Point& x) {
  const VectorJets vj = evaluate_jets(v, x);
  const VectorJets wj = evaluate_jets(w, x);
  return wj.jacobian * vj.value - vj.jacobian * wj.value;
}

VectorField jxi_field(const GeometrySpec& geom) {
  const MatrixField J = require_complex_structure(geom);
  const VectorField xi = geom.xi;
  return [J, xi](JetSpan x) { return J(x) * xi(x); };
}

}  // namespace kdeform
