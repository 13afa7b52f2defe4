#include "kdeform/deformation.hpp"
#include "kdeform/sampling.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace kdeform {

namespace {

const MatrixField& require_J(const GeometrySpec& geom) {
  if (!geom.complex_structure) {
    throw PreconditionError("deformation of '" + geom.name + "' needs a complex structure");
  }
  return *geom.complex_structure;
}

Jet2 mu_from(const Jet2& xi_sq, double c) {
  if (!(xi_sq.value() < c)) throw DomainError("|xi|^2 >= c: deformed metric undefined");
  return reciprocal(c - xi_sq);
}

struct ThetaJets {
  JetMatrix g;
  JetMatrix J;
  JetVector theta_xi;
  JetVector theta_jxi;
  Jet2 mu;
};

ThetaJets theta_jets(const GeometrySpec& base, const MatrixField& J_field, JetSpan x) {
  ThetaJets t;
  t.g = base.metric(x);
  t.J = J_field(x);
  const JetVector xi = base.xi(x);
  t.theta_xi = t.g * xi;
  t.theta_jxi = t.g * (t.J * xi);
  t.mu = mu_from(dot(xi, t.theta_xi), base.c);
  return t;
}

}  // namespace

GeometrySpec DeformedGeometry::as_geometry() const {
  GeometrySpec out = base;
  out.name = base.name + "~";
  out.metric = gtilde;
  return out;
}

DeformedGeometry deform(const GeometrySpec& geom) {
  const MatrixField J_field = require_J(geom);
  DeformedGeometry dg;
  dg.base = geom;
  const GeometrySpec base = geom;

  dg.mu = [base](JetSpan x) {
    const JetVector xi = base.xi(x);
    return mu_from(dot(xi, base.metric(x) * xi), base.c);
  };

  dg.gtilde = [base, J_field](JetSpan x) {
    const ThetaJets t = theta_jets(base, J_field, x);
    const int d = t.g.rows();
    const Jet2 mu2 = t.mu * t.mu;
    JetMatrix out(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        out(i, j) = t.mu * t.g(i, j) +
                    mu2 * (t.theta_xi[i] * t.theta_xi[j] + t.theta_jxi[i] * t.theta_jxi[j]);
        out(j, i) = out(i, j);
      }
    return out;
  };

  dg.omega_tilde = [base, J_field](JetSpan x) {
    const ThetaJets t = theta_jets(base, J_field, x);
    const int d = t.g.rows();
    const JetMatrix omega = transpose(t.J) * t.g;
    const Jet2 mu2 = t.mu * t.mu;
    JetMatrix out(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        out(i, j) = t.mu * omega(i, j) +
                    mu2 * (t.theta_xi[i] * t.theta_jxi[j] - t.theta_jxi[i] * t.theta_xi[j]);
      }
    return out;
  };
  return dg;
}

DeformedPoint deformed_point(const DeformedGeometry& dg, const Point& x) {
  DeformedPoint p;
  p.local = local_geometry(dg.base, x);
  if (!p.local.J) throw PreconditionError("deformed point needs a complex structure");
  p.base_curv = curvature(p.local.g);
  p.gtilde = evaluate_jets(dg.gtilde, x);
  p.tilde_curv = curvature(p.gtilde);
  p.J = p.local.J->value;
  p.mu = p.local.mu();
  p.psi = p.local.psi;
  p.r = normalized_ricci_xi(p.local);
  return p;
}

Mat kahler_form_tilde(const DeformedGeometry& dg, const Point& x) {
  dg.base.require_in_domain(x);
  return evaluate_value(dg.omega_tilde, x);
}

Mat kahler_form_tilde_from_metric(const DeformedGeometry& dg, const Point& x) {
  dg.base.require_in_domain(x);
  const Mat J = evaluate_value(require_J(dg.base), x);
  return J.transpose() * evaluate_value(dg.gtilde, x);
}

double dmu_identity_residual(const DeformedGeometry& dg, const Point& x) {
  const LocalGeometry local = local_geometry(dg.base, x);
  const Jet2 mu = dg.mu(seed_point({x.data(), static_cast<std::size_t>(x.size())}));
  const double m = mu.value();
  double worst = 0.0;
  for (int i = 0; i < local.dim(); ++i) {
    const double lhs = mu.grad(i);
    const double rhs = 2.0 * local.psi * m * m * local.theta_xi(i);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
  return worst;
}

double dtheta_jxi_identity_residual(const GeometrySpec& geom, const Point& x) {
  const MatrixField J_field = require_J(geom);
  const LocalGeometry local = local_geometry(geom, x);
  const GeometrySpec base = geom;
  const VectorField theta_jxi = [base, J_field](JetSpan p) {
    return base.metric(p) * (J_field(p) * base.xi(p));
  };
  const VectorJets th = evaluate_jets(theta_jxi, x);
  const Mat omega = local.J->value.transpose() * local.g.value;
  const int d = local.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double dtheta = th.jacobian(j, i) - th.jacobian(i, j);
      worst = std::max(worst, std::abs(dtheta - 2.0 * local.psi * omega(i, j)));
    }
  return worst;
}

Vec nabla_tilde(const DeformedPoint& p, const Vec& x, const Vec& y, const Mat& dy) {
  const LocalGeometry& L = p.local;
  const Vec base = covariant_derivative(L.gamma, x, y, dy);
  const Vec correction = L.theta_xi.dot(x) * y + L.theta_xi.dot(y) * x +
                         L.theta_jxi.dot(x) * (p.J * y) + L.theta_jxi.dot(y) * (p.J * x);
  return base + p.psi * p.mu * correction;
}

Tensor3 christoffel_tilde_closed_form(const DeformedPoint& p) {
  const int d = p.dim();
  const LocalGeometry& L = p.local;
  const double s = p.psi * p.mu;
  Tensor3 out(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        double v = L.gamma(i, k, j);
        v += s * ((i == j ? L.theta_xi(k) : 0.0) + (i == k ? L.theta_xi(j) : 0.0) +
                  L.theta_jxi(k) * p.J(i, j) + L.theta_jxi(j) * p.J(i, k));
        out(i, k, j) = v;
      }
  return out;
}

namespace {

double scalar_obstruction(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  double off = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) off = std::max(off, std::abs(m(i, j)));
  const Vec diag = m.diagonal();
  return std::max(off, 0.5 * (diag.maxCoeff() - diag.minCoeff()));
}

template <class Nabla>
double obstruction(const DeformedPoint& p, Nabla nabla) {
  const LocalGeometry& L = p.local;
  if (!(std::sqrt(L.xi_norm_sq) >= 1e-12)) throw DegenerateError("xi vanishes at the point");
  const int d = p.dim();
  Mat A(d, d);
  for (int k = 0; k < d; ++k) A.col(k) = nabla(Vec::Unit(d, k));
  const Mat E = orthonormal_frame(L.g.value);
  return scalar_obstruction(E.inverse() * A * E);
}

}  // namespace

double xi_conformal_obstruction_tilde(const DeformedPoint& p) {
  return obstruction(p, [&](const Vec& v) {
    return nabla_tilde(p, v, p.local.xi.value, p.local.xi.jacobian);
  });
}

double xi_conformal_obstruction_base(const DeformedPoint& p) {
  return obstruction(p, [&](const Vec& v) { return p.local.nabla_xi(v); });
}

Vec riemann_tilde_closed_form(const DeformedPoint& p, const Vec& X, const Vec& Y, const Vec& Z) {
  const LocalGeometry& L = p.local;
  auto a = [&](const Vec& v) { return L.theta_xi.dot(v); };
  auto b = [&](const Vec& v) { return L.theta_jxi.dot(v); };
  auto ip = [&](const Vec& u, const Vec& v) { return L.inner(u, v); };
  const Vec JX = p.J * X, JY = p.J * Y, JZ = p.J * Z;
  const double mu = p.mu, psi2 = p.psi * p.psi;

  Vec out = riemann_apply(p.base_curv, X, Y, Z);

  out -= p.r * mu *
         (a(X) * a(Z) * Y + a(X) * b(Y) * JZ + a(X) * b(Z) * JY - a(Y) * a(Z) * X -
          a(Y) * b(X) * JZ - a(Y) * b(Z) * JX);

  out += psi2 * mu *
         (ip(X, Z) * Y + 2.0 * ip(JX, Y) * JZ + ip(JX, Z) * JY - ip(Y, Z) * X - ip(JY, Z) * JX);

  out += psi2 * mu * mu *
         (a(X) * a(Z) * Y - a(Y) * a(Z) * X + a(X) * b(Z) * JY - a(Y) * b(Z) * JX +
          b(X) * b(Z) * Y - b(Y) * b(Z) * X - b(X) * a(Z) * JY + b(Y) * a(Z) * JX +
          2.0 * a(X) * b(Y) * JZ - 2.0 * a(Y) * b(X) * JZ);
  return out;
}

HolomorphicTilde holomorphic_sectional_tilde_closed_form(const DeformedPoint& p, const Vec& x) {
  const double nn = p.inner(x, x);
  if (!(nn > 1e-24)) throw DegenerateError("holomorphic plane of a zero vector");
  HolomorphicTilde out;
  Vec X = x;
  if (std::abs(nn - 1.0) > 1e-12) {
    X /= std::sqrt(nn);
    out.normalized = true;
    out.note = "direction rescaled to g-unit length";
  }
  const double K = holomorphic_sectional(p.base_curv, p.J, X);
  const double ax = p.local.theta_xi.dot(X), bx = p.local.theta_jxi.dot(X);
  const double A = ax * ax + bx * bx;
  const double mu = p.mu;
  const double gxx = mu + mu * mu * A;
  out.value = (mu * K + mu * mu * p.r * A) / (gxx * gxx) + 2.0 * mu * p.r * A / gxx -
              4.0 * p.psi * p.psi;
  return out;
}

DecayBounds decay_bounds(const DeformedPoint& p, const Vec& x, double tol) {
  const double nn = p.inner(x, x);
  if (!(nn > 1e-24)) throw DegenerateError("holomorphic plane of a zero vector");
  const Vec X = x / std::sqrt(nn);
  const double c = p.local.c;
  DecayBounds out;
  out.K = holomorphic_sectional(p.base_curv, p.J, X);
  out.K_tilde = holomorphic_sectional(p.tilde_curv, p.J, X);
  const double psi2 = p.psi * p.psi;
  out.general = c * out.K + 2.0 * c * p.r - 4.0 * psi2;
  out.satisfied = out.K_tilde <= out.general + tol;
  if (std::abs(p.local.theta_xi.dot(X)) < 1e-10 && std::abs(p.local.theta_jxi.dot(X)) < 1e-10) {
    out.orthogonal = c * out.K - 4.0 * psi2;
    out.satisfied = out.satisfied && out.K_tilde <= *out.orthogonal + tol;
  }
  return out;
}

RicciTildeTerms ricci_tilde_closed_form(const DeformedPoint& p, const Vec& X, const Vec& Y) {
  const LocalGeometry& L = p.local;
  const CurvatureData& R = p.base_curv;
  const Vec& xi = L.xi.value;
  const Vec& jxi = L.jxi;
  const double c = L.c, mu = p.mu, r = p.r, s = L.xi_norm_sq;
  const int n = p.n_complex();
  auto ip = [&](const Vec& u, const Vec& v) { return L.inner(u, v); };
  auto ric = [&](const Vec& u, const Vec& v) { return u.dot(R.ricci * v); };
  const double aX = ip(X, xi), aY = ip(Y, xi), bX = ip(X, jxi), bY = ip(Y, jxi);
  const Vec Rxixi = riemann_apply(R, X, xi, xi);
  const Vec Rjxijxi = riemann_apply(R, X, jxi, jxi);

  RicciTildeTerms t;
  t.t1 = ric(X, Y);
  t.t2 = -(ip(Rxixi, Y) + ip(Rjxijxi, Y)) / c;
  t.t3 = r / c * (aX * aY + s * ip(X, Y) + bX * bY + 2.0 * mu * s * (aX * aY + bX * bY));
  t.t4 = mu * aY * ric(X, xi) + mu * bY * ric(X, jxi);
  t.t5 = -mu / c * (ip(Rxixi, jxi) * bY + ip(Rjxijxi, xi) * aY);
  t.t6 = -2.0 * (n + 1) * p.psi * p.psi * mu * (ip(X, Y) + mu * (aX * aY + bX * bY));
  return t;
}

double einstein_residual(const DeformedPoint& p) {
  const double base_ricci = p.base_curv.ricci.cwiseAbs().maxCoeff();
  if (base_ricci > 1e-6 * std::max(1.0, p.base_curv.riemann.max_abs())) {
    throw PreconditionError("base metric is not Ricci-flat at the sample point");
  }
  const int n = p.n_complex();
  const Mat& gt = p.gtilde.value;
  return (p.tilde_curv.ricci + 2.0 * (n + 1) * gt).norm() / gt.norm();
}

double einstein_residual(const DeformedGeometry& dg, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const Point& x : points) worst = std::max(worst, einstein_residual(deformed_point(dg, x)));
  return worst;
}

double metric_compatibility_residual(const DeformedPoint& p) {
  const int d = p.dim();
  const Tensor3 G = christoffel_tilde_closed_form(p);
  const Mat& gt = p.gtilde.value;
  double scale = 1.0;
  for (int k = 0; k < d; ++k) scale = std::max(scale, p.gtilde.d(k).cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double v = p.gtilde.d(k)(i, j);
        for (int l = 0; l < d; ++l) v -= G(l, k, i) * gt(l, j) + G(l, k, j) * gt(i, l);
        worst = std::max(worst, std::abs(v));
      }
  return worst / scale;
}

double gtilde_xi_identity_residual(const DeformedPoint& p) {
  const LocalGeometry& L = p.local;
  const int d = p.dim();
  const double cmu2 = L.c * p.mu * p.mu;
  const Vec& xi = L.xi.value;
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    const Vec e = Vec::Unit(d, k);
    worst = std::max(worst, scaled_error(p.inner_tilde(e, xi), cmu2 * L.theta_xi(k)));
  }
  return std::max(worst, scaled_error(p.inner_tilde(xi, xi), cmu2 * L.xi_norm_sq));
}

Curve straight_segment(const Point& a, const Point& b) {
  return [a, b](const Jet2& t) {
    JetVector out(static_cast<std::size_t>(a.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = a(i) + (b(i) - a(i)) * t;
    return out;
  };
}

double curve_length_tilde(const DeformedGeometry& dg, const Curve& curve, double t0, double t1,
                          double abs_tol) {
  if (t0 == t1) return 0.0;
  auto speed = [&](double t) {
    const double tv[1] = {t};
    const JetVector gamma = curve(Jet2::variable(tv, 0));
    const int d = static_cast<int>(gamma.size());
    Point pos(d);
    Vec vel(d);
    for (int i = 0; i < d; ++i) {
      pos(i) = gamma[i].value();
      vel(i) = gamma[i].dim() > 0 ? gamma[i].grad(0) : 0.0;
    }
    dg.base.require_in_domain(pos);
    return std::sqrt(std::max(0.0, vel.dot(evaluate_value(dg.gtilde, pos) * vel)));
  };
  using Rule = boost::math::quadrature::gauss<double, 16>;
  auto panel = [&](double a, double b) { return Rule::integrate(speed, a, b); };

  std::function<double(double, double, double, double, int)> refine =
      [&](double a, double b, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double left = panel(a, m), right = panel(m, b);
        if (std::abs(left + right - whole) <= tol || depth >= 50) return left + right;
        return refine(a, m, left, 0.5 * tol, depth + 1) + refine(m, b, right, 0.5 * tol, depth + 1);
      };
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  return refine(lo, hi, panel(lo, hi), abs_tol, 0);
}

double length_lower_bound(double c, double xi_sq_start, double xi_sq_end) {
  return 0.5 * std::abs(std::log(c - xi_sq_start) - std::log(c - xi_sq_end));
}

}  // namespace kdeform
