#include "kdeform/models.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace kdeform {

namespace {

constexpr double kPi = std::numbers::pi;

struct HypersphericalJets {
  JetVector position;  // Cartesian coordinates
  JetMatrix jacobian;  // d(position)/d(t, angles)
};

// x = t * S(a): S_k = prod_{i<k} sin a_i * cos a_k for k < D, S_D = prod_{i<D} sin a_i.
HypersphericalJets hyperspherical(JetSpan x) {
  const int d = static_cast<int>(x.size());
  const int angles = d - 1;
  const Jet2& t = x[0];
  std::vector<Jet2> s(angles), c(angles);
  for (int j = 0; j < angles; ++j) {
    s[j] = sin(x[j + 1]);
    c[j] = cos(x[j + 1]);
  }

  HypersphericalJets out{JetVector(d), JetMatrix(d, d)};
  for (int k = 0; k < d; ++k) {
    // Factor i of component k is sin a_i for i < k and cos a_k at i == k (k < D).
    const int nfactors = (k < angles) ? k + 1 : angles;
    auto factor = [&](int i, bool differentiate) -> Jet2 {
      const bool is_cos = (k < angles && i == k);
      if (!differentiate) return is_cos ? c[i] : s[i];
      return is_cos ? -s[i] : c[i];
    };
    Jet2 sk = 1.0;
    for (int i = 0; i < nfactors; ++i) sk *= factor(i, false);
    out.position[k] = t * sk;
    out.jacobian(k, 0) = sk;
    for (int j = 0; j < angles; ++j) {
      if (j >= nfactors) {
        out.jacobian(k, j + 1) = 0.0;
        continue;
      }
      Jet2 dk = 1.0;
      for (int i = 0; i < nfactors; ++i) dk *= factor(i, i == j);
      out.jacobian(k, j + 1) = t * dk;
    }
  }
  return out;
}

// diag(1, f^2, f^2 sin^2 a_0, f^2 sin^2 a_0 sin^2 a_1, ...)
JetMatrix warped_sphere_metric(JetSpan x, const Jet2& f) {
  const int d = static_cast<int>(x.size());
  JetMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = 0.0;
  g(0, 0) = 1.0;
  Jet2 scale = f * f;
  for (int j = 1; j < d; ++j) {
    g(j, j) = scale;
    if (j < d - 1) scale *= square(sin(x[j]));
  }
  return g;
}

JetMatrix cone_complex_structure(JetSpan x) {
  const int d = static_cast<int>(x.size());
  const HypersphericalJets h = hyperspherical(x);
  const Mat js = standard_complex_structure(d / 2);
  JetMatrix jstd(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) jstd(i, j) = js(i, j);
  // The flat metric pulls back to D^T D, which is diagonal in this chart.
  const JetMatrix pulled = transpose(h.jacobian) * (jstd * h.jacobian);
  const JetMatrix g = warped_sphere_metric(x, x[0]);
  JetMatrix out(d, d);
  for (int i = 0; i < d; ++i) {
    const Jet2 inv = reciprocal(g(i, i));
    for (int j = 0; j < d; ++j) out(i, j) = inv * pulled(i, j);
  }
  return out;
}

bool polar_angles_valid(const Point& p) {
  for (int j = 1; j < p.size() - 1; ++j)
    if (!(p(j) > 0.0 && p(j) < kPi)) return false;
  return true;
}

Box sphere_chart_box(int d, double t_lo, double t_hi) {
  Box box{Vec(d), Vec(d)};
  box.lower(0) = t_lo;
  box.upper(0) = t_hi;
  for (int j = 1; j < d; ++j) {
    const bool azimuth = (j == d - 1);
    box.lower(j) = azimuth ? -kPi + kPolarMargin : kPolarMargin;
    box.upper(j) = azimuth ? kPi - kPolarMargin : kPi - kPolarMargin;
  }
  return box;
}

LeafChart sphere_level_chart(const Point& base) {
  const int d = static_cast<int>(base.size());
  const double t0 = base(0);
  const Point angles = base.tail(d - 1);
  LeafChart chart;
  chart.leaf_dim = d - 1;
  chart.embedding = [t0, angles](JetSpan u) {
    JetVector out(u.size() + 1);
    out[0] = t0;
    for (std::size_t j = 0; j < u.size(); ++j) out[j + 1] = u[j] + angles(static_cast<Eigen::Index>(j));
    return out;
  };
  chart.jacobian = [d](JetSpan) {
    JetMatrix m(d, d - 1);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d - 1; ++j) m(i, j) = (i == j + 1) ? 1.0 : 0.0;
    return m;
  };
  return chart;
}

}  // namespace

WarpingFunction WarpingFunction::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("warping spec needs 'kind:coeffs'");
  const std::string kind = text.substr(0, colon);
  std::vector<double> coeffs;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) coeffs.push_back(std::stod(item));
  if (kind == "affine" && coeffs.size() == 2) return affine(coeffs[0], coeffs[1]);
  if (kind == "quadratic" && coeffs.size() == 3) return quadratic(coeffs[0], coeffs[1], coeffs[2]);
  throw std::invalid_argument("unrecognized warping spec '" + text + "'");
}

Jet2 WarpingFunction::operator()(const Jet2& t) const {
  if (kind == Kind::affine) return a * t + b;
  return a * t * t + b * t + c0;
}

double WarpingFunction::value(double t) const {
  return kind == Kind::affine ? a * t + b : (a * t + b) * t + c0;
}

double WarpingFunction::derivative(double t) const {
  return kind == Kind::affine ? a : 2 * a * t + b;
}

double WarpingFunction::min_on(double lo, double hi) const {
  double m = std::min(value(lo), value(hi));
  if (kind == Kind::quadratic && a != 0.0) {
    const double vertex = -b / (2 * a);
    if (vertex > lo && vertex < hi) m = std::min(m, value(vertex));
  }
  return m;
}

std::string WarpingFunction::describe() const {
  if (kind == Kind::affine) return fmt::format("affine:{},{}", a, b);
  return fmt::format("quadratic:{},{},{}", a, b, c0);
}

Mat standard_complex_structure(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    J(2 * k + 1, 2 * k) = 1.0;
    J(2 * k, 2 * k + 1) = -1.0;
  }
  return J;
}

GeometrySpec build_flat_ball(int n, double c) {
  if (n < 1) throw std::invalid_argument("flat_ball needs n >= 1");
  if (!(c > kDomainMargin)) throw std::invalid_argument("flat_ball needs c > domain margin");
  const int d = 2 * n;
  const Mat js = standard_complex_structure(n);

  GeometrySpec g;
  g.name = fmt::format("flat_ball(n={},c={})", n, c);
  g.dim = d;
  g.c = c;
  g.metric = [d](JetSpan) { return JetMatrix::identity(d); };
  g.complex_structure = [js, d](JetSpan) {
    JetMatrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = js(i, j);
    return m;
  };
  g.xi = [](JetSpan x) { return JetVector(x.begin(), x.end()); };
  g.in_domain = [d, c](const Point& p) { return p.size() == d && p.squaredNorm() < c - kDomainMargin; };
  const double half = 0.9 * std::sqrt(c);
  g.sample_box = Box{Vec::Constant(d, -half), Vec::Constant(d, half)};
  g.leaf_chart = [](const Point& base) { return sphere_projection_chart(base); };
  return g;
}

GeometrySpec build_cone_round_sphere(int m, double c, const std::optional<Box>& sample_box) {
  if (m < 2) throw std::invalid_argument("cone_round_sphere needs sphere dimension 2m-1 >= 3");
  if (!(c > kDomainMargin)) throw std::invalid_argument("cone_round_sphere needs c > domain margin");
  const int d = 2 * m;
  const double root_c = std::sqrt(c);

  GeometrySpec g;
  g.name = fmt::format("cone_round_sphere(m={},c={})", m, c);
  g.dim = d;
  g.c = c;
  g.metric = [](JetSpan x) { return warped_sphere_metric(x, x[0]); };
  g.complex_structure = [](JetSpan x) { return cone_complex_structure(x); };
  g.xi = [d](JetSpan x) {
    JetVector v(d, Jet2(0.0));
    v[0] = x[0];
    return v;
  };
  g.in_domain = [d, c](const Point& p) {
    return p.size() == d && p(0) > 0.0 && p(0) * p(0) < c - kDomainMargin && polar_angles_valid(p);
  };
  g.sample_box = sample_box.value_or(sphere_chart_box(d, 0.1 * root_c, 0.9 * root_c));
  for (int j = 1; j < d - 1; ++j) {
    if (g.sample_box.lower(j) <= 0.0 || g.sample_box.upper(j) >= kPi) {
      throw std::invalid_argument("cone chart box touches a polar coordinate singularity");
    }
  }
  if (g.sample_box.lower(0) <= 0.0) throw std::invalid_argument("cone chart box reaches the apex");
  g.leaf_chart = [](const Point& base) { return sphere_level_chart(base); };
  return g;
}

GeometrySpec build_warped_generic(const WarpingFunction& f, int sphere_dim, double t_min,
                                  double t_max, double c, bool with_cone_complex_structure) {
  if (sphere_dim < 1) throw std::invalid_argument("warped_generic needs sphere dimension >= 1");
  if (!(t_min < t_max)) throw std::invalid_argument("warped_generic needs t_min < t_max");
  if (!(f.min_on(t_min, t_max) > 0.0)) {
    throw std::invalid_argument("warping function " + f.describe() + " is not positive on the interval");
  }
  const int d = sphere_dim + 1;
  if (with_cone_complex_structure && d % 2 != 0) {
    throw std::invalid_argument("cone complex structure needs an odd-dimensional sphere");
  }

  GeometrySpec g;
  g.name = fmt::format("warped_generic(f={},k={},c={})", f.describe(), sphere_dim, c);
  g.dim = d;
  g.c = c;
  g.metric = [f](JetSpan x) { return warped_sphere_metric(x, f(x[0])); };
  if (with_cone_complex_structure) {
    g.complex_structure = [](JetSpan x) { return cone_complex_structure(x); };
  }
  g.xi = [f, d](JetSpan x) {
    JetVector v(d, Jet2(0.0));
    v[0] = f(x[0]);
    return v;
  };
  g.in_domain = [f, d, c, t_min, t_max](const Point& p) {
    if (p.size() != d || !(p(0) >= t_min && p(0) <= t_max)) return false;
    const double fv = f.value(p(0));
    return fv > 0.0 && fv * fv < c - kDomainMargin && polar_angles_valid(p);
  };
  g.sample_box = sphere_chart_box(d, t_min, t_max);
  g.leaf_chart = [](const Point& base) { return sphere_level_chart(base); };
  return g;
}

Point cone_to_cartesian(const Point& chart_point) {
  const HypersphericalJets h =
      hyperspherical(constant_point({chart_point.data(), static_cast<std::size_t>(chart_point.size())}));
  Point out(chart_point.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = h.position[i].value();
  return out;
}

Mat cone_to_cartesian_jacobian(const Point& chart_point) {
  return hyperspherical(constant_point({chart_point.data(), static_cast<std::size_t>(chart_point.size())}))
      .jacobian.value();
}

Point cartesian_to_cone(const Point& cartesian) {
  const int d = static_cast<int>(cartesian.size());
  Point out(d);
  out(0) = cartesian.norm();
  if (out(0) == 0.0) throw DegenerateError("cone chart undefined at the apex");
  for (int j = 0; j < d - 1; ++j) {
    const double tail = cartesian.tail(d - j - 1).norm();
    if (j < d - 2) {
      out(j + 1) = std::atan2(tail, cartesian(j));
    } else {
      out(j + 1) = std::atan2(cartesian(d - 1), cartesian(d - 2));
    }
  }
  return out;
}

LeafChart sphere_projection_chart(const Point& base) {
  const int d = static_cast<int>(base.size());
  const double r = base.norm();
  if (!(r > 1e-12)) throw DegenerateError("sphere chart through the origin");
  Eigen::HouseholderQR<Mat> qr(base);
  const Mat q = qr.householderQ();
  const Mat tangent = q.rightCols(d - 1);

  LeafChart chart;
  chart.leaf_dim = d - 1;
  chart.embedding = [base, tangent, r, d](JetSpan u) {
    JetVector v(d);
    for (int i = 0; i < d; ++i) {
      Jet2 acc = base(i);
      for (int a = 0; a < d - 1; ++a) acc += tangent(i, a) * u[a];
      v[i] = acc;
    }
    const Jet2 scale = r * reciprocal(sqrt(dot(v, v)));
    for (auto& e : v) e *= scale;
    return v;
  };
  chart.jacobian = [base, tangent, r, d](JetSpan u) {
    JetVector v(d);
    for (int i = 0; i < d; ++i) {
      Jet2 acc = base(i);
      for (int a = 0; a < d - 1; ++a) acc += tangent(i, a) * u[a];
      v[i] = acc;
    }
    const Jet2 inv_norm = reciprocal(sqrt(dot(v, v)));
    const Jet2 inv_norm3 = inv_norm * inv_norm * inv_norm;
    // r (I/|v| - v v^T/|v|^3) T
    JetMatrix out(d, d - 1);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d - 1; ++a) {
        Jet2 vt;
        for (int k = 0; k < d; ++k) vt += v[k] * tangent(k, a);
        out(i, a) = r * (tangent(i, a) * inv_norm - v[i] * vt * inv_norm3);
      }
    return out;
  };
  return chart;
}

LeafChart affine_leaf_chart(const Point& base, const Mat& basis) {
  const int d = static_cast<int>(base.size());
  const int k = static_cast<int>(basis.cols());
  LeafChart chart;
  chart.leaf_dim = k;
  chart.embedding = [base, basis, d, k](JetSpan u) {
    JetVector out(d);
    for (int i = 0; i < d; ++i) {
      Jet2 acc = base(i);
      for (int a = 0; a < k; ++a) acc += basis(i, a) * u[a];
      out[i] = acc;
    }
    return out;
  };
  chart.jacobian = [basis, d, k](JetSpan) {
    JetMatrix m(d, k);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < k; ++a) m(i, a) = basis(i, a);
    return m;
  };
  return chart;
}

std::string ModelParams::describe() const {
  if (kind == "flat_ball") return fmt::format("flat_ball(n={},c={})", n, c);
  if (kind == "cone_round_sphere") return fmt::format("cone_round_sphere(m={},c={})", n, c);
  return fmt::format("warped_generic(f={},k={},t=[{},{}],c={}{})", warping.describe(), sphere_dim,
                     t_min, t_max, c, cone_complex_structure ? ",cone_J" : "");
}

std::vector<std::string> model_names() { return {"flat_ball", "cone_round_sphere", "warped_generic"}; }

GeometrySpec build_model(const ModelParams& params) {
  if (params.kind == "flat_ball") return build_flat_ball(params.n, params.c);
  if (params.kind == "cone_round_sphere") return build_cone_round_sphere(params.n, params.c);
  if (params.kind == "warped_generic") {
    return build_warped_generic(params.warping, params.sphere_dim, params.t_min, params.t_max,
                                params.c, params.cone_complex_structure);
  }
  throw std::invalid_argument("unknown model '" + params.kind + "'");
}

}  // namespace kdeform
