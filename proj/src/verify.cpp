#include "kdeform/verify.hpp"

#include "kdeform/deformation.hpp"
#include "kdeform/sampling.hpp"
#include "kdeform/submanifold.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace kdeform {

namespace {

CheckSpec spec(std::string id, std::string anchor, std::string statement, OrderClass order,
               double tol, CheckMode mode = CheckMode::gating) {
  return CheckSpec{std::move(id), std::move(anchor), std::move(statement), order, mode, tol};
}

struct Context {
  const RunConfig& cfg;
  GeometrySpec geom;
  std::optional<DeformedGeometry> dg;
  int n = 0;

  [[nodiscard]] bool has_J() const { return geom.has_complex_structure(); }
  [[nodiscard]] bool has_chart() const { return static_cast<bool>(geom.leaf_chart); }
  [[nodiscard]] int n_complex() const { return geom.n_complex(); }
};

struct Outcome {
  std::vector<double> residuals;
  std::vector<std::string> notes;
  std::optional<std::string> skip;
};

Outcome skipped(std::string why) {
  Outcome o;
  o.skip = std::move(why);
  return o;
}

using CheckFn = std::function<Outcome(const Context&, Sampler&)>;

double rel(double diff, double scale) { return std::abs(diff) / std::max(1.0, std::abs(scale)); }
double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Vec g_unit(const LocalGeometry& L, const Vec& v) { return v / std::sqrt(L.inner(v, v)); }

// Random leaf-tangent vector at x: coefficients over a g-orthonormal leaf basis.
Vec random_tangent(const Context& ctx, const Point& x, Sampler& s) {
  const LeafFrame f = leaf_frame(ctx.geom, ctx.geom.metric, MetricChoice::base, x, LeafKind::xi_perp);
  Vec v = Vec::Zero(x.size());
  for (const Vec& t : f.tangent) v += s.uniform(-1.0, 1.0) * t;
  return v;
}

template <class F>
Outcome per_sample(const Context& ctx, Sampler& s, F f) {
  Outcome o;
  for (int i = 0; i < ctx.n; ++i) o.residuals.push_back(f(s.point_in(ctx.geom)));
  return o;
}

const char* kNoJ = "model carries no complex structure";
const char* kNoChart = "model has no leaf chart";

std::map<std::string, CheckFn> build_check_functions() {
  std::map<std::string, CheckFn> fns;

  fns["complex_structure"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) { return complex_structure_residual(ctx.geom, x); });
  };

  fns["hermitian"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const Vec a = s.coefficients(ctx.geom.dim), b = s.coefficients(ctx.geom.dim);
      const double gab = a.dot(evaluate_value(ctx.geom.metric, x) * b);
      return hermitian_residual(ctx.geom, x, a, b) / std::max(1.0, std::abs(gab));
    });
  };

  fns["closed_conformal"] = [](const Context& ctx, Sampler& s) {
    return per_sample(ctx, s, [&](const Point& x) { return closed_conformal_residual_max(ctx.geom, x); });
  };

  fns["kahler_parallel_J"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) { return kahler_residual(ctx.geom, x); });
  };

  fns["mu_identity"] = [](const Context& ctx, Sampler& s) {
    return per_sample(ctx, s, [&](const Point& x) { return mu_identity_residual(ctx.geom, x); });
  };

  fns["dmu_identity"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) { return dmu_identity_residual(*ctx.dg, x); });
  };

  fns["dtheta_Jxi_identity"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) { return dtheta_jxi_identity_residual(ctx.geom, x); });
  };

  fns["kahler_form_two_routes"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const Mat a = kahler_form_tilde(*ctx.dg, x), b = kahler_form_tilde_from_metric(*ctx.dg, x);
      return max_abs(Mat(a - b)) / std::max(1.0, max_abs(b));
    });
  };

  fns["kahler_closure"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    const MatrixField omega = kahler_form_field(ctx.dg->as_geometry());
    return per_sample(ctx, s, [&](const Point& x) {
      const MatrixJets w = evaluate_jets(omega, x);
      double scale = 1.0;
      for (int k = 0; k < w.dim; ++k) scale = std::max(scale, max_abs(w.d(k)));
      return two_form_exterior_derivative(omega, x).max_abs() / scale;
    });
  };

  fns["gtilde_hermitian"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    const GeometrySpec tilde = ctx.dg->as_geometry();
    return per_sample(ctx, s, [&](const Point& x) {
      const Vec a = s.coefficients(ctx.geom.dim), b = s.coefficients(ctx.geom.dim);
      const double gab = a.dot(evaluate_value(tilde.metric, x) * b);
      return hermitian_residual(tilde, x, a, b) / std::max(1.0, std::abs(gab));
    });
  };

  fns["connection_formula"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const DeformedPoint p = deformed_point(*ctx.dg, x);
      const Tensor3 closed = christoffel_tilde_closed_form(p);
      const Tensor3& num = p.tilde_curv.gamma;
      const int d = p.dim();
      double worst = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c) worst = std::max(worst, std::abs(closed(a, b, c) - num(a, b, c)));
      return worst / std::max(1.0, num.max_abs());
    });
  };

  fns["metric_compatibility"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      return metric_compatibility_residual(deformed_point(*ctx.dg, x));
    });
  };

  fns["gtilde_xi_identities"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      return gtilde_xi_identity_residual(deformed_point(*ctx.dg, x));
    });
  };

  fns["curvature_formula"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const DeformedPoint p = deformed_point(*ctx.dg, x);
      const int d = p.dim();
      const Vec X = s.coefficients(d), Y = s.coefficients(d), Z = s.coefficients(d);
      const Vec num = riemann_apply(p.tilde_curv, X, Y, Z);
      const Vec closed = riemann_tilde_closed_form(p, X, Y, Z);
      return max_abs(Vec(closed - num)) / std::max(1.0, max_abs(num));
    });
  };

  fns["holomorphic_sectional_formula"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const DeformedPoint p = deformed_point(*ctx.dg, x);
      const Vec X = g_unit(p.local, s.coefficients(p.dim()));
      const double num = holomorphic_sectional(p.tilde_curv, p.J, X);
      const double closed = holomorphic_sectional_tilde_closed_form(p, X).value;
      // Absolute agreement for |K~| <= 10, relative beyond.
      return std::abs(closed - num) / std::max(1.0, std::abs(num) / 10.0);
    });
  };

  fns["decay_bounds"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o;
    int orthogonal = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ctx.n; ++i) {
      const Point x = s.point_in(ctx.geom);
      const DeformedPoint p = deformed_point(*ctx.dg, x);
      std::vector<Vec> dirs{s.coefficients(p.dim())};
      if (p.n_complex() >= 2 && p.local.xi_norm_sq > 1e-24) {
        dirs.push_back(hermitian_frame(p.local.g.value, p.J, x, p.local.xi.value).vectors[2]);
      }
      double worst = 0.0;
      for (const Vec& X : dirs) {
        const DecayBounds b = decay_bounds(p, X);
        double bound = b.general;
        if (b.orthogonal) {
          ++orthogonal;
          bound = std::min(bound, *b.orthogonal);
        }
        min_margin = std::min(min_margin, bound - b.K_tilde);
        worst = std::max(worst, std::max(0.0, b.K_tilde - bound));
      }
      o.residuals.push_back(worst);
    }
    o.notes.push_back(fmt::format("orthogonal-case directions: {}", orthogonal));
    o.notes.push_back(fmt::format("smallest margin bound - K~: {:.6e}", min_margin));
    return o;
  };

  fns["einstein"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o;
    try {
      for (int i = 0; i < ctx.n; ++i) {
        o.residuals.push_back(einstein_residual(deformed_point(*ctx.dg, s.point_in(ctx.geom))));
      }
    } catch (const PreconditionError& e) {
      return skipped(e.what());
    }
    return o;
  };

  fns["ricci_closed_form"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o;
    std::array<double, 6> term_max{};
    for (int i = 0; i < ctx.n; ++i) {
      const DeformedPoint p = deformed_point(*ctx.dg, s.point_in(ctx.geom));
      const Vec X = s.coefficients(p.dim()), Y = s.coefficients(p.dim());
      const RicciTildeTerms t = ricci_tilde_closed_form(p, X, Y);
      const double oracle = X.dot(ricci_frame_trace(p.tilde_curv) * Y);
      const std::array<double, 6> terms{t.t1, t.t2, t.t3, t.t4, t.t5, t.t6};
      for (std::size_t k = 0; k < terms.size(); ++k) term_max[k] = std::max(term_max[k], std::abs(terms[k]));
      o.residuals.push_back(rel(t.total() - oracle, oracle));
    }
    o.notes.push_back(fmt::format("max |term| T1..T6: {:.3e} {:.3e} {:.3e} {:.3e} {:.3e} {:.3e}",
                                  term_max[0], term_max[1], term_max[2], term_max[3], term_max[4],
                                  term_max[5]));
    return o;
  };

  fns["riemann_symmetries"] = [](const Context& ctx, Sampler& s) {
    return per_sample(ctx, s, [&](const Point& x) {
      double worst = riemann_symmetry_residuals(curvature(ctx.geom.metric, x)).max();
      if (ctx.dg) worst = std::max(worst, riemann_symmetry_residuals(curvature(ctx.dg->gtilde, x)).max());
      return worst;
    });
  };

  fns["ricci_two_routes"] = [](const Context& ctx, Sampler& s) {
    return per_sample(ctx, s, [&](const Point& x) {
      auto residual = [](const CurvatureData& c) {
        return max_abs(Mat(ricci_frame_trace(c) - c.ricci)) / std::max(1.0, c.riemann.max_abs());
      };
      double worst = residual(curvature(ctx.geom.metric, x));
      if (ctx.dg) worst = std::max(worst, residual(curvature(ctx.dg->gtilde, x)));
      return worst;
    });
  };

  fns["grad_psi"] = [](const Context& ctx, Sampler& s) {
    Outcome o;
    double normalization_gap = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
      const Point x = s.point_in(ctx.geom);
      const LocalGeometry L = local_geometry(ctx.geom, x);
      const double r = normalized_ricci_xi(L);
      const Vec grad = L.g_inv * L.dpsi;
      o.residuals.push_back(max_abs(Vec(grad + r * L.xi.value)) / std::max(1.0, max_abs(grad)));
      const double candidate = ricci_direction(curvature(L.g), L.xi.value, true);
      normalization_gap = std::max(normalization_gap, std::abs(candidate - r));
    }
    o.notes.push_back(fmt::format("max |Ric(xi_hat,xi_hat)/(d-1) - r|: {:.3e}", normalization_gap));
    return o;
  };

  fns["mu_derivatives"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) {
      const LocalGeometry L = local_geometry(ctx.geom, x);
      const Jet2 mu = ctx.dg->mu(seed_point({x.data(), static_cast<std::size_t>(x.size())}));
      Vec dmu(L.dim());
      for (int k = 0; k < L.dim(); ++k) dmu(k) = mu.grad(k);
      const Vec X = s.coefficients(L.dim());
      const double m2 = 2.0 * L.psi * mu.value() * mu.value();
      const double xmu = dmu.dot(X), jxmu = dmu.dot(L.apply_J(X));
      return std::max(rel(xmu - m2 * L.theta_xi.dot(X), xmu), rel(jxmu + m2 * L.theta_jxi.dot(X), jxmu));
    });
  };

  fns["xi_not_closed_conformal_tilde"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    if (ctx.n_complex() < 2) {
      return skipped("complex dimension 1: xi and Jxi span the tangent space, so xi stays closed conformal");
    }
    Outcome o;
    double control = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
      const DeformedPoint p = deformed_point(*ctx.dg, s.point_in(ctx.geom));
      o.residuals.push_back(xi_conformal_obstruction_tilde(p));
      control = std::max(control, xi_conformal_obstruction_base(p));
    }
    o.notes.push_back(fmt::format("base connection control max: {:.3e}", control));
    return o;
  };

  fns["totally_geodesic_sigma"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    if (ctx.n_complex() < 2) return skipped("complex dimension 1: the leaf is open in M");
    return per_sample(ctx, s, [&](const Point& x) {
      return std::max(*totally_geodesic_residual(ctx.geom, ctx.dg->gtilde, x),
                      *totally_geodesic_residual(ctx.geom, ctx.geom.metric, x));
    });
  };

  fns["killing_jxi"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o;
    double control = std::numeric_limits<double>::infinity();
    const VectorField jxi = jxi_field(ctx.geom);
    for (int i = 0; i < ctx.n; ++i) {
      const Point x = s.point_in(ctx.geom);
      o.residuals.push_back(std::max(killing_residual(jxi, ctx.geom.metric, ctx.geom, x),
                                     killing_residual(jxi, ctx.dg->gtilde, ctx.geom, x)));
      control = std::min(control, killing_residual(ctx.geom.xi, ctx.dg->gtilde, ctx.geom, x));
    }
    o.notes.push_back(fmt::format("negative control V = xi under g~, min residual: {:.3e}", control));
    return o;
  };

  fns["xi_jxi_bracket"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    return per_sample(ctx, s, [&](const Point& x) { return xi_jxi_bracket_residual(ctx.geom, x); });
  };

  fns["umbilicity"] = [](const Context& ctx, Sampler& s) {
    return per_sample(ctx, s, [&](const Point& x) {
      const LocalGeometry L = local_geometry(ctx.geom, x);
      const Vec X = random_tangent(ctx, x, s), Y = random_tangent(ctx, x, s);
      const Vec closed = alpha_closed_form(L, X, Y);
      const Vec ext = second_fundamental_form_extension(ctx.geom, ctx.geom.metric, x, X, Y);
      double worst = max_abs(Vec(ext - closed)) / std::max(1.0, max_abs(closed));
      if (ctx.has_chart()) {
        const LeafChart chart = ctx.geom.leaf_chart(x);
        const int k = chart.leaf_dim;
        const Vec a = s.coefficients(k), b = s.coefficients(k);
        const Mat DF = evaluate_jets(chart.embedding, Vec::Zero(k)).jacobian;
        const Vec c2 = alpha_closed_form(L, DF * a, DF * b);
        const Vec num = second_fundamental_form_chart(ctx.geom.metric, chart, a, b);
        worst = std::max(worst, max_abs(Vec(num - c2)) / std::max(1.0, max_abs(c2)));
      }
      return worst;
    });
  };

  fns["alpha_tilde_formula"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o = per_sample(ctx, s, [&](const Point& x) {
      const LocalGeometry L = local_geometry(ctx.geom, x);
      if (ctx.has_chart()) {
        const LeafChart chart = ctx.geom.leaf_chart(x);
        const int k = chart.leaf_dim;
        const Vec a = s.coefficients(k), b = s.coefficients(k);
        const Mat DF = evaluate_jets(chart.embedding, Vec::Zero(k)).jacobian;
        const Vec closed = alpha_tilde_closed_form(L, DF * a, DF * b);
        const Vec num = second_fundamental_form_chart(ctx.dg->gtilde, chart, a, b);
        return max_abs(Vec(num - closed)) / std::max(1.0, max_abs(closed));
      }
      const Vec X = random_tangent(ctx, x, s), Y = random_tangent(ctx, x, s);
      const Vec closed = alpha_tilde_closed_form(L, X, Y);
      const Vec num = second_fundamental_form_extension(ctx.geom, ctx.dg->gtilde, x, X, Y);
      return max_abs(Vec(num - closed)) / std::max(1.0, max_abs(closed));
    });
    o.notes.push_back(ctx.has_chart() ? "oracle: leaf chart" : "oracle: projected extension");
    return o;
  };

  fns["mean_curvature_formula"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    Outcome o;
    double closed_gap = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
      const Point x = s.point_in(ctx.geom);
      const LocalGeometry L = local_geometry(ctx.geom, x);
      const Vec trace = mean_curvature_tilde_trace(*ctx.dg, x);
      const Vec stated = mean_curvature_tilde_formula(L);
      o.residuals.push_back(max_abs(Vec(trace - stated)) / std::max(1.0, max_abs(trace)));
      const Vec closed = mean_curvature_tilde_closed_trace(*ctx.dg, x);
      closed_gap = std::max(closed_gap, max_abs(Vec(trace - closed)) / std::max(1.0, max_abs(trace)));
    }
    o.notes.push_back(fmt::format(
        "trace of the alpha~ closed form matches the oracle to {:.3e}; it equals "
        "-psi((2n-1)c + |xi|^2)/(c mu |xi|^2) xi rather than the 2nc coefficient",
        closed_gap));
    return o;
  };

  fns["mean_curvature_parallel"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.dg) return skipped(kNoJ);
    if (!ctx.has_chart()) return skipped(kNoChart);
    return per_sample(ctx, s, [&](const Point& x) {
      const std::uint64_t leaf_seed = static_cast<std::uint64_t>(s.uniform() * 9007199254740992.0);
      return mean_curvature_norm_spread(*ctx.dg, leaf_points(ctx.geom, x, 20, 0.3, leaf_seed));
    });
  };

  fns["sasaki_identity"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_J()) return skipped(kNoJ);
    if (!ctx.has_chart()) return skipped(kNoChart);
    Outcome o = per_sample(ctx, s, [&](const Point& x) {
      const int k = ctx.geom.dim - 1;
      return sasaki_identity_residual(ctx.geom, x, s.coefficients(k), s.coefficients(k), true);
    });
    o.notes.push_back("leaf metric divided by |xi|^2, so Jxi is the unit Reeb field");
    return o;
  };

  fns["gauss_equation"] = [](const Context& ctx, Sampler& s) {
    if (!ctx.has_chart()) return skipped(kNoChart);
    return per_sample(ctx, s, [&](const Point& x) {
      const LeafChart chart = ctx.geom.leaf_chart(x);
      double worst = gauss_equation_residual(induced_curvature(ctx.geom.metric, chart));
      if (ctx.dg) worst = std::max(worst, gauss_equation_residual(induced_curvature(ctx.dg->gtilde, chart)));
      return worst;
    });
  };

  fns["radial_length"] = [](const Context& ctx, Sampler& s) {
    if (ctx.cfg.model.kind != "flat_ball") return skipped("radial segments are built for flat_ball only");
    Outcome o;
    const double c = ctx.geom.c;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ctx.n; ++i) {
      const Point x = s.point_in(ctx.geom);
      const Point origin = Point::Zero(x.size());
      const double len = curve_length_tilde(*ctx.dg, straight_segment(origin, x), 0.0, 1.0);
      double residual = std::abs(len - std::atanh(x.norm() / std::sqrt(c)));
      const Point start = s.uniform() * x;
      const double part = curve_length_tilde(*ctx.dg, straight_segment(start, x), 0.0, 1.0);
      const double bound = length_lower_bound(c, start.squaredNorm(), x.squaredNorm());
      min_margin = std::min(min_margin, part - bound);
      residual = std::max(residual, bound - part);
      o.residuals.push_back(residual);
    }
    o.notes.push_back(fmt::format("smallest length - log lower bound: {:.6e}", min_margin));
    return o;
  };

  return fns;
}

const std::map<std::string, CheckFn>& check_functions() {
  static const std::map<std::string, CheckFn> fns = build_check_functions();
  return fns;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  using O = OrderClass;
  static const std::vector<CheckSpec> registry = {
      spec("complex_structure", "complex structure", "J^2 = -I", O::fixed, 1e-10),
      spec("hermitian", "Hermitian metric", "g(JX,JY) = g(X,Y)", O::fixed, 1e-10),
      spec("closed_conformal", "closed conformal field", "nabla_X xi = psi X, psi = div(xi)/dim",
           O::first_order, 1e-7),
      spec("kahler_parallel_J", "Kaehler condition", "nabla J = 0", O::first_order, 1e-7),
      spec("mu_identity", "mu identity", "1 + mu |xi|^2 = c mu", O::fixed, 1e-12),
      spec("dmu_identity", "differential of mu", "d mu = 2 psi mu^2 theta_xi", O::first_order, 1e-9),
      spec("dtheta_Jxi_identity", "differential of theta_Jxi", "d theta_Jxi = 2 psi omega",
           O::first_order, 1e-7),
      spec("kahler_form_two_routes", "deformed Kaehler form",
           "mu omega + mu^2 theta_xi ^ theta_Jxi = g~(J., .)", O::fixed, 1e-10),
      spec("kahler_closure", "deformed metric is Kaehler", "d omega~ = 0", O::first_order, 1e-7),
      spec("gtilde_hermitian", "deformed metric is Hermitian", "g~(JX,JY) = g~(X,Y)", O::fixed, 1e-10),
      spec("connection_formula", "deformed Levi-Civita connection",
           "nabla~_X Y = nabla_X Y + psi mu (<xi,X>Y + <xi,Y>X + <Jxi,X>JY + <Jxi,Y>JX)",
           O::first_order, 1e-7),
      spec("metric_compatibility", "deformed connection is metric",
           "X g~(Y,Z) = g~(nabla~_X Y, Z) + g~(Y, nabla~_X Z)", O::first_order, 1e-7),
      spec("gtilde_xi_identities", "deformed metric along xi",
           "g~(X,xi) = c mu^2 <X,xi>, g~(xi,xi) = c mu^2 |xi|^2", O::fixed, 1e-10),
      spec("curvature_formula", "deformed curvature tensor",
           "R~(X,Y)Z closed form in R, Ric(xi_hat), psi, mu", O::second_order, 1e-4),
      spec("holomorphic_sectional_formula", "deformed holomorphic sectional curvature",
           "K~(X) = {mu K + mu^2 r A}/g~(X,X)^2 + 2 mu r A/g~(X,X) - 4 psi^2, "
           "A = <X,xi>^2 + <X,Jxi>^2",
           O::second_order, 1e-4),
      spec("decay_bounds", "curvature decay",
           "K~(X) <= c K(X) + 2c Ric(xi_hat) - 4 psi^2; K~(X) <= c K(X) - 4 psi^2 for X orthogonal "
           "to xi, Jxi",
           O::second_order, 1e-6),
      spec("einstein", "Einstein deformation of a Ricci-flat base", "Ric~ = -2(n+1) g~",
           O::second_order, 1e-4),
      spec("ricci_closed_form", "deformed Ricci tensor", "Ric~(X,Y) = T1 + ... + T6",
           O::second_order, 1e-4, CheckMode::report_only),
      spec("riemann_symmetries", "curvature symmetries",
           "R_lijk = -R_ljik = R_jkli, first Bianchi, Ric symmetric", O::second_order, 1e-8),
      spec("ricci_two_routes", "Ricci tensor", "frame trace = index contraction", O::second_order,
           1e-9),
      spec("grad_psi", "gradient of psi", "grad psi = -Ric(xi_hat) xi", O::second_order, 1e-6),
      spec("mu_derivatives", "derivatives of mu",
           "X(mu) = 2 psi mu^2 <X,xi>, JX(mu) = -2 psi mu^2 <X,Jxi>", O::first_order, 1e-8),
      spec("xi_not_closed_conformal_tilde", "xi is not closed conformal for g~",
           "min_phi |nabla~ xi - phi I| > 0", O::fixed, 1e-9, CheckMode::lower_bound),
      spec("totally_geodesic_sigma", "span{xi, Jxi} leaves are totally geodesic",
           "normal part of nabla_U V = 0 for U, V in {xi, Jxi}, under g and g~", O::second_order, 1e-6),
      spec("killing_jxi", "Jxi is Killing on the leaves", "L_Jxi g = 0 and L_Jxi g~ = 0 on <xi>^perp",
           O::first_order, 1e-6),
      spec("xi_jxi_bracket", "xi and Jxi commute", "[xi, Jxi] = 0", O::first_order, 1e-8),
      spec("umbilicity", "leaves of <xi>^perp are umbilic for g", "alpha(X,Y) = -psi <X,Y> xi/|xi|^2",
           O::second_order, 1e-6),
      spec("alpha_tilde_formula", "second fundamental form under g~",
           "alpha~(X,Y) = -psi (<X,Y> + 2 mu <Jxi,X><Jxi,Y>) xi/|xi|^2", O::second_order, 1e-5),
      spec("mean_curvature_formula", "mean curvature under g~",
           "(2n-1) H = -psi (2nc + |xi|^2)/(c mu |xi|^2) xi", O::second_order, 1e-6),
      spec("mean_curvature_parallel", "parallel mean curvature", "|H|_g~ constant along the leaf",
           O::second_order, 1e-8),
      spec("sasaki_identity", "Sasaki leaf curvature", "R_N(X,Jxi)Y = g_N(Jxi,Y)X - g_N(X,Y)Jxi",
           O::second_order, 1e-5),
      spec("gauss_equation", "Gauss equation",
           "<R_N(X,Y)Z,W> = <R(X,Y)Z,W> + <alpha(Y,Z),alpha(X,W)> - <alpha(X,Z),alpha(Y,W)>",
           O::second_order, 1e-5),
      spec("radial_length", "completeness", "radial g~-length = artanh(r/sqrt c) >= log lower bound",
           O::fixed, 1e-4),
  };
  return registry;
}

const CheckSpec& find_check(const std::string& id) {
  for (const CheckSpec& s : check_registry())
    if (s.id == id) return s;
  std::string valid;
  for (const CheckSpec& s : check_registry()) valid += (valid.empty() ? "" : ", ") + s.id;
  throw std::invalid_argument("unknown check '" + id + "'; valid checks: " + valid);
}

void RunConfig::validate() const {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  for (const auto& t : {first_order_tolerance, second_order_tolerance}) {
    if (t && !(*t > 0.0)) throw std::invalid_argument("tolerances must be positive");
  }
  for (const std::string& id : checks) find_check(id);
}

double RunConfig::tolerance_for(const CheckSpec& spec) const {
  if (spec.order == OrderClass::first_order && first_order_tolerance) return *first_order_tolerance;
  if (spec.order == OrderClass::second_order && second_order_tolerance) return *second_order_tolerance;
  return spec.tolerance;
}

bool VerificationReport::all_pass() const {
  return std::none_of(records.begin(), records.end(),
                      [](const CheckRecord& r) { return r.status == CheckStatus::fail; });
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const CheckRecord& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

VerificationReport run_suite(const RunConfig& config) {
  config.validate();
  Context ctx{config, build_model(config.model), std::nullopt, config.n_samples};
  if (ctx.geom.has_complex_structure()) ctx.dg = deform(ctx.geom);

  VerificationReport report;
  report.model = config.model.describe();
  report.seed = config.seed;
  report.n_samples = config.n_samples;
  report.convention = kCurvatureConvention;
  report.tool_version = kToolVersion;

  for (const CheckSpec& spec : check_registry()) {
    if (!config.checks.empty() &&
        std::find(config.checks.begin(), config.checks.end(), spec.id) == config.checks.end()) {
      continue;
    }
    CheckRecord rec;
    rec.id = spec.id;
    rec.anchor = spec.anchor;
    rec.statement = spec.statement;
    rec.mode = spec.mode;
    rec.tolerance = config.tolerance_for(spec);

    Sampler sampler(derive_seed(config.seed, spec.id));
    Outcome out;
    try {
      out = check_functions().at(spec.id)(ctx, sampler);
    } catch (const std::exception& e) {
      rec.status = CheckStatus::fail;
      rec.notes = std::string("error: ") + e.what();
      report.records.push_back(std::move(rec));
      continue;
    }
    if (out.skip) {
      rec.status = CheckStatus::skipped;
      rec.notes = *out.skip;
      report.records.push_back(std::move(rec));
      continue;
    }
    rec.n_samples = static_cast<int>(out.residuals.size());
    if (!out.residuals.empty()) {
      rec.max_abs_residual = *std::max_element(out.residuals.begin(), out.residuals.end());
      rec.min_abs_residual = *std::min_element(out.residuals.begin(), out.residuals.end());
      rec.mean_abs_residual =
          std::accumulate(out.residuals.begin(), out.residuals.end(), 0.0) / rec.n_samples;
    }
    switch (spec.mode) {
      case CheckMode::gating:
        rec.status = rec.max_abs_residual <= rec.tolerance ? CheckStatus::pass : CheckStatus::fail;
        break;
      case CheckMode::lower_bound:
        rec.status = rec.min_abs_residual > rec.tolerance ? CheckStatus::pass : CheckStatus::fail;
        break;
      case CheckMode::report_only:
        rec.status = CheckStatus::report_only;
        break;
    }
    for (const std::string& note : out.notes) rec.notes += (rec.notes.empty() ? "" : "; ") + note;
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::report_only: return "n/a";
  }
  return "?";
}

std::string mode_name(CheckMode mode) {
  switch (mode) {
    case CheckMode::gating: return "gating";
    case CheckMode::report_only: return "report-only";
    case CheckMode::lower_bound: return "lower-bound";
  }
  return "?";
}

std::string render_report(const VerificationReport& report) {
  std::string out;
  out += "[run]\n";
  out += fmt::format("tool = {}\n", quote(report.tool_version));
  out += fmt::format("model = {}\n", quote(report.model));
  out += fmt::format("seed = {}\n", report.seed);
  out += fmt::format("samples = {}\n", report.n_samples);
  out += fmt::format("convention = {}\n", quote(report.convention));
  out += fmt::format("all_pass = {}\n", report.all_pass() ? "true" : "false");
  for (const CheckRecord& r : report.records) {
    out += "\n[[check]]\n";
    out += fmt::format("id = {}\n", quote(r.id));
    out += fmt::format("anchor = {}\n", quote(r.anchor));
    out += fmt::format("statement = {}\n", quote(r.statement));
    out += fmt::format("mode = {}\n", quote(mode_name(r.mode)));
    out += fmt::format("pass = {}\n", quote(status_name(r.status)));
    out += fmt::format("n_samples = {}\n", r.n_samples);
    out += fmt::format("max_abs_residual = {:.17g}\n", r.max_abs_residual);
    out += fmt::format("mean_abs_residual = {:.17g}\n", r.mean_abs_residual);
    out += fmt::format("min_abs_residual = {:.17g}\n", r.min_abs_residual);
    out += fmt::format("tolerance = {:.17g}\n", r.tolerance);
    out += fmt::format("notes = {}\n", quote(r.notes));
  }
  return out;
}

std::string render_check_list() {
  std::string out;
  for (const CheckSpec& s : check_registry()) {
    out += fmt::format("{:<31} {:<12} tol {:<8.0e} {}\n    {}\n", s.id, mode_name(s.mode), s.tolerance,
                       s.anchor, s.statement);
  }
  return out;
}

namespace {

std::string point_text(const Point& x) {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out += fmt::format("{}{:.17g}", i ? ";" : "", x(i));
  return out;
}

}  // namespace

std::string decay_table_csv(const RunConfig& config, int directions_per_point) {
  if (directions_per_point < 1) throw std::invalid_argument("need at least one direction per point");
  std::string out = "sample,direction,point,K,K_tilde,general_bound,orthogonal_bound,margin\n";
  if (config.n_samples <= 0) return out;
  const GeometrySpec geom = build_model(config.model);
  const DeformedGeometry dg = deform(geom);
  Sampler s(derive_seed(config.seed, "decay_table"));
  for (int i = 0; i < config.n_samples; ++i) {
    const Point x = s.point_in(geom);
    const DeformedPoint p = deformed_point(dg, x);
    for (int k = 0; k < directions_per_point; ++k) {
      Vec X;
      if (k == 0 && p.n_complex() >= 2) {
        X = hermitian_frame(p.local.g.value, p.J, x, p.local.xi.value).vectors[2];
      } else {
        X = s.coefficients(p.dim());
      }
      const DecayBounds b = decay_bounds(p, X);
      const double bound = b.orthogonal ? std::min(b.general, *b.orthogonal) : b.general;
      out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{},{:.17g}\n", i, k, point_text(x), b.K,
                         b.K_tilde, b.general,
                         b.orthogonal ? fmt::format("{:.17g}", *b.orthogonal) : std::string(),
                         bound - b.K_tilde);
    }
  }
  return out;
}

std::string length_growth_csv(const RunConfig& config, const std::vector<double>& radii) {
  if (config.model.kind != "flat_ball") {
    throw PreconditionError("length growth is tabulated for flat_ball only");
  }
  const GeometrySpec geom = build_model(config.model);
  const DeformedGeometry dg = deform(geom);
  const double c = geom.c;
  std::string out = "r,computed_length,artanh_reference,log_lower_bound\n";
  for (double r : radii) {
    if (r < 0.0 || r * r >= c - kDomainMargin) {
      throw DomainError(fmt::format("radius {} outside the sampled ball", r));
    }
    Point end = Point::Zero(geom.dim);
    end(0) = r;
    const double len = curve_length_tilde(dg, straight_segment(Point::Zero(geom.dim), end), 0.0, 1.0);
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r, len, std::atanh(r / std::sqrt(c)),
                       length_lower_bound(c, 0.0, r * r));
  }
  return out;
}

}  // namespace kdeform
