#include <catch_amalgamated.hpp>

#include "kdeform/deformation.hpp"
#include "kdeform/models.hpp"
#include "kdeform/sampling.hpp"

#include <cmath>

using namespace kdeform;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("deformed disc metric at (0.5, 0)") {
  const DeformedGeometry dg = deform(build_flat_ball(1, 1.0));
  const Point x{{0.5, 0.0}};
  CHECK(max_abs(evaluate_value(dg.gtilde, x) - (16.0 / 9.0) * Mat::Identity(2, 2)) < 1e-14);
  const Jet2 mu = dg.mu(seed_point({x.data(), 2}));
  CHECK_THAT(mu.value(), WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(mu.grad(0), WithinAbs(16.0 / 9.0, 1e-14));
  CHECK(dmu_identity_residual(dg, x) < 1e-14);
}

TEST_CASE("deformed metric equals the base metric at the origin") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const Point o = Point::Zero(4);
  CHECK(max_abs(evaluate_value(dg.gtilde, o) - Mat::Identity(4, 4)) == 0.0);
  CHECK(dmu_identity_residual(dg, o) == 0.0);
  const Mat omega = standard_complex_structure(2).transpose();
  CHECK(max_abs(kahler_form_tilde(dg, o) - omega) < 1e-15);
}

TEST_CASE("deform preconditions") {
  const GeometrySpec w = build_warped_generic(WarpingFunction::affine(1.0, 0.0), 3, 0.2, 0.8, 1.0);
  CHECK_THROWS_AS(deform(w), PreconditionError);
  const DeformedGeometry dg = deform(build_flat_ball(1, 1.0));
  CHECK_THROWS_AS(evaluate_value(dg.gtilde, Point{{1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(evaluate_value(dg.gtilde, Point{{0.9, 0.9}}), DomainError);
}

TEST_CASE("Kaehler form by two routes and its closure") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const MatrixField omega = kahler_form_field(dg.as_geometry());
  Sampler s(5);
  for (int i = 0; i < 50; ++i) {
    const Point x = s.point_in(dg.base);
    CHECK(max_abs(kahler_form_tilde(dg, x) - kahler_form_tilde_from_metric(dg, x)) < 1e-10);
    CHECK(two_form_exterior_derivative(omega, x).max_abs() < 1e-7 * std::max(1.0, max_abs(evaluate_value(dg.gtilde, x))));
  }
}

TEST_CASE("d theta_Jxi = 2 psi omega") {
  CHECK(dtheta_jxi_identity_residual(build_flat_ball(2, 1.0), Point{{0.1, 0.3, -0.2, 0.4}}) < 1e-14);
  CHECK(dtheta_jxi_identity_residual(build_cone_round_sphere(2, 1.0), Point{{0.5, 1.0, 1.3, 0.2}}) < 1e-9);

  GeometrySpec bad = build_flat_ball(2, 1.0);
  bad.xi = [](JetSpan p) {
    JetVector v(p.size(), Jet2(0.0));
    v[0] = square(p[0]);
    return v;
  };
  // residual is |x0| for this field
  CHECK_THAT(dtheta_jxi_identity_residual(bad, Point{{0.5, 0.2, 0.1, 0.3}}), WithinAbs(0.5, 1e-12));
}

TEST_CASE("connection along xi and Jxi") {
  const GeometrySpec ball = build_flat_ball(1, 1.0);
  const DeformedGeometry dg = deform(ball);
  const DeformedPoint p = deformed_point(dg, Point{{0.5, 0.0}});
  const Vec xi = p.local.xi.value, jxi = p.local.jxi;
  const Mat dJxi = p.J;  // Jxi(p) = J p on the flat ball
  const Vec v = nabla_tilde(p, xi, jxi, dJxi);
  CHECK((v - (5.0 / 3.0) * jxi).norm() < 1e-14);
}

TEST_CASE("closed-form Christoffels match the oracle") {
  for (int n = 1; n <= 3; ++n) {
    const DeformedGeometry dg = deform(build_flat_ball(n, 1.0));
    Sampler s(100 + n);
    for (int i = 0; i < 10; ++i) {
      const DeformedPoint p = deformed_point(dg, s.point_in(dg.base));
      const Tensor3 a = christoffel_tilde_closed_form(p);
      const Tensor3& b = p.tilde_curv.gamma;
      double worst = 0.0;
      for (int i1 = 0; i1 < p.dim(); ++i1)
        for (int i2 = 0; i2 < p.dim(); ++i2)
          for (int i3 = 0; i3 < p.dim(); ++i3) worst = std::max(worst, std::abs(a(i1, i2, i3) - b(i1, i2, i3)));
      CHECK(worst < 1e-7 * std::max(1.0, b.max_abs()));
      CHECK(metric_compatibility_residual(p) < 1e-7);
      CHECK(gtilde_xi_identity_residual(p) < 1e-10);
    }
  }
}

TEST_CASE("connection reduces to the base one at xi = 0") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const DeformedPoint p = deformed_point(dg, Point::Zero(4));
  const Vec X = Vec::Unit(4, 0), Y = Vec::Unit(4, 3);
  CHECK(nabla_tilde(p, X, Y, Mat::Zero(4, 4)).isZero(0.0));
}

TEST_CASE("xi is not closed conformal under the deformed metric") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const DeformedPoint p = deformed_point(dg, Point{{0.5, 0.0, 0.0, 0.0}});
  CHECK(xi_conformal_obstruction_tilde(p) > 1e-3);
  CHECK(xi_conformal_obstruction_base(p) < 1e-12);
  CHECK_THROWS_AS(xi_conformal_obstruction_tilde(deformed_point(dg, Point::Zero(4))), DegenerateError);
}

TEST_CASE("closed-form curvature tensor") {
  const DeformedGeometry dg = deform(build_cone_round_sphere(2, 1.0));
  Sampler s(9);
  for (int i = 0; i < 10; ++i) {
    const DeformedPoint p = deformed_point(dg, s.point_in(dg.base));
    const Vec X = s.coefficients(4), Y = s.coefficients(4), Z = s.coefficients(4);
    const Vec num = riemann_apply(p.tilde_curv, X, Y, Z);
    CHECK((riemann_tilde_closed_form(p, X, Y, Z) - num).cwiseAbs().maxCoeff() <
          1e-4 * std::max(1.0, num.cwiseAbs().maxCoeff()));
    CHECK(riemann_tilde_closed_form(p, X, X, Z).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("holomorphic sectional curvature of the deformed ball is -4") {
  for (double c : {1.0, 4.0}) {
    const DeformedGeometry dg = deform(build_flat_ball(2, c));
    Sampler s(21);
    for (int i = 0; i < 10; ++i) {
      const DeformedPoint p = deformed_point(dg, s.point_in(dg.base));
      Vec X = s.coefficients(4);
      X /= std::sqrt(p.inner(X, X));
      CHECK_THAT(holomorphic_sectional_tilde_closed_form(p, X).value, WithinAbs(-4.0, 1e-4));
      CHECK_THAT(holomorphic_sectional(p.tilde_curv, p.J, X), WithinAbs(-4.0, 1e-4));
    }
  }
  const DeformedGeometry dg = deform(build_flat_ball(1, 1.0));
  const DeformedPoint p = deformed_point(dg, Point{{0.3, 0.1}});
  const HolomorphicTilde h = holomorphic_sectional_tilde_closed_form(p, Vec{{2.0, 0.0}});
  CHECK(h.normalized);
  CHECK_FALSE(h.note.empty());
  CHECK_THAT(h.value, WithinAbs(-4.0, 1e-10));
}

TEST_CASE("decay bounds are attained on the flat ball") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const DeformedPoint p = deformed_point(dg, Point{{0.3, 0.2, -0.1, 0.25}});
  const HermitianFrame f = hermitian_frame(p.local.g.value, p.J, p.local.x, p.local.xi.value);
  const DecayBounds b = decay_bounds(p, f.vectors[2]);
  CHECK(b.satisfied);
  REQUIRE(b.orthogonal.has_value());
  CHECK_THAT(b.general, WithinAbs(-4.0, 1e-12));
  CHECK_THAT(*b.orthogonal, WithinAbs(b.general, 1e-12));
  CHECK_THAT(b.K_tilde, WithinAbs(b.general, 1e-4));
}

TEST_CASE("Einstein constant of the deformed ball") {
  for (int n = 1; n <= 3; ++n) {
    const DeformedGeometry dg = deform(build_flat_ball(n, 1.0));
    Sampler s(300 + n);
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(s.point_in(dg.base));
    CHECK(einstein_residual(dg, pts) < 1e-4);
  }
  const GeometrySpec curved =
      build_warped_generic(WarpingFunction::affine(2.0, 0.5), 3, 0.2, 0.8, 10.0, true);
  const DeformedGeometry dg = deform(curved);
  CHECK_THROWS_AS(einstein_residual(dg, {Point{{0.5, 1.0, 1.2, 0.3}}}), PreconditionError);
}

TEST_CASE("Ricci closed form on the ball") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  Sampler s(17);
  for (int i = 0; i < 10; ++i) {
    const DeformedPoint p = deformed_point(dg, s.point_in(dg.base));
    const Vec X = s.coefficients(4), Y = s.coefficients(4);
    const double expected = -6.0 * p.inner_tilde(X, Y);
    CHECK_THAT(ricci_tilde_closed_form(p, X, Y).total(), WithinAbs(expected, 1e-4 * std::max(1.0, std::abs(expected))));
    const Vec xi = p.local.xi.value;
    const double ex = -6.0 * p.inner_tilde(xi, Y);
    CHECK_THAT(ricci_tilde_closed_form(p, xi, Y).total(), WithinAbs(ex, 1e-4 * std::max(1.0, std::abs(ex))));
    CHECK_THAT(X.dot(ricci_frame_trace(p.tilde_curv) * Y), WithinAbs(expected, 1e-4 * std::max(1.0, std::abs(expected))));
  }
}

TEST_CASE("radial length grows like artanh") {
  const DeformedGeometry dg = deform(build_flat_ball(2, 1.0));
  const Point o = Point::Zero(4);
  const Point end{{0.9, 0.0, 0.0, 0.0}};
  const double len = curve_length_tilde(dg, straight_segment(o, end), 0.0, 1.0);
  CHECK_THAT(len, WithinAbs(1.47222, 1e-5));
  CHECK_THAT(len, WithinAbs(std::atanh(0.9), 1e-8));
  CHECK(curve_length_tilde(dg, straight_segment(end, end), 0.0, 1.0) == 0.0);

  const Point start{{0.4, 0.0, 0.0, 0.0}};
  const double part = curve_length_tilde(dg, straight_segment(start, end), 0.0, 1.0);
  CHECK(part >= length_lower_bound(1.0, 0.16, 0.81));
  CHECK_THAT(length_lower_bound(1.0, 0.0, 0.81), WithinAbs(0.5 * std::log(1.0 / 0.19), 1e-15));

  const Point outside{{1.2, 0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(curve_length_tilde(dg, straight_segment(o, outside), 0.0, 1.0), DomainError);
}
