#include <catch_amalgamated.hpp>

#include "kdeform/models.hpp"
#include "kdeform/sampling.hpp"
#include "kdeform/submanifold.hpp"

#include <cmath>

using namespace kdeform;
using Catch::Matchers::WithinAbs;

namespace {

const Point kX06{{0.6, 0.0, 0.0, 0.0}};

}  // namespace

TEST_CASE("leaf frames of the flat ball") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const LeafFrame f = leaf_frame(ball, ball.metric, MetricChoice::base, kX06, LeafKind::xi_perp);
  REQUIRE(f.tangent.size() == 3);
  REQUIRE(f.normal.size() == 1);
  for (const Vec& t : f.tangent) CHECK(std::abs(t.dot(kX06)) < 1e-14);
  CHECK((f.tangent[0] - Vec::Unit(4, 1)).norm() < 1e-14);
  CHECK(leaf_frame_orthogonality(f, Mat::Identity(4, 4)) < 1e-10);

  const LeafFrame s = leaf_frame(ball, ball.metric, MetricChoice::base, kX06, LeafKind::xi_jxi);
  REQUIRE(s.tangent.size() == 2);
  CHECK(s.tangent[0] == kX06);
  CHECK(s.tangent[1] == Vec(standard_complex_structure(2) * kX06));

  CHECK_THROWS_AS(leaf_frame(ball, ball.metric, MetricChoice::base, Point::Zero(4), LeafKind::xi_perp),
                  DegenerateError);
}

TEST_CASE("xi stays normal to the leaves under the deformed metric") {
  const DeformedGeometry dg = deform(build_cone_round_sphere(2, 1.0));
  Sampler s(4);
  for (int i = 0; i < 10; ++i) {
    const Point x = s.point_in(dg.base);
    const LeafFrame f = leaf_frame(dg, x, LeafKind::xi_perp, MetricChoice::deformed);
    CHECK(leaf_frame_orthogonality(f, evaluate_value(dg.gtilde, x)) < 1e-10);
  }
}

TEST_CASE("umbilic spheres in the flat ball") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const LocalGeometry L = local_geometry(ball, kX06);
  const Vec X = Vec::Unit(4, 2);
  CHECK((alpha_closed_form(L, X, X) + kX06 / 0.36).norm() < 1e-14);
  const Vec num = second_fundamental_form_extension(ball, ball.metric, kX06, X, X);
  CHECK((num + kX06 / 0.36).norm() < 1e-9);

  const LeafChart chart = ball.leaf_chart(kX06);
  const Mat DF = evaluate_jets(chart.embedding, Vec::Zero(3)).jacobian;
  const Vec a{{1.0, 0.5, -0.2}}, b{{0.3, -1.0, 0.7}};
  const Vec ab = second_fundamental_form_chart(ball.metric, chart, a, b);
  CHECK((ab - alpha_closed_form(L, DF * a, DF * b)).norm() < 1e-9);
  const Vec ba = second_fundamental_form_chart(ball.metric, chart, b, a);
  CHECK((ab - ba).norm() < 1e-12);

  CHECK_THROWS_AS(second_fundamental_form_extension(ball, ball.metric, kX06, kX06, X), std::invalid_argument);
}

TEST_CASE("second fundamental form of the deformed leaves") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const DeformedGeometry dg = deform(ball);
  const LocalGeometry L = local_geometry(ball, kX06);
  const Vec X = Vec::Unit(4, 2);
  CHECK((alpha_tilde_closed_form(L, X, X) + kX06 / 0.36).norm() < 1e-13);
  CHECK((second_fundamental_form_extension(ball, dg.gtilde, kX06, X, X) + kX06 / 0.36).norm() < 1e-8);

  const Vec u = L.jxi / L.jxi.norm();
  const double coeff = (1.0 + 2.0 * 1.5625 * 0.36) / 0.36;
  CHECK((alpha_tilde_closed_form(L, u, u) + coeff * kX06).norm() < 1e-12);
  CHECK((second_fundamental_form_extension(ball, dg.gtilde, kX06, u, u) + coeff * kX06).norm() < 1e-8);
}

TEST_CASE("mean curvature of the deformed leaves") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const DeformedGeometry dg = deform(ball);
  const LocalGeometry L = local_geometry(ball, kX06);
  // stated form: 3H = -(4 + 0.36) / (1.5625 * 0.36) xi
  CHECK((3.0 * mean_curvature_tilde_formula(L) + 7.751111111111111 * kX06).norm() < 1e-12);

  // trace of alpha~ over a g~-orthonormal leaf frame: 3H = -(3 + 0.36) / (1.5625 * 0.36) xi
  const Vec trace = mean_curvature_tilde_trace(dg, kX06);
  const Vec closed = mean_curvature_tilde_closed_trace(dg, kX06);
  CHECK((3.0 * closed + (3.36 / 0.5625) * kX06).norm() < 1e-12);
  CHECK((trace - closed).norm() < 1e-8);

  const std::vector<Point> pts = leaf_points(ball, kX06, 20, 0.3, 99);
  REQUIRE(pts.size() == 20);
  for (const Point& p : pts) CHECK_THAT(p.norm(), WithinAbs(0.6, 1e-14));
  CHECK(mean_curvature_norm_spread(dg, pts) < 1e-8);
}

TEST_CASE("induced curvature of spheres and planes") {
  const GeometrySpec ball = build_flat_ball(2, 4.0);
  const Point x{{0.6, 0.0, 0.8, 0.0}};
  const InducedCurvature ic = induced_curvature(ball.metric, sphere_projection_chart(x));
  const Mat& h = ic.h;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double den = h(a, a) * h(b, b) - h(a, b) * h(a, b);
      CHECK_THAT(ic.intrinsic(a, a, b, b) / den, WithinAbs(1.0, 1e-9));
      CHECK_THAT(ic.gauss(a, a, b, b) / den, WithinAbs(1.0, 1e-9));
    }
  }
  CHECK(gauss_equation_residual(ic) < 1e-5);

  Mat basis = Mat::Zero(4, 2);
  basis(0, 0) = 1.0;
  basis(2, 1) = 1.0;
  const InducedCurvature plane = induced_curvature(ball.metric, affine_leaf_chart(x, basis));
  CHECK(plane.gauss.max_abs() < 1e-14);
  CHECK(plane.intrinsic.max_abs() < 1e-14);
}

TEST_CASE("Sasaki identity on sphere leaves") {
  const GeometrySpec ball = build_flat_ball(2, 4.0);
  const Point unit{{0.6, 0.0, 0.0, 0.8}};
  Sampler s(8);
  for (int i = 0; i < 10; ++i) {
    CHECK(sasaki_identity_residual(ball, unit, s.coefficients(3), s.coefficients(3), true) < 1e-5);
    CHECK(sasaki_identity_residual(ball, unit, s.coefficients(3), s.coefficients(3), false) < 1e-5);
  }
  const GeometrySpec cone = build_cone_round_sphere(2, 5.0);
  const Point r2{{2.0, 1.0, 1.2, 0.3}};
  const Vec X{{1.0, 0.2, -0.4}}, Y{{0.3, 1.0, 0.5}};
  CHECK(sasaki_identity_residual(cone, r2, X, Y, true) < 1e-5);
  CHECK(sasaki_identity_residual(cone, r2, X, Y, false) > 1e-3);
}

TEST_CASE("complex leaves are totally geodesic") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const DeformedGeometry dg = deform(ball);
  Sampler s(12);
  for (int i = 0; i < 20; ++i) {
    const Point x = s.point_in(ball);
    CHECK(*totally_geodesic_residual(ball, dg.gtilde, x) < 1e-6);
    CHECK(*totally_geodesic_residual(ball, ball.metric, x) < 1e-6);
  }
  const GeometrySpec disc = build_flat_ball(1, 1.0);
  CHECK_FALSE(totally_geodesic_residual(disc, deform(disc).gtilde, Point{{0.3, 0.2}}).has_value());
}

TEST_CASE("Jxi is Killing along the leaves") {
  const GeometrySpec cone = build_cone_round_sphere(2, 1.0);
  const DeformedGeometry dg = deform(cone);
  const VectorField jxi = jxi_field(cone);
  Sampler s(13);
  for (int i = 0; i < 10; ++i) {
    const Point x = s.point_in(cone);
    CHECK(killing_residual(jxi, cone.metric, cone, x) < 1e-6);
    CHECK(killing_residual(jxi, dg.gtilde, cone, x) < 1e-6);
    CHECK(killing_residual(cone.xi, dg.gtilde, cone, x) > 1e-3);
    CHECK(xi_jxi_bracket_residual(cone, x) < 1e-8);
  }
}
