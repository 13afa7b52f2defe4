#include <catch_amalgamated.hpp>

#include "kdeform/geometry.hpp"
#include "kdeform/models.hpp"
#include "kdeform/sampling.hpp"

#include <cmath>

using namespace kdeform;
using Catch::Matchers::WithinAbs;

namespace {

GeometrySpec corrupted_ball() {
  GeometrySpec g = build_flat_ball(2, 1.0);
  g.xi = [](JetSpan p) {
    JetVector v(p.size(), Jet2(0.0));
    v[0] = square(p[0]);
    return v;
  };
  return g;
}

}  // namespace

TEST_CASE("flat ball metric is the identity") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const MatrixJets g = evaluate_jets(ball.metric, Point{{0.1, -0.2, 0.3, 0.0}});
  CHECK(g.value == Mat::Identity(4, 4));
  for (int k = 0; k < 4; ++k) CHECK(g.d(k).isZero(0.0));
  CHECK_THROWS(metric_at(ball, Point{{0.9, 0.9, 0.0, 0.0}}));
}

TEST_CASE("warped chart metric scales the sphere block by f^2") {
  const WarpingFunction f = WarpingFunction::affine(2.0, 3.0);
  const GeometrySpec w = build_warped_generic(f, 2, 0.2, 0.8, 100.0);
  const Point x{{0.5, 1.0, 0.3}};
  const Mat g = evaluate_value(w.metric, x);
  const double f2 = 16.0;  // f(0.5) = 4
  CHECK_THAT(g(0, 0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(g(1, 1), WithinAbs(f2, 1e-13));
  CHECK_THAT(g(2, 2), WithinAbs(f2 * std::pow(std::sin(1.0), 2), 1e-13));
  CHECK_THAT(g(0, 1), WithinAbs(0.0, 1e-15));
}

TEST_CASE("inner products on the flat ball") {
  const GeometrySpec ball = build_flat_ball(1, 1.0);
  const Point x{{0.5, 0.0}};
  const TangentVector e0{x, Vec::Unit(2, 0)};
  CHECK(inner(ball, e0, e0) == 1.0);
  CHECK(norm_sq(ball, e0) == 1.0);
  CHECK_THAT(theta_xi(ball, e0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(theta_jxi(ball, e0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("conformal factor") {
  CHECK_THAT(conformal_factor(build_flat_ball(3, 1.0), Point::Constant(6, 0.1)), WithinAbs(1.0, 1e-14));
  const GeometrySpec cone = build_cone_round_sphere(2, 1.0);
  CHECK_THAT(conformal_factor(cone, Point{{0.5, 1.0, 1.2, 0.3}}), WithinAbs(1.0, 1e-12));
  const GeometrySpec w = build_warped_generic(WarpingFunction::affine(2.0, 3.0), 3, 0.2, 0.8, 100.0);
  CHECK_THAT(conformal_factor(w, Point{{0.4, 1.0, 1.3, 0.2}}), WithinAbs(2.0, 1e-12));
}

TEST_CASE("closed conformal residual") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  CHECK(closed_conformal_residual_max(ball, Point{{0.2, 0.1, -0.3, 0.4}}) < 1e-14);

  const GeometrySpec cone = build_cone_round_sphere(2, 1.0);
  Sampler s(7);
  for (int i = 0; i < 20; ++i) {
    const Point x = s.point_in(cone);
    CHECK(closed_conformal_residual(cone, x, s.coefficients(4)).cwiseAbs().maxCoeff() < 1e-8);
  }

  CHECK(closed_conformal_residual_max(corrupted_ball(), Point{{0.5, 0.1, 0.0, 0.2}}) > 1e-3);
}

TEST_CASE("Kaehler residual and the t^2 negative control") {
  CHECK(kahler_residual(build_flat_ball(2, 1.0), Point{{0.1, 0.2, 0.3, 0.1}}) == 0.0);

  const GeometrySpec cone = build_cone_round_sphere(2, 1.0);
  const Point x{{0.6, 1.0, 1.4, 0.5}};
  CHECK(kahler_residual(cone, x) < 1e-7);
  CHECK(complex_structure_residual(cone, x) < 1e-10);

  const GeometrySpec bad =
      build_warped_generic(WarpingFunction::quadratic(1.0, 0.0, 0.0), 3, 0.3, 0.9, 1.0, true);
  CHECK(kahler_residual(bad, x) > 1e-3);
}

TEST_CASE("Hermitian residual on the cone") {
  const GeometrySpec cone = build_cone_round_sphere(2, 4.0);
  Sampler s(11);
  for (int i = 0; i < 20; ++i) {
    const Point x = s.point_in(cone);
    CHECK(hermitian_residual(cone, x, s.coefficients(4), s.coefficients(4)) < 1e-10);
  }
}

TEST_CASE("Hermitian frame") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  const Point x{{0.1, 0.2, -0.1, 0.3}};
  const HermitianFrame f = hermitian_frame_at(ball, x, Vec::Unit(4, 0));
  REQUIRE(f.vectors.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK((f.vectors[k] - Vec::Unit(4, k)).norm() < 1e-14);
  CHECK_THROWS(hermitian_frame_at(ball, x, Vec::Zero(4)));

  const GeometrySpec cone = build_cone_round_sphere(3, 1.0);
  const Point y{{0.5, 1.0, 1.3, 2.0, 1.1, 0.4}};
  const HermitianFrame h = hermitian_frame_at(cone, y);
  const Mat g = evaluate_value(cone.metric, y);
  const Mat J = evaluate_value(*cone.complex_structure, y);
  for (std::size_t a = 0; a < h.vectors.size(); ++a) {
    for (std::size_t b = 0; b < h.vectors.size(); ++b) {
      CHECK_THAT(h.vectors[a].dot(g * h.vectors[b]), WithinAbs(a == b ? 1.0 : 0.0, 1e-12));
    }
  }
  for (std::size_t k = 0; k + 1 < h.vectors.size(); k += 2) {
    CHECK((J * h.vectors[k] - h.vectors[k + 1]).norm() < 1e-12);
  }
}

TEST_CASE("exterior derivative of two-forms") {
  const MatrixField constant = [](JetSpan) {
    JetMatrix w(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w(i, j) = Jet2(0.0);
    w(0, 1) = 2.0;
    w(1, 0) = -2.0;
    return w;
  };
  CHECK(two_form_exterior_derivative(constant, Point::Zero(3)).max_abs() == 0.0);

  const GeometrySpec ball = build_flat_ball(2, 1.0);
  CHECK(two_form_exterior_derivative(kahler_form_field(ball), Point{{0.1, 0.2, 0.3, 0.1}}).max_abs() == 0.0);

  // w = x0 dx1 ^ dx2 has dw = dx0 ^ dx1 ^ dx2
  const MatrixField linear = [](JetSpan p) {
    JetMatrix w(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w(i, j) = Jet2(0.0);
    w(1, 2) = p[0];
    w(2, 1) = -p[0];
    return w;
  };
  const Tensor3 dw = two_form_exterior_derivative(linear, Point::Zero(3));
  CHECK_THAT(dw(0, 1, 2), WithinAbs(1.0, 1e-15));
  CHECK_THAT(dw(1, 0, 2), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("mu identity and normalized Ricci at the origin") {
  const GeometrySpec ball = build_flat_ball(2, 4.0);
  CHECK(mu_identity_residual(ball, Point{{0.5, 0.3, -0.2, 1.0}}) < 1e-12);
  const LocalGeometry L = local_geometry(ball, Point::Zero(4));
  CHECK(normalized_ricci_xi(L) == 0.0);
  CHECK_THROWS_AS(normalized_ricci_xi(L, false), DegenerateError);
}

TEST_CASE("xi and Jxi commute") {
  const GeometrySpec cone = build_cone_round_sphere(2, 1.0);
  const Point x{{0.5, 1.1, 1.3, -0.4}};
  CHECK(lie_bracket(cone.xi, jxi_field(cone), x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("seeded sampling is reproducible") {
  const GeometrySpec ball = build_flat_ball(2, 1.0);
  Sampler a(42), b(42), c(43);
  const Point pa = a.point_in(ball), pb = b.point_in(ball), pc = c.point_in(ball);
  CHECK(pa == pb);
  CHECK(pa != pc);
  CHECK(ball.in_domain(pa));
  CHECK(derive_seed(42, "x") == derive_seed(42, "x"));
  CHECK(derive_seed(42, "x") != derive_seed(42, "y"));
}
