#pragma once

#include "kdeform/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kdeform {

/// Warping function f(t) of a warped product I x_f S^k: either affine
/// a*t + b or quadratic a*t^2 + b*t + c0.
struct WarpingFunction {
  enum class Kind { affine, quadratic };
  Kind kind = Kind::affine;
  double a = 1.0;
  double b = 0.0;
  double c0 = 0.0;

  static WarpingFunction affine(double a, double b) { return {Kind::affine, a, b, 0.0}; }
  static WarpingFunction quadratic(double a, double b, double c0) {
    return {Kind::quadratic, a, b, c0};
  }
  /// Parses "affine:a,b" or "quadratic:a,b,c".
  static WarpingFunction parse(const std::string& text);

  [[nodiscard]] Jet2 operator()(const Jet2& t) const;
  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double derivative(double t) const;
  [[nodiscard]] double min_on(double lo, double hi) const;
  [[nodiscard]] std::string describe() const;
};

/// Margin kept between |xi|^2 and c so that mu stays finite on the domain.
inline constexpr double kDomainMargin = 1e-3;
/// Polar angles of hyperspherical charts stay in [kPolarMargin, pi - kPolarMargin].
inline constexpr double kPolarMargin = 0.2;

/// Standard complex structure on R^{2n} with interleaved coordinates
/// (x1, y1, ..., xn, yn): J d/dx_k = d/dy_k, J d/dy_k = -d/dx_k.
Mat standard_complex_structure(int n);

/// Ball of C^n with the Euclidean metric, standard J and xi(p) = p.
GeometrySpec build_flat_ball(int n, double c);

/// Cone (0, sqrt c) x_t S^{2m-1} in the chart (t, polar angles..., azimuth).
/// J is the flat structure of C^m pulled back through the hyperspherical map.
GeometrySpec build_cone_round_sphere(int m, double c, const std::optional<Box>& sample_box = {});

/// Warped product I x_f S^k with xi = f(t) d/dt. Carries no complex structure
/// unless `with_cone_complex_structure` is set (k odd), in which case the
/// flat cone's J is attached unchanged.
GeometrySpec build_warped_generic(const WarpingFunction& f, int sphere_dim, double t_min,
                                  double t_max, double c,
                                  bool with_cone_complex_structure = false);

/// Hyperspherical chart (t, angles) -> Cartesian R^{d}.
Point cone_to_cartesian(const Point& chart_point);
/// d(cone_to_cartesian) at a chart point.
Mat cone_to_cartesian_jacobian(const Point& chart_point);
/// Inverse of cone_to_cartesian (azimuth in (-pi, pi]).
Point cartesian_to_cone(const Point& cartesian);

/// Radial-projection chart of the sphere |p| = |base| through `base` in
/// Euclidean coordinates.
LeafChart sphere_projection_chart(const Point& base);
/// Chart of the affine plane through `base` spanned by the columns of `basis`.
LeafChart affine_leaf_chart(const Point& base, const Mat& basis);

/// Named model with parameters, as addressed from the command line.
struct ModelParams {
  std::string kind = "flat_ball";  // flat_ball | cone_round_sphere | warped_generic
  int n = 2;                       // complex dimension (cone: m)
  double c = 1.0;
  WarpingFunction warping = WarpingFunction::affine(1.0, 0.0);
  int sphere_dim = 3;
  double t_min = 0.2;
  double t_max = 0.8;
  bool cone_complex_structure = false;

  [[nodiscard]] std::string describe() const;
};

std::vector<std::string> model_names();
GeometrySpec build_model(const ModelParams& params);

}  // namespace kdeform
