#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace kdeform {

/// Largest chart dimension a jet can carry. Storage is inline, so no jet
/// operation touches the heap.
inline constexpr int kMaxJetDim = 12;

using JetGradient = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxJetDim, 1>;
using JetHessian =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxJetDim, kMaxJetDim>;

/// Second-order truncated Taylor scalar: value, gradient and Hessian with
/// respect to the chart coordinates the inputs were seeded from.
///
/// A jet of dimension 0 is a plain constant and combines with a jet of any
/// dimension. Two jets of nonzero dimension must agree on it.
class Jet2 {
 public:
  Jet2() = default;
  Jet2(double value);  // NOLINT(google-explicit-constructor): constants mix freely

  static Jet2 constant(double value, int dim);
  /// Seeds coordinate `index` of the point `x`: value x[index], gradient e_index.
  static Jet2 variable(std::span<const double> x, int index);
  /// Assembles a jet from explicit parts; the Hessian is symmetrized.
  static Jet2 from_parts(double value, const JetGradient& grad, const JetHessian& hess);

  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] int dim() const { return static_cast<int>(grad_.size()); }
  [[nodiscard]] const JetGradient& grad() const { return grad_; }
  [[nodiscard]] const JetHessian& hess() const { return hess_; }
  [[nodiscard]] double grad(int i) const { return grad_(i); }
  [[nodiscard]] double hess(int i, int j) const { return hess_(i, j); }

  Jet2& operator+=(const Jet2& rhs);
  Jet2& operator-=(const Jet2& rhs);
  Jet2& operator*=(const Jet2& rhs);
  Jet2& operator/=(const Jet2& rhs);

  friend Jet2 operator-(const Jet2& a);
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

  /// Applies a scalar function given its value and first two derivatives at
  /// value() (second-order chain rule).
  [[nodiscard]] Jet2 compose(double f, double df, double d2f) const;

 private:
  double value_ = 0.0;
  JetGradient grad_;
  JetHessian hess_;
};

Jet2 reciprocal(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 square(const Jet2& a);

using JetVector = std::vector<Jet2>;
using JetSpan = std::span<const Jet2>;
using ScalarField = std::function<Jet2(JetSpan)>;

/// Jets for every coordinate of `x`, seeded as independent variables.
JetVector seed_point(std::span<const double> x);
/// Dimension-0 jets carrying only the coordinate values of `x`.
JetVector constant_point(std::span<const double> x);

/// Largest absolute difference between the jet gradient/Hessian of `f` at
/// `x` and central finite differences with step `h`.
double finite_difference_crosscheck(const ScalarField& f, std::span<const double> x, double h);

}  // namespace kdeform
