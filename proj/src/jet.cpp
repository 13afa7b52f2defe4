#include "kdeform/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kdeform {

namespace {

void require_same_dim(const Jet2& a, const Jet2& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("jet dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
}

}  // namespace

Jet2::Jet2(double value) : value_(value) {}

Jet2 Jet2::constant(double value, int dim) {
  if (dim < 0 || dim > kMaxJetDim) {
    throw std::out_of_range("jet dimension out of range: " + std::to_string(dim));
  }
  Jet2 j(value);
  j.grad_ = JetGradient::Zero(dim);
  j.hess_ = JetHessian::Zero(dim, dim);
  return j;
}

Jet2 Jet2::variable(std::span<const double> x, int index) {
  const int dim = static_cast<int>(x.size());
  if (index < 0 || index >= dim) {
    throw std::out_of_range("seed index " + std::to_string(index) + " outside [0, " +
                            std::to_string(dim) + ")");
  }
  Jet2 j = constant(x[index], dim);
  j.grad_(index) = 1.0;
  return j;
}

Jet2 Jet2::from_parts(double value, const JetGradient& grad, const JetHessian& hess) {
  if (hess.rows() != grad.size() || hess.cols() != grad.size()) {
    throw std::invalid_argument("jet Hessian shape does not match gradient");
  }
  Jet2 j(value);
  j.grad_ = grad;
  j.hess_ = 0.5 * (hess + hess.transpose());
  return j;
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
  value_ += rhs.value_;
  if (rhs.dim() == 0) return *this;
  if (dim() == 0) {
    grad_ = rhs.grad_;
    hess_ = rhs.hess_;
    return *this;
  }
  require_same_dim(*this, rhs);
  grad_ += rhs.grad_;
  hess_ += rhs.hess_;
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
  value_ -= rhs.value_;
  if (rhs.dim() == 0) return *this;
  if (dim() == 0) {
    grad_ = -rhs.grad_;
    hess_ = -rhs.hess_;
    return *this;
  }
  require_same_dim(*this, rhs);
  grad_ -= rhs.grad_;
  hess_ -= rhs.hess_;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& rhs) {
  if (rhs.dim() == 0) {
    value_ *= rhs.value_;
    grad_ *= rhs.value_;
    hess_ *= rhs.value_;
    return *this;
  }
  if (dim() == 0) {
    const double a = value_;
    value_ = a * rhs.value_;
    grad_ = a * rhs.grad_;
    hess_ = a * rhs.hess_;
    return *this;
  }
  require_same_dim(*this, rhs);
  const JetHessian cross = grad_ * rhs.grad_.transpose();
  hess_ = value_ * rhs.hess_ + rhs.value_ * hess_ + cross + cross.transpose();
  hess_ = 0.5 * (hess_ + hess_.transpose()).eval();
  grad_ = value_ * rhs.grad_ + rhs.value_ * grad_;
  value_ *= rhs.value_;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& rhs) { return *this *= reciprocal(rhs); }

Jet2 operator-(const Jet2& a) {
  Jet2 r = a;
  r *= -1.0;
  return r;
}

Jet2 Jet2::compose(double f, double df, double d2f) const {
  Jet2 r(f);
  if (dim() == 0) return r;
  r.grad_ = df * grad_;
  r.hess_ = df * hess_ + d2f * (grad_ * grad_.transpose());
  return r;
}

Jet2 reciprocal(const Jet2& a) {
  const double v = a.value();
  if (v == 0.0) throw std::domain_error("reciprocal of a jet with zero value");
  const double inv = 1.0 / v;
  return a.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 sqrt(const Jet2& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("sqrt of a jet with non-positive value");
  const double s = std::sqrt(v);
  return a.compose(s, 0.5 / s, -0.25 / (s * v));
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}

Jet2 log(const Jet2& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("log of a jet with non-positive value");
  return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  return a.compose(s, std::cos(a.value()), -s);
}

Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.value());
  return a.compose(c, -std::sin(a.value()), -c);
}

Jet2 square(const Jet2& a) { return a * a; }

JetVector seed_point(std::span<const double> x) {
  JetVector out;
  out.reserve(x.size());
  for (int i = 0; i < static_cast<int>(x.size()); ++i) out.push_back(Jet2::variable(x, i));
  return out;
}

JetVector constant_point(std::span<const double> x) { return {x.begin(), x.end()}; }

double finite_difference_crosscheck(const ScalarField& f, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  const int d = static_cast<int>(x.size());
  Jet2 jet = f(seed_point(x));
  // A field that ignores its input returns a plain constant.
  if (jet.dim() == 0) jet = Jet2::constant(jet.value(), d);

  std::vector<double> p(x.begin(), x.end());
  auto eval = [&](int i, double si, int j, double sj) {
    p.assign(x.begin(), x.end());
    if (i >= 0) p[i] += si;
    if (j >= 0) p[j] += sj;
    const double v = f(constant_point(p)).value();
    if (!std::isfinite(v)) throw std::domain_error("field evaluation failed on the stencil");
    return v;
  };

  const double f0 = eval(-1, 0, -1, 0);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    const double fp = eval(i, h, -1, 0);
    const double fm = eval(i, -h, -1, 0);
    worst = std::max(worst, std::abs((fp - fm) / (2 * h) - jet.grad(i)));
    worst = std::max(worst, std::abs((fp - 2 * f0 + fm) / (h * h) - jet.hess(i, i)));
    for (int j = i + 1; j < d; ++j) {
      const double fd = (eval(i, h, j, h) - eval(i, h, j, -h) - eval(i, -h, j, h) +
                         eval(i, -h, j, -h)) /
                        (4 * h * h);
      worst = std::max(worst, std::abs(fd - jet.hess(i, j)));
    }
  }
  return worst;
}

}  // namespace kdeform
