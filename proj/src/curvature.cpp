#include "kdeform/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace kdeform {

Mat spd_inverse(const Mat& g) {
  Eigen::LLT<Mat> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success) throw DegenerateError("metric is not positive definite");
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

namespace {

// S_{lij} = d_i g_jl + d_j g_il - d_l g_ij  (twice the Christoffel symbol of the first kind)
double first_kind(const MatrixJets& g, int l, int i, int j) {
  return g.d(i)(j, l) + g.d(j)(i, l) - g.d(l)(i, j);
}

}  // namespace

Tensor3 christoffel(const MatrixJets& g) {
  const int n = static_cast<int>(g.value.rows());
  const Mat g_inv = spd_inverse(g.value);
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += g_inv(k, l) * first_kind(g, l, i, j);
        gamma(k, i, j) = 0.5 * acc;
        gamma(k, j, i) = 0.5 * acc;
      }
    }
  return gamma;
}

Tensor3 christoffel(const MatrixField& metric, const Point& x) {
  return christoffel(evaluate_jets(metric, x));
}

Tensor4 christoffel_derivative(const MatrixJets& g, const Mat& g_inv) {
  const int n = static_cast<int>(g.value.rows());
  Tensor4 dgamma(n);
  for (int m = 0; m < n; ++m) {
    const Mat dg_inv = -g_inv * g.d(m) * g_inv;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            const double ds = g.dd(m, i)(j, l) + g.dd(m, j)(i, l) - g.dd(m, l)(i, j);
            acc += dg_inv(k, l) * first_kind(g, l, i, j) + g_inv(k, l) * ds;
          }
          dgamma(m, k, i, j) = 0.5 * acc;
          dgamma(m, k, j, i) = 0.5 * acc;
        }
      }
  }
  return dgamma;
}

CurvatureData curvature(const MatrixJets& g) {
  const int n = static_cast<int>(g.value.rows());
  CurvatureData out;
  out.metric = 0.5 * (g.value + g.value.transpose());
  out.metric_inv = spd_inverse(out.metric);
  out.gamma = christoffel(g);
  out.dgamma = christoffel_derivative(g, out.metric_inv);

  const Tensor3& G = out.gamma;
  const Tensor4& dG = out.dgamma;
  out.riemann = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < n; ++m) r += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          out.riemann(l, i, j, k) = r;
        }

  out.riemann_lowered = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += out.metric(l, m) * out.riemann(m, i, j, k);
          out.riemann_lowered(l, i, j, k) = acc;
        }

  out.ricci = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.ricci(i, j) += out.riemann(k, k, i, j);
  return out;
}

CurvatureData curvature(const MatrixField& metric, const Point& x) {
  return curvature(evaluate_jets(metric, x));
}

Vec covariant_derivative(const Tensor3& gamma, const Vec& x, const Vec& y, const Mat& dy) {
  const int n = gamma.size();
  Vec out = dy * x;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out(i) += gamma(i, k, j) * x(k) * y(j);
  return out;
}

Vec riemann_apply(const CurvatureData& curv, const Vec& x, const Vec& y, const Vec& z) {
  const int n = curv.dim();
  Vec out = Vec::Zero(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const double xy = x(i) * y(j);
        if (xy == 0.0) continue;
        for (int k = 0; k < n; ++k) out(l) += curv.riemann(l, i, j, k) * xy * z(k);
      }
    }
  return out;
}

double sectional_curvature(const CurvatureData& curv, const Vec& x, const Vec& y) {
  const double xx = curv.inner(x, x);
  const double yy = curv.inner(y, y);
  const double xy = curv.inner(x, y);
  const double denom = xx * yy - xy * xy;
  if (!(denom > 1e-12 * std::max(1.0, xx * yy))) {
    throw DegenerateError("degenerate plane in sectional curvature");
  }
  return curv.inner(riemann_apply(curv, x, y, y), x) / denom;
}

double holomorphic_sectional(const CurvatureData& curv, const Mat& complex_structure, const Vec& x) {
  return sectional_curvature(curv, x, complex_structure * x);
}

Mat orthonormal_frame(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  Mat frame = Mat::Zero(n, n);
  int count = 0;
  for (int c = 0; c < n; ++c) {
    Vec v = Vec::Unit(n, c);
    for (int pass = 0; pass < 2; ++pass)
      for (int a = 0; a < count; ++a) v -= frame.col(a).dot(g * v) * frame.col(a);
    const double norm_sq = v.dot(g * v);
    if (!(norm_sq > 1e-24)) throw DegenerateError("metric degenerate while building frame");
    frame.col(count++) = v / std::sqrt(norm_sq);
  }
  return frame;
}

Mat ricci_frame_trace(const CurvatureData& curv) {
  const int n = curv.dim();
  const Mat frame = orthonormal_frame(curv.metric);
  Mat ric = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const Vec e = frame.col(a);
    for (int i = 0; i < n; ++i) {
      const Vec r = riemann_apply(curv, Vec::Unit(n, i), e, e);
      const Vec lowered = curv.metric * r;
      for (int j = 0; j < n; ++j) ric(i, j) += lowered(j);
    }
  }
  return ric;
}

double ricci_direction(const CurvatureData& curv, const Vec& v, bool zero_at_degenerate) {
  const double norm_sq = curv.inner(v, v);
  if (!(std::sqrt(std::max(norm_sq, 0.0)) >= 1e-12)) {
    if (zero_at_degenerate) return 0.0;
    throw DegenerateError("ricci_direction: vector norm below 1e-12");
  }
  return v.dot(curv.ricci * v) / norm_sq / (curv.dim() - 1);
}

Mat lie_derivative_metric(const VectorField& v, const MatrixField& metric, const Point& x) {
  const MatrixJets g = evaluate_jets(metric, x);
  const VectorJets vj = evaluate_jets(v, x);
  const int n = static_cast<int>(x.size());
  Mat out = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) out += vj.value(k) * g.d(k);
  // jacobian(k,i) = d_i V^k
  out += vj.jacobian.transpose() * g.value + g.value * vj.jacobian;
  return out;
}

double RiemannSymmetryResiduals::max() const {
  return std::max({antisymmetry, pair_symmetry, first_bianchi, ricci_symmetry,
                   christoffel_symmetry});
}

RiemannSymmetryResiduals riemann_symmetry_residuals(const CurvatureData& curv) {
  const int n = curv.dim();
  const Tensor4& R = curv.riemann_lowered;
  const double scale = std::max(1.0, R.max_abs());
  RiemannSymmetryResiduals res;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          res.antisymmetry = std::max(res.antisymmetry, std::abs(R(l, i, j, k) + R(l, j, i, k)));
          res.pair_symmetry = std::max(res.pair_symmetry, std::abs(R(l, i, j, k) - R(j, k, l, i)));
          res.first_bianchi = std::max(
              res.first_bianchi, std::abs(R(l, i, j, k) + R(l, j, k, i) + R(l, k, i, j)));
        }
  const double ric_scale = std::max(1.0, curv.ricci.cwiseAbs().maxCoeff());
  res.ricci_symmetry = (curv.ricci - curv.ricci.transpose()).cwiseAbs().maxCoeff() / ric_scale;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        res.christoffel_symmetry =
            std::max(res.christoffel_symmetry, std::abs(curv.gamma(k, i, j) - curv.gamma(k, j, i)));
  res.antisymmetry /= scale;
  res.pair_symmetry /= scale;
  res.first_bianchi /= scale;
  return res;
}

}  // namespace kdeform
