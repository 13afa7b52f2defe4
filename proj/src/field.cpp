#include "kdeform/field.hpp"

#include <algorithm>
#include <cmath>

namespace kdeform {

JetMatrix JetMatrix::identity(int n) {
  JetMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat JetMatrix::value() const {
  Mat out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).value();
  return out;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("jet matrix shape mismatch");
  JetMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Jet2 acc;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

JetVector operator*(const JetMatrix& a, const JetVector& v) {
  if (a.cols() != static_cast<int>(v.size())) throw std::invalid_argument("jet matrix-vector mismatch");
  JetVector out(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    Jet2 acc;
    for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * v[k];
    out[i] = acc;
  }
  return out;
}

JetMatrix transpose(const JetMatrix& a) {
  JetMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Jet2 dot(const JetVector& a, const JetVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("jet vector size mismatch");
  Jet2 acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

MatrixJets matrix_jets(const JetMatrix& m) {
  int dim = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) dim = std::max(dim, m(i, j).dim());

  MatrixJets out;
  out.dim = dim;
  out.value = m.value();
  out.first.assign(dim, Mat::Zero(m.rows(), m.cols()));
  out.second.assign(static_cast<std::size_t>(dim) * dim, Mat::Zero(m.rows(), m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Jet2& e = m(i, j);
      if (e.dim() == 0) continue;
      for (int k = 0; k < dim; ++k) {
        out.first[k](i, j) = e.grad(k);
        for (int l = 0; l < dim; ++l) out.second[k * dim + l](i, j) = e.hess(k, l);
      }
    }
  return out;
}

VectorJets vector_jets(const JetVector& v) {
  int dim = 0;
  for (const auto& e : v) dim = std::max(dim, e.dim());
  const int n = static_cast<int>(v.size());

  VectorJets out;
  out.dim = dim;
  out.value.resize(n);
  out.jacobian = Mat::Zero(n, dim);
  out.second.assign(n, Mat::Zero(dim, dim));
  for (int i = 0; i < n; ++i) {
    out.value(i) = v[i].value();
    if (v[i].dim() == 0) continue;
    out.jacobian.row(i) = v[i].grad().transpose();
    out.second[i] = v[i].hess();
  }
  return out;
}

MatrixJets evaluate_jets(const MatrixField& field, const Point& x) {
  const auto seeds = seed_point({x.data(), static_cast<std::size_t>(x.size())});
  MatrixJets out = matrix_jets(field(seeds));
  if (out.dim == 0) {
    // Constant field: pad derivatives to the chart dimension.
    out.dim = static_cast<int>(x.size());
    out.first.assign(out.dim, Mat::Zero(out.value.rows(), out.value.cols()));
    out.second.assign(static_cast<std::size_t>(out.dim) * out.dim,
                      Mat::Zero(out.value.rows(), out.value.cols()));
  }
  return out;
}

VectorJets evaluate_jets(const VectorField& field, const Point& x) {
  const auto seeds = seed_point({x.data(), static_cast<std::size_t>(x.size())});
  VectorJets out = vector_jets(field(seeds));
  if (out.dim == 0) {
    out.dim = static_cast<int>(x.size());
    out.jacobian = Mat::Zero(out.value.size(), out.dim);
    out.second.assign(out.value.size(), Mat::Zero(out.dim, out.dim));
  }
  return out;
}

Mat evaluate_value(const MatrixField& field, const Point& x) {
  return field(constant_point({x.data(), static_cast<std::size_t>(x.size())})).value();
}

Vec evaluate_value(const VectorField& field, const Point& x) {
  const JetVector v = field(constant_point({x.data(), static_cast<std::size_t>(x.size())}));
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

}  // namespace kdeform
