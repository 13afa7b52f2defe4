#pragma once

#include "kdeform/jet.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdeform {

using Point = Eigen::VectorXd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Evaluation point lies outside the chart domain (or |xi|^2 >= c).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Degenerate input: zero vector, singular metric, collapsed plane.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hypothesis of a theorem-level operation does not hold for the input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of jets.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static JetMatrix identity(int n);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  Jet2& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const Jet2& operator()(int i, int j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] Mat value() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Jet2> data_;
};

using VectorField = std::function<JetVector(JetSpan)>;
using MatrixField = std::function<JetMatrix(JetSpan)>;

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetVector operator*(const JetMatrix& a, const JetVector& v);
JetMatrix transpose(const JetMatrix& a);
Jet2 dot(const JetVector& a, const JetVector& b);

/// Rank-3 array of doubles with every index running over [0, n).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  [[nodiscard]] int size() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }
  [[nodiscard]] double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Rank-4 array of doubles with every index running over [0, n).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  [[nodiscard]] int size() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[((a * n_ + b) * n_ + c) * n_ + d]; }
  double operator()(int a, int b, int c, int d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  [[nodiscard]] double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Value, first and second coordinate derivatives of a matrix field at a point.
/// first[k](i,j) = d_k A_ij, second[k*dim+l](i,j) = d_k d_l A_ij.
struct MatrixJets {
  int dim = 0;
  Mat value;
  std::vector<Mat> first;
  std::vector<Mat> second;

  [[nodiscard]] const Mat& d(int k) const { return first[k]; }
  [[nodiscard]] const Mat& dd(int k, int l) const { return second[k * dim + l]; }
};

/// Value and derivatives of a vector field: jacobian(i,k) = d_k V^i,
/// second[i](k,l) = d_k d_l V^i.
struct VectorJets {
  int dim = 0;
  Vec value;
  Mat jacobian;
  std::vector<Mat> second;
};

MatrixJets matrix_jets(const JetMatrix& m);
VectorJets vector_jets(const JetVector& v);

MatrixJets evaluate_jets(const MatrixField& field, const Point& x);
VectorJets evaluate_jets(const VectorField& field, const Point& x);

Mat evaluate_value(const MatrixField& field, const Point& x);
Vec evaluate_value(const VectorField& field, const Point& x);

}  // namespace kdeform
