// Dense row-major matrices of doubles. Everything in this library is a
// DenseMatrix; graphs small enough (n <= 400) that sparse storage never pays.
#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gln {

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidAdjacencyError : public std::invalid_argument {
 public:
  explicit InvalidAdjacencyError(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidLabelError : public std::invalid_argument {
 public:
  explicit InvalidLabelError(const std::string& what) : std::invalid_argument(what) {}
};

class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows <= 0 || cols <= 0)
      throw DimensionError("DenseMatrix: dimensions must be positive, got " + shape_str(rows, cols));
  }

  DenseMatrix(int rows, int cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows <= 0 || cols <= 0)
      throw DimensionError("DenseMatrix: dimensions must be positive, got " + shape_str(rows, cols));
    if (data_.size() != static_cast<size_t>(rows) * cols)
      throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                           " does not match " + shape_str(rows, cols));
  }

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    if (rows_ == 0 || cols_ == 0) throw DimensionError("DenseMatrix: empty initializer");
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw DimensionError("DenseMatrix: ragged initializer rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix ones(int rows, int cols) { return DenseMatrix(rows, cols, 1.0); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  std::string shape() const { return shape_str(rows_, cols_); }

  static std::string shape_str(int r, int c) {
    return std::to_string(r) + "x" + std::to_string(c);
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

namespace detail {
using EigenRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
inline Eigen::Map<const EigenRowMajor> emap(const DenseMatrix& m) {
  return {m.data(), m.rows(), m.cols()};
}
inline Eigen::Map<EigenRowMajor> emap(DenseMatrix& m) {
  return {m.data(), m.rows(), m.cols()};
}
}  // namespace detail

inline void check_same_shape(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(op) + ": shapes disagree: " + a.shape() + " vs " + b.shape());
}

// c = a * b
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions disagree: " + a.shape() + " * " + b.shape());
  DenseMatrix c(a.rows(), b.cols());
  detail::emap(c).noalias() = detail::emap(a) * detail::emap(b);
  return c;
}

// c = a * b^T
inline DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols())
    throw DimensionError("matmul_nt: inner dimensions disagree: " + a.shape() + " * " + b.shape() + "^T");
  DenseMatrix c(a.rows(), b.rows());
  detail::emap(c).noalias() = detail::emap(a) * detail::emap(b).transpose();
  return c;
}

// c = a^T * b
inline DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows())
    throw DimensionError("matmul_tn: inner dimensions disagree: " + a.shape() + "^T * " + b.shape());
  DenseMatrix c(a.cols(), b.cols());
  detail::emap(c).noalias() = detail::emap(a).transpose() * detail::emap(b);
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix c(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
  return c;
}

inline DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape("add", a, b);
  DenseMatrix c = a;
  for (size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

inline DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape("sub", a, b);
  DenseMatrix c = a;
  for (size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

inline DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape("mul", a, b);
  DenseMatrix c = a;
  for (size_t i = 0; i < c.size(); ++i) c.data()[i] *= b.data()[i];
  return c;
}

inline DenseMatrix scale(const DenseMatrix& a, double s) {
  DenseMatrix c = a;
  for (size_t i = 0; i < c.size(); ++i) c.data()[i] *= s;
  return c;
}

inline double sum(const DenseMatrix& a) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data()[i];
  return s;
}

// Numerically stable logistic; exact at 0, no overflow for |x| > 700.
inline double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

inline bool all_finite(const DenseMatrix& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape("max_abs_diff", a, b);
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace gln
