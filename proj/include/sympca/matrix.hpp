#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sympca {

/// Dense real matrix, row-major. The single carrier type for data matrices,
/// iterates, factors and perturbations.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Build from explicit rows; every row must have the same length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);
  /// n x n matrix with `d` on the diagonal.
  static Matrix diag(std::span<const double> d);
  /// n x p matrix whose columns are the canonical vectors e_{idx[0]}, ...
  static Matrix canonical_columns(std::size_t n, std::span<const std::size_t> idx);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  bool all_finite() const noexcept;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix m, double s);
Matrix operator*(double s, Matrix m);

/// A * B
Matrix operator*(const Matrix& a, const Matrix& b);
/// A^T B without forming A^T.
Matrix transpose_times(const Matrix& a, const Matrix& b);
/// A B^T without forming B^T.
Matrix times_transpose(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// Frobenius inner product <A, B>.
double frobenius_dot(const Matrix& a, const Matrix& b);
/// max_ij |A_ij - B_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Scale row i of m by d[i] (i.e. diag(d) * m).
Matrix scale_rows(std::span<const double> d, const Matrix& m);

} // namespace sympca
