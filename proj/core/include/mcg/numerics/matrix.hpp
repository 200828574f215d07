#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcg {

// Dense row-major f64 matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string shape_string() const;

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  void fill(double v);
  void set_zero() { fill(0.0); }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);

Matrix matmul(const Matrix& a, const Matrix& b);
// aᵀ·b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a·bᵀ without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// out += aᵀ·b
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out);

Matrix transpose(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);

// Horizontal concatenation; all parts must share the row count.
Matrix hconcat(std::span<const Matrix> parts);
// Columns [first, first + count).
Matrix column_block(const Matrix& a, std::size_t first, std::size_t count);
// Rows [first, first + count).
Matrix row_block(const Matrix& a, std::size_t first, std::size_t count);
void add_row_block(Matrix& dst, std::size_t first, const Matrix& src);
void add_column_block(Matrix& dst, std::size_t first, const Matrix& src);

// Column sums as a 1×cols matrix.
Matrix column_sums(const Matrix& a);
double sum(const Matrix& a);
double max_abs(const Matrix& a);
double squared_norm(const Matrix& a);

bool all_finite(const Matrix& a);
// Throws NumericError naming `what` if any entry is NaN/Inf.
void require_finite(const Matrix& a, std::string_view what);

std::vector<double> softmax(std::span<const double> v);

}  // namespace mcg
