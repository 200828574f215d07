#include "mcg/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

[[noreturn]] void throw_shape(std::string_view op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_string() +
                       " and " + b.shape_string());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix& Matrix::operator+=(const Matrix& other) {
  if (!same_shape(other)) throw_shape("operator+=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (!same_shape(other)) throw_shape("operator-=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }

// Inner kernels, cloned for AVX2 with runtime dispatch where the toolchain
// supports it. No FMA contraction, so every clone rounds identically.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && defined(__linux__)
#define MCG_KERNEL __attribute__((target_clones("avx2", "default")))
#else
#define MCG_KERNEL
#endif

MCG_KERNEL
static void gemm_nn(const double* a, const double* b, double* out, std::size_t n, std::size_t m,
                    std::size_t p) {
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out + i * p;
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = a[i * m + k];
      if (aik == 0.0) continue;
      const double* brow = b + k * p;
      for (std::size_t j = 0; j < p; ++j) orow[j] += aik * brow[j];
    }
  }
}

MCG_KERNEL
static void gemm_tn_acc(const double* a, const double* b, double* out, std::size_t n,
                        std::size_t m, std::size_t p) {
  for (std::size_t r = 0; r < n; ++r) {
    const double* arow = a + r * m;
    const double* brow = b + r * p;
    for (std::size_t i = 0; i < m; ++i) {
      const double ari = arow[i];
      if (ari == 0.0) continue;
      double* orow = out + i * p;
      for (std::size_t j = 0; j < p; ++j) orow[j] += ari * brow[j];
    }
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw_shape("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  gemm_nn(a.data().data(), b.data().data(), out.data().data(), a.rows(), a.cols(), b.cols());
  require_finite(out, "matmul");
  return out;
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.rows() != b.rows()) throw_shape("matmul_tn", a, b);
  if (out.rows() != a.cols() || out.cols() != b.cols()) throw_shape("matmul_tn_acc(out)", out, b);
  gemm_tn_acc(a.data().data(), b.data().data(), out.data().data(), a.rows(), a.cols(), b.cols());
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  Matrix out(a.cols(), b.cols());
  matmul_tn_acc(a, b, out);
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw_shape("matmul_nt", a, b);
  const Matrix bt = transpose(b);
  Matrix out(a.rows(), b.rows());
  gemm_nn(a.data().data(), bt.data().data(), out.data().data(), a.rows(), a.cols(), b.rows());
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw_shape("hadamard", a, b);
  Matrix out = a;
  auto od = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
  return out;
}

Matrix hconcat(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw_shape("hconcat", parts.front(), p);
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < rows; ++r) {
      auto src = p.row(r);
      std::copy(src.begin(), src.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
    }
    offset += p.cols();
  }
  return out;
}

Matrix column_block(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols()) {
    throw DimensionError("column_block: columns [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") out of range for " +
                         a.shape_string());
  }
  Matrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto src = a.row(r).subspan(first, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Matrix row_block(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.rows()) {
    throw DimensionError("row_block: rows [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") out of range for " +
                         a.shape_string());
  }
  auto src = a.data().subspan(first * a.cols(), count * a.cols());
  return Matrix(count, a.cols(), std::vector<double>(src.begin(), src.end()));
}

void add_row_block(Matrix& dst, std::size_t first, const Matrix& src) {
  if (src.cols() != dst.cols() || first + src.rows() > dst.rows()) {
    throw_shape("add_row_block", dst, src);
  }
  auto d = dst.data().subspan(first * dst.cols(), src.size());
  auto s = src.data();
  for (std::size_t i = 0; i < s.size(); ++i) d[i] += s[i];
}

void add_column_block(Matrix& dst, std::size_t first, const Matrix& src) {
  if (src.rows() != dst.rows() || first + src.cols() > dst.cols()) {
    throw_shape("add_column_block", dst, src);
  }
  for (std::size_t r = 0; r < src.rows(); ++r) {
    auto d = dst.row(r).subspan(first, src.cols());
    auto s = src.row(r);
    for (std::size_t c = 0; c < s.size(); ++c) d[c] += s[c];
  }
}

Matrix column_sums(const Matrix& a) {
  Matrix out(1, a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto src = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) out(0, c) += src[c];
  }
  return out;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return s;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double squared_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& a, std::string_view what) {
  if (!all_finite(a)) {
    throw NumericError(std::string(what) + ": non-finite entry in " + a.shape_string() +
                       " matrix");
  }
}

std::vector<double> softmax(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("softmax: empty input");
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("softmax: non-finite input");
  }
  const double peak = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - peak);
    total += out[i];
  }
  for (auto& x : out) x /= total;
  return out;
}

}  // namespace mcg
