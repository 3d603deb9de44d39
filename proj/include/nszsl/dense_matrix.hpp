#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nszsl {

/// Dense real matrix, row-major storage. Entry (i, j) lives at
/// data()[i * cols() + j].
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  double* row_ptr(std::size_t i) noexcept { return data_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const noexcept {
    return data_.data() + i * cols_;
  }
  std::span<double> row(std::size_t i) noexcept {
    return {row_ptr(i), cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {row_ptr(i), cols_};
  }

  bool all_finite() const noexcept;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// --- products ---------------------------------------------------------

/// a (m×k) · b (k×n)
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ (m×k from a k×m) · b (k×n)
DenseMatrix matmul_atb(const DenseMatrix& a, const DenseMatrix& b);
/// a (m×k) · bᵀ (k×n from b n×k)
DenseMatrix matmul_abt(const DenseMatrix& a, const DenseMatrix& b);

// --- elementwise / structural -----------------------------------------

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
void scale_in_place(DenseMatrix& a, double alpha);
void add_scaled_identity(DenseMatrix& a, double alpha);

/// Left-multiply by diag(d): row i scaled by d[i].
void scale_rows(DenseMatrix& a, std::span<const double> d);
/// Right-multiply by diag(d): column j scaled by d[j].
void scale_cols(DenseMatrix& a, std::span<const double> d);

// --- reductions --------------------------------------------------------

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
/// Squared l2 norm of every column (length cols()).
std::vector<double> column_sumsq(const DenseMatrix& a);

/// Largest relative asymmetry max|a - aᵀ| / max|a| (0 for the zero matrix).
double relative_asymmetry(const DenseMatrix& a);

}  // namespace nszsl
