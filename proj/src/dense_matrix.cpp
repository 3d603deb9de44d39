#include "nszsl/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "nszsl/errors.hpp"
#include "nszsl/kernels.hpp"

namespace nszsl {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw DimensionMismatch(what);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
  require(data_.size() == rows * cols,
          "entry count does not match rows * cols");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

// C[i,:] += a(i,k) * B[k,:], streaming rows of B through the axpy kernel.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      if (ai[p] != 0.0) k.axpy(ai[p], b.row_ptr(p), ci, b.cols());
    }
  }
  return c;
}

// (aᵀ b)[i,:] += a(p,i) * b[p,:] accumulated over the shared row index p.
DenseMatrix matmul_atb(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), "matmul_atb: row counts differ");
  const auto& k = kernels::active();
  DenseMatrix c(a.cols(), b.cols(), 0.0);
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double* ap = a.row_ptr(p);
    const double* bp = b.row_ptr(p);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      if (ap[i] != 0.0) k.axpy(ap[i], bp, c.row_ptr(i), b.cols());
    }
  }
  return c;
}

// (a bᵀ)(i,j) = <a row i, b row j>; rows are contiguous so this is a dot.
DenseMatrix matmul_abt(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(), "matmul_abt: column counts differ");
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      ci[j] = k.dot(ai, b.row_ptr(j), a.cols());
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shapes differ");
  DenseMatrix c = a;
  kernels::active().axpy(1.0, b.data(), c.data(), c.size());
  return c;
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shapes differ");
  DenseMatrix c = a;
  kernels::active().axpy(-1.0, b.data(), c.data(), c.size());
  return c;
}

void scale_in_place(DenseMatrix& a, double alpha) {
  kernels::active().scale(alpha, a.data(), a.size());
}

void add_scaled_identity(DenseMatrix& a, double alpha) {
  require(a.rows() == a.cols(), "add_scaled_identity: matrix not square");
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += alpha;
}

void scale_rows(DenseMatrix& a, std::span<const double> d) {
  require(d.size() == a.rows(), "scale_rows: diagonal length != rows");
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    k.scale(d[i], a.row_ptr(i), a.cols());
  }
}

void scale_cols(DenseMatrix& a, std::span<const double> d) {
  require(d.size() == a.cols(), "scale_cols: diagonal length != cols");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* row = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] *= d[j];
  }
}

double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(kernels::active().sumsq(a.data(), a.size()));
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.data()[i]));
  }
  return m;
}

std::vector<double> column_sumsq(const DenseMatrix& a) {
  const auto& k = kernels::active();
  std::vector<double> acc(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    k.mul_acc(a.row_ptr(i), a.row_ptr(i), acc.data(), a.cols());
  }
  return acc;
}

double relative_asymmetry(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("asymmetry: not square");
  double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
    }
  }
  return worst / scale;
}

}  // namespace nszsl
