#pragma once

// Shared helpers for the test suites. The naive_* routines are written
// with plain index loops only, so they stay independent of the kernel
// layer they help to check.

#include <cmath>
#include <random>
#include <vector>

#include "nszsl/dense_matrix.hpp"
#include "nszsl/model.hpp"

namespace testsupport {

inline nszsl::DenseMatrix random_matrix(std::size_t rows, std::size_t cols,
                                        std::mt19937_64& rng, double lo = -1.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  nszsl::DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

/// G Gᵀ + I: comfortably SPD.
inline nszsl::DenseMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
  nszsl::DenseMatrix g = random_matrix(n, n, rng);
  nszsl::DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
      m(i, j) = s + (i == j ? 1.0 : 0.0);
    }
  }
  return m;
}

/// G Gᵀ with G n×r: PSD, rank ≤ r.
inline nszsl::DenseMatrix random_psd(std::size_t n, std::size_t r,
                                     std::mt19937_64& rng) {
  nszsl::DenseMatrix g = random_matrix(n, r, rng);
  nszsl::DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < r; ++k) s += g(i, k) * g(j, k);
      m(i, j) = s;
    }
  }
  return m;
}

inline nszsl::DenseMatrix naive_matmul(const nszsl::DenseMatrix& a,
                                       const nszsl::DenseMatrix& b) {
  nszsl::DenseMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

inline nszsl::DenseMatrix naive_transpose(const nszsl::DenseMatrix& a) {
  nszsl::DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

inline double naive_frobenius(const nszsl::DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

inline double max_abs_diff(const nszsl::DenseMatrix& a,
                           const nszsl::DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

/// Dense Gaussian elimination with partial pivoting; the independent
/// reference solver behind the Kronecker brute-force oracle.
inline std::vector<double> naive_gauss_solve(nszsl::DenseMatrix a,
                                             std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::fabs(a(row, col)) > std::fabs(a(pivot, col))) pivot = row;
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a(row, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(row, j) -= factor * a(col, j);
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

/// Small random problem for the solver tests.
struct TinyProblem {
  nszsl::TrainingSet train;
  nszsl::DenseMatrix wx;
};

inline TinyProblem random_problem(std::size_t m, std::size_t d,
                                  std::size_t d_hat, std::size_t c,
                                  std::size_t n, std::mt19937_64& rng) {
  TinyProblem p;
  p.train.x = random_matrix(d, n, rng);
  p.train.y.num_classes = c;
  std::uniform_int_distribution<std::size_t> label(0, c - 1);
  // Every class gets at least one example, remainder random.
  for (std::size_t i = 0; i < n; ++i) {
    p.train.y.class_index.push_back(i < c ? i : label(rng));
  }
  std::bernoulli_distribution bit(0.5);
  p.train.z.weighting = nszsl::text::Weighting::binary;
  p.train.z.entries = nszsl::DenseMatrix(d_hat, c);
  for (std::size_t j = 0; j < c; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < d_hat; ++i) {
      const bool v = bit(rng);
      p.train.z.entries(i, j) = v ? 1.0 : 0.0;
      any = any || v;
    }
    if (!any) p.train.z.entries(j % d_hat, j) = 1.0;
  }
  for (std::size_t j = 0; j < c; ++j) {
    p.train.z.class_ids.push_back("c" + std::to_string(j));
  }
  p.wx = random_matrix(m, d, rng);
  return p;
}

}  // namespace testsupport
