#include "nszsl/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nszsl/errors.hpp"
#include "nszsl/kernels.hpp"

namespace nszsl::linsolve {

namespace {

constexpr int kMaxQlIterations = 50;

DenseMatrix symmetrized(const DenseMatrix& m) {
  DenseMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      s(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return s;
}

void check_symmetric(const DenseMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(who) + ": matrix not square");
  }
  if (relative_asymmetry(m) > kSymTol) {
    throw NonSymmetric(std::string(who) + ": relative asymmetry exceeds 1e-10");
  }
}

// Householder reduction of the symmetric matrix stored in v to tridiagonal
// form (d = diagonal, e = subdiagonal), accumulating the transformations
// in v. Classic EISPACK/JAMA tred2 scheme.
void tridiagonalize(DenseMatrix& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());

  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) {
          v(k, j) -= f * e[k] + g * d[k];
        }
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate the Householder transformations.
  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), rotations accumulated
// into v. Throws NoConvergence if an eigenvalue needs more than
// kMaxQlIterations sweeps.
void ql_implicit(DenseMatrix& v, std::vector<double>& d,
                 std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());

  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    int m = l;
    while (m < n) {
      if (std::fabs(e[m]) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations) {
          throw NoConvergence("sym_eig: QL iteration failed to converge");
        }

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          for (int k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

bool SymmetricEigen::positive_definite(double rel_tol) const {
  if (eigenvalues.empty()) return false;
  const double largest = eigenvalues.front();
  return largest > 0.0 && eigenvalues.back() > rel_tol * largest;
}

SymmetricEigen sym_eig(const DenseMatrix& m) {
  check_symmetric(m, "sym_eig");
  const std::size_t n = m.rows();

  DenseMatrix v = symmetrized(m);
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);

  if (n == 1) {
    d[0] = v(0, 0);
    v(0, 0) = 1.0;
  } else {
    tridiagonalize(v, d, e);
    ql_implicit(v, d, e);
  }

  // Sort eigenpairs descending.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  SymmetricEigen result;
  result.dim = n;
  result.eigenvalues.resize(n);
  result.eigenvectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    result.eigenvalues[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) {
      result.eigenvectors(i, j) = v(i, order[j]);
    }
  }
  return result;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& spd) {
  if (spd.rows() != spd.cols()) {
    throw DimensionMismatch("cholesky: matrix not square");
  }
  const std::size_t n = spd.rows();
  const auto& k = kernels::active();

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, spd(i, i));
  }
  const double pivot_tol = kSpdRelTol * max_diag;

  lower_ = DenseMatrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double s =
          0.5 * (spd(i, j) + spd(j, i)) -
          k.dot(lower_.row_ptr(i), lower_.row_ptr(j), j);
      if (i == j) {
        if (!(s > pivot_tol)) {
          throw NotPositiveDefinite(
              "cholesky: pivot below scale-relative tolerance");
        }
        lower_(i, i) = std::sqrt(s);
      } else {
        lower_(i, j) = s / lower_(j, j);
      }
    }
  }
}

DenseMatrix CholeskyFactor::solve(const DenseMatrix& rhs) const {
  const std::size_t n = dim();
  if (rhs.rows() != n) {
    throw DimensionMismatch("cholesky solve: rhs row count mismatch");
  }
  const auto& k = kernels::active();

  // L y = rhs
  DenseMatrix x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      k.axpy(-lower_(i, j), x.row_ptr(j), x.row_ptr(i), x.cols());
    }
    k.scale(1.0 / lower_(i, i), x.row_ptr(i), x.cols());
  }
  // Lᵀ x = y
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) {
      k.axpy(-lower_(j, ii), x.row_ptr(j), x.row_ptr(ii), x.cols());
    }
    k.scale(1.0 / lower_(ii, ii), x.row_ptr(ii), x.cols());
  }
  return x;
}

DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs) {
  check_symmetric(m, "solve_spd");
  return CholeskyFactor(m).solve(rhs);
}

DenseMatrix ridge_lstsq(const DenseMatrix& x, double ridge,
                        const DenseMatrix& rhs) {
  if (!(ridge > 0.0)) {
    throw Error("InvalidArgument", "ridge_lstsq: ridge must be positive");
  }
  if (rhs.rows() != x.rows()) {
    throw DimensionMismatch("ridge_lstsq: rhs row count mismatch");
  }
  DenseMatrix gram = matmul_abt(x, x);
  add_scaled_identity(gram, ridge);
  return CholeskyFactor(gram).solve(rhs);
}

DenseMatrix solve_sylvester_spd(const SymmetricEigen& a_eig,
                                const SymmetricEigen& b_eig,
                                const DenseMatrix& c) {
  const std::size_t m = a_eig.dim;
  const std::size_t q = b_eig.dim;
  if (c.rows() != m || c.cols() != q) {
    throw DimensionMismatch("solve_sylvester_spd: c shape mismatch");
  }

  // Each side's eigenvalues are zero-tested against its own scale; since
  // neither side may be negative under the SPD/PSD contract, the pencil is
  // singular exactly when both sides carry a numerical zero.
  if (!a_eig.positive_definite() && !b_eig.positive_definite()) {
    throw SingularPencil(
        "solve_sylvester_spd: both coefficients have zero eigenvalues, no "
        "unique solution");
  }

  // W = U [ (Uᵀ c V)_ij / (α_i + β_j) ] Vᵀ
  DenseMatrix t = matmul(matmul_atb(a_eig.eigenvectors, c), b_eig.eigenvectors);
  for (std::size_t i = 0; i < m; ++i) {
    double* row = t.row_ptr(i);
    const double alpha = a_eig.eigenvalues[i];
    for (std::size_t j = 0; j < q; ++j) {
      const double denom = alpha + b_eig.eigenvalues[j];
      if (!(denom > 0.0)) {
        throw SingularPencil(
            "solve_sylvester_spd: non-positive eigenvalue sum (inputs "
            "outside the SPD/PSD contract)");
      }
      row[j] /= denom;
    }
  }
  return matmul_abt(matmul(a_eig.eigenvectors, t), b_eig.eigenvectors);
}

DenseMatrix solve_sylvester_spd(const DenseMatrix& a, const DenseMatrix& b_sym,
                                const DenseMatrix& c) {
  check_symmetric(a, "solve_sylvester_spd(a)");
  check_symmetric(b_sym, "solve_sylvester_spd(b)");
  return solve_sylvester_spd(sym_eig(a), sym_eig(b_sym), c);
}

DenseMatrix solve_sylvester_spd_factored(const SymmetricEigen& a_eig,
                                         const DenseMatrix& g,
                                         const DenseMatrix& c,
                                         double* rel_residual) {
  const std::size_t m = a_eig.dim;
  const std::size_t q = g.rows();
  const std::size_t r = g.cols();
  if (c.rows() != m || c.cols() != q) {
    throw DimensionMismatch("solve_sylvester_spd_factored: c shape mismatch");
  }

  // Eigenvalues of b = g gᵀ are those of the r×r Gram gᵀ g padded with
  // zeros; eigenvectors for the nonzero part are v_j = g h_j / sqrt(β_j).
  const SymmetricEigen gram_eig = sym_eig(matmul_atb(g, g));
  const double beta_max = std::max(gram_eig.eigenvalues.front(), 0.0);
  const double beta_tol = kSpdRelTol * beta_max;

  std::size_t rank = 0;
  while (rank < r && gram_eig.eigenvalues[rank] > beta_tol) ++rank;

  // The null space of b = g gᵀ (and the numerical residue of its range
  // projector) is handled by dividing by α alone, so this path needs a
  // strictly positive definite a, zero-tested against its own scale.
  if (!a_eig.positive_definite()) {
    throw SingularPencil(
        "solve_sylvester_spd_factored: a is not positive definite, no "
        "unique solution against the null space of g gᵀ");
  }

  DenseMatrix ct = matmul_atb(a_eig.eigenvectors, c);  // m×q

  // Null-space part: rows of ct scaled by 1/α_i.
  DenseMatrix w_bar = ct;
  for (std::size_t i = 0; i < m; ++i) {
    kernels::active().scale(1.0 / a_eig.eigenvalues[i], w_bar.row_ptr(i), q);
  }

  if (rank > 0) {
    DenseMatrix v1(q, rank);
    {
      DenseMatrix h_kept(r, rank);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < rank; ++j) {
          h_kept(i, j) = gram_eig.eigenvectors(i, j);
        }
      }
      v1 = matmul(g, h_kept);
      std::vector<double> inv_sqrt(rank);
      for (std::size_t j = 0; j < rank; ++j) {
        inv_sqrt[j] = 1.0 / std::sqrt(gram_eig.eigenvalues[j]);
      }
      scale_cols(v1, inv_sqrt);
    }

    // Range-space correction: (T ./ (α_i + β_j) − T ./ α_i) V1ᵀ.
    DenseMatrix t = matmul(ct, v1);  // m×rank
    for (std::size_t i = 0; i < m; ++i) {
      const double alpha = a_eig.eigenvalues[i];
      double* row = t.row_ptr(i);
      for (std::size_t j = 0; j < rank; ++j) {
        const double beta = gram_eig.eigenvalues[j];
        row[j] = row[j] / (alpha + beta) - row[j] / alpha;
      }
    }
    DenseMatrix correction = matmul_abt(t, v1);  // m×q
    kernels::active().axpy(1.0, correction.data(), w_bar.data(),
                           w_bar.size());
  }

  if (rel_residual != nullptr) {
    // In the eigenbasis of a: ‖diag(α) W̄ + (W̄ g) gᵀ − Uᵀc‖_F, with the
    // Frobenius norm untouched by the orthogonal change of basis.
    DenseMatrix r = matmul_abt(matmul(w_bar, g), g);
    for (std::size_t i = 0; i < m; ++i) {
      kernels::active().axpy(a_eig.eigenvalues[i], w_bar.row_ptr(i),
                             r.row_ptr(i), q);
    }
    kernels::active().axpy(-1.0, ct.data(), r.data(), r.size());
    *rel_residual =
        frobenius_norm(r) / std::max(frobenius_norm(c), 1.0);
  }

  return matmul(a_eig.eigenvectors, w_bar);
}

double sylvester_residual(const DenseMatrix& a, const DenseMatrix& b_sym,
                          const DenseMatrix& c, const DenseMatrix& w) {
  DenseMatrix r = sub(add(matmul(a, w), matmul(w, b_sym)), c);
  return frobenius_norm(r) / std::max(frobenius_norm(c), 1.0);
}

double sylvester_residual_factored(const DenseMatrix& a, const DenseMatrix& g,
                                   const DenseMatrix& c, const DenseMatrix& w) {
  DenseMatrix wb = matmul_abt(matmul(w, g), g);
  DenseMatrix r = sub(add(matmul(a, w), wb), c);
  return frobenius_norm(r) / std::max(frobenius_norm(c), 1.0);
}

}  // namespace nszsl::linsolve
