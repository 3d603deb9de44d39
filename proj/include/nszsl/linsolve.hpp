#pragma once

#include <cstddef>
#include <vector>

#include "nszsl/dense_matrix.hpp"

namespace nszsl::linsolve {

/// Scale-relative positivity tolerance: an eigenvalue (or pivot, or
/// eigenvalue-sum denominator) counts as positive when it exceeds
/// kSpdRelTol times the largest one.
inline constexpr double kSpdRelTol = 1e-12;

/// Maximum relative asymmetry accepted by the symmetric solvers.
inline constexpr double kSymTol = 1e-10;

/// Eigendecomposition m = Q diag(λ) Qᵀ of a real symmetric matrix.
/// Eigenvalues are sorted descending; column j of `eigenvectors` pairs
/// with eigenvalues[j].
struct SymmetricEigen {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;

  bool positive_definite(double rel_tol = kSpdRelTol) const;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// Throws NonSymmetric when the input asymmetry exceeds kSymTol and
/// NoConvergence if an eigenvalue fails to settle.
SymmetricEigen sym_eig(const DenseMatrix& m);

/// Cholesky factor of an SPD matrix; pivots are validated against the
/// scale-relative tolerance.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const DenseMatrix& spd);

  std::size_t dim() const noexcept { return lower_.rows(); }
  const DenseMatrix& lower() const noexcept { return lower_; }

  /// Solves m X = rhs for a block of right-hand sides.
  DenseMatrix solve(const DenseMatrix& rhs) const;

 private:
  DenseMatrix lower_;
};

/// m X = rhs with m SPD. Throws NotPositiveDefinite when a pivot falls
/// below tolerance.
DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs);

/// (x xᵀ + ridge I)⁻¹ rhs, ridge > 0. x is d×N, rhs is d×k.
DenseMatrix ridge_lstsq(const DenseMatrix& x, double ridge,
                        const DenseMatrix& rhs);

/// Solves a W + W b = c with a symmetric positive definite and b symmetric
/// positive semidefinite, via eigendecomposition of both coefficients:
/// W = U [ (Uᵀ c V)_ij / (α_i + β_j) ] Vᵀ. Throws SingularPencil when a
/// denominator α_i + β_j falls below the scale-relative tolerance.
DenseMatrix solve_sylvester_spd(const DenseMatrix& a, const DenseMatrix& b_sym,
                                const DenseMatrix& c);

/// Same equation with both eigendecompositions supplied by the caller.
DenseMatrix solve_sylvester_spd(const SymmetricEigen& a_eig,
                                const SymmetricEigen& b_eig,
                                const DenseMatrix& c);

/// Same equation with b supplied in factored form b = g gᵀ (g is q×r).
/// Only an r×r Gram eigendecomposition is needed, so this is the cheap
/// path when rank(b) ≪ q; results agree with the dense overloads to
/// rounding error. When `rel_residual` is non-null it receives
/// ‖a W + W b − c‖_F / max(‖c‖_F, 1), computed in the eigenbasis.
DenseMatrix solve_sylvester_spd_factored(const SymmetricEigen& a_eig,
                                         const DenseMatrix& g,
                                         const DenseMatrix& c,
                                         double* rel_residual = nullptr);

/// ‖a W + W b − c‖_F / max(‖c‖_F, 1).
double sylvester_residual(const DenseMatrix& a, const DenseMatrix& b_sym,
                          const DenseMatrix& c, const DenseMatrix& w);

/// Residual with b in factored form b = g gᵀ (never materializes b).
double sylvester_residual_factored(const DenseMatrix& a, const DenseMatrix& g,
                                   const DenseMatrix& c, const DenseMatrix& w);

}  // namespace nszsl::linsolve
