#include <doctest.h>

#include <cmath>
#include <random>

#include "nszsl/errors.hpp"
#include "nszsl/linsolve.hpp"
#include "support.hpp"

using namespace nszsl;
using namespace nszsl::linsolve;
using namespace testsupport;

namespace {

double reconstruction_error(const DenseMatrix& m, const SymmetricEigen& eig) {
  // ‖Q Λ Qᵀ − M‖_F / ‖M‖_F
  DenseMatrix scaled = eig.eigenvectors;
  scale_cols(scaled, eig.eigenvalues);
  DenseMatrix recon = matmul_abt(scaled, eig.eigenvectors);
  return frobenius_norm(sub(recon, m)) / frobenius_norm(m);
}

double orthogonality_error(const SymmetricEigen& eig) {
  DenseMatrix qtq = matmul_atb(eig.eigenvectors, eig.eigenvectors);
  add_scaled_identity(qtq, -1.0);
  return frobenius_norm(qtq);
}

// Row-stacked Kronecker brute force: (A ⊗ I_q + I_m ⊗ Bᵀ) vec(W) = vec(C).
DenseMatrix kronecker_sylvester(const DenseMatrix& a, const DenseMatrix& b,
                                const DenseMatrix& c) {
  const std::size_t m = a.rows();
  const std::size_t q = b.rows();
  DenseMatrix big(m * q, m * q, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const std::size_t row = i * q + j;
      for (std::size_t k = 0; k < m; ++k) big(row, k * q + j) += a(i, k);
      for (std::size_t k = 0; k < q; ++k) big(row, i * q + k) += b(k, j);
    }
  }
  std::vector<double> rhs(c.data(), c.data() + c.size());
  std::vector<double> sol = naive_gauss_solve(big, std::move(rhs));
  return DenseMatrix(m, q, std::move(sol));
}

}  // namespace

TEST_SUITE("linsolve") {

TEST_CASE("sym_eig: identity") {
  SymmetricEigen eig = sym_eig(DenseMatrix::identity(3));
  for (double ev : eig.eigenvalues) CHECK(ev == doctest::Approx(1.0));
  CHECK(orthogonality_error(eig) <= 1e-10);
}

TEST_CASE("sym_eig: diagonal") {
  DenseMatrix m(2, 2, 0.0);
  m(0, 0) = 5.0;
  m(1, 1) = 2.0;
  SymmetricEigen eig = sym_eig(m);
  CHECK(eig.eigenvalues[0] == doctest::Approx(5.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
  // Eigenvectors are a signed permutation of the axes.
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i) {
      const double v = std::fabs(eig.eigenvectors(i, j));
      CHECK((v < 1e-12 || v == doctest::Approx(1.0)));
    }
  }
}

TEST_CASE("sym_eig: hand-computed characteristic polynomial") {
  // [[2,1],[1,2]]: λ² − 4λ + 3 = (λ−3)(λ−1)
  DenseMatrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  SymmetricEigen eig = sym_eig(m);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eig: random reconstruction and orthogonality") {
  std::mt19937_64 rng(123);
  for (std::size_t n : {2u, 5u, 17u, 40u}) {
    DenseMatrix g = random_matrix(n, n, rng);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = 0.5 * (g(i, j) + g(j, i));
      }
    }
    SymmetricEigen eig = sym_eig(m);
    CHECK(std::is_sorted(eig.eigenvalues.rbegin(), eig.eigenvalues.rend()));
    CHECK(reconstruction_error(m, eig) <= 1e-10);
    CHECK(orthogonality_error(eig) <= 1e-10);
  }
}

TEST_CASE("sym_eig: rejects asymmetry beyond tolerance") {
  DenseMatrix m(2, 2, 0.0);
  m(0, 1) = 1.0;
  m(1, 0) = 1.001;
  CHECK_THROWS_AS(sym_eig(m), NonSymmetric);
  CHECK_THROWS_AS(sym_eig(DenseMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("solve_spd: identity and diagonal cases") {
  std::mt19937_64 rng(5);
  DenseMatrix rhs = random_matrix(3, 2, rng);
  CHECK(max_abs_diff(solve_spd(DenseMatrix::identity(3), rhs), rhs) < 1e-14);

  DenseMatrix d(2, 2, 0.0);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  DenseMatrix b(2, 1);
  b(0, 0) = 2.0;
  b(1, 0) = 4.0;
  DenseMatrix w = solve_spd(d, b);
  CHECK(w(0, 0) == doctest::Approx(1.0));
  CHECK(w(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("solve_spd: residual oracle on random SPD systems") {
  std::mt19937_64 rng(99);
  DenseMatrix m = random_spd(20, rng);
  DenseMatrix rhs = random_matrix(20, 4, rng);
  DenseMatrix w = solve_spd(m, rhs);
  const double resid =
      naive_frobenius(sub(naive_matmul(m, w), rhs)) / naive_frobenius(rhs);
  CHECK(resid <= 1e-8);
}

TEST_CASE("solve_spd: deterministic") {
  std::mt19937_64 rng(17);
  DenseMatrix m = random_spd(8, rng);
  DenseMatrix rhs = random_matrix(8, 3, rng);
  CHECK(solve_spd(m, rhs) == solve_spd(m, rhs));
}

TEST_CASE("solve_spd: indefinite input is rejected") {
  DenseMatrix m(2, 2, 0.0);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(solve_spd(m, DenseMatrix(2, 1, 1.0)), NotPositiveDefinite);
  CHECK_THROWS_AS(solve_spd(DenseMatrix(2, 2, 0.0), DenseMatrix(2, 1, 1.0)),
                  NotPositiveDefinite);
}

TEST_CASE("ridge_lstsq: zero data reduces to a scaled identity solve") {
  DenseMatrix x(3, 5, 0.0);
  std::mt19937_64 rng(3);
  DenseMatrix rhs = random_matrix(3, 2, rng);
  CHECK(max_abs_diff(ridge_lstsq(x, 1.0, rhs), rhs) < 1e-14);
}

TEST_CASE("ridge_lstsq: scalar case (1+1)w = 2") {
  DenseMatrix x(1, 1, 1.0);
  DenseMatrix rhs(1, 1, 2.0);
  CHECK(ridge_lstsq(x, 1.0, rhs)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("ridge_lstsq: residual oracle") {
  std::mt19937_64 rng(31);
  DenseMatrix x = random_matrix(10, 25, rng);
  DenseMatrix rhs = random_matrix(10, 3, rng);
  const double ridge = 0.5;
  DenseMatrix w = ridge_lstsq(x, ridge, rhs);

  DenseMatrix gram = naive_matmul(x, naive_transpose(x));
  for (std::size_t i = 0; i < 10; ++i) gram(i, i) += ridge;
  const double resid =
      naive_frobenius(sub(naive_matmul(gram, w), rhs)) / naive_frobenius(rhs);
  CHECK(resid <= 1e-8);
  CHECK_THROWS(ridge_lstsq(x, 0.0, rhs));
}

TEST_CASE("sylvester: identity coefficients") {
  DenseMatrix c(2, 2, 2.0);
  DenseMatrix w = solve_sylvester_spd(DenseMatrix::identity(2),
                                      DenseMatrix::identity(2), c);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w.data()[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("sylvester: diagonal closed form") {
  DenseMatrix a(2, 2, 0.0);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  DenseMatrix b(1, 1, 3.0);
  DenseMatrix c(2, 1);
  c(0, 0) = 4.0;
  c(1, 0) = 5.0;
  DenseMatrix w = solve_sylvester_spd(a, b, c);
  CHECK(w(0, 0) == doctest::Approx(1.0));  // 4 / (1+3)
  CHECK(w(1, 0) == doctest::Approx(1.0));  // 5 / (2+3)
}

TEST_CASE("sylvester: residual oracle on random SPD/PSD instances") {
  std::mt19937_64 rng(2024);
  DenseMatrix a = random_spd(10, rng);
  DenseMatrix b = random_psd(15, 7, rng);  // genuinely rank-deficient
  DenseMatrix c = random_matrix(10, 15, rng);
  DenseMatrix w = solve_sylvester_spd(a, b, c);
  CHECK(sylvester_residual(a, b, c, w) <= 1e-8);
}

TEST_CASE("sylvester: agrees with the Kronecker brute force") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 8);
    const std::size_t m = size(rng);
    const std::size_t q = size(rng);
    DenseMatrix a = random_spd(m, rng);
    DenseMatrix b = random_psd(q, std::max<std::size_t>(1, q / 2), rng);
    DenseMatrix c = random_matrix(m, q, rng);

    DenseMatrix w = solve_sylvester_spd(a, b, c);
    DenseMatrix w_ref = kronecker_sylvester(a, b, c);
    const double rel = naive_frobenius(sub(w, w_ref)) /
                       std::max(naive_frobenius(w_ref), 1e-30);
    CHECK(rel <= 1e-6);
  }
}

TEST_CASE("sylvester: singular pencil is rejected") {
  // Both coefficients share a zero eigenvalue: no unique solution.
  DenseMatrix a(2, 2, 0.0);
  a(0, 0) = 1.0;
  DenseMatrix b(2, 2, 0.0);
  b(1, 1) = 1.0;
  CHECK_THROWS_AS(solve_sylvester_spd(a, b, DenseMatrix(2, 2, 1.0)),
                  SingularPencil);
}

TEST_CASE("sylvester: factored path matches the dense path") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 6, q = 12, r = 4;
    DenseMatrix a = random_spd(m, rng);
    DenseMatrix g = random_matrix(q, r, rng);
    DenseMatrix b = naive_matmul(g, naive_transpose(g));
    DenseMatrix c = random_matrix(m, q, rng);

    DenseMatrix dense = solve_sylvester_spd(a, b, c);
    DenseMatrix fact = solve_sylvester_spd_factored(sym_eig(a), g, c);
    CHECK(max_abs_diff(dense, fact) <= 1e-9);
    CHECK(sylvester_residual_factored(a, g, c, fact) <= 1e-8);
  }
}

TEST_CASE("positive_definite classification follows the relative tolerance") {
  DenseMatrix m(2, 2, 0.0);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-14;  // below 1e-12 relative
  CHECK_FALSE(sym_eig(m).positive_definite());
  m(1, 1) = 1e-6;
  CHECK(sym_eig(m).positive_definite());
}

}  // TEST_SUITE
