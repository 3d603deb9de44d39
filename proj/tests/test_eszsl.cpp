#include <doctest.h>

#include <cmath>
#include <random>

#include "nszsl/errors.hpp"
#include "nszsl/eszsl.hpp"
#include "support.hpp"

using namespace nszsl;
using namespace nszsl::eszsl;
using namespace testsupport;

namespace {

// Independent evaluator with naive loops only.
double naive_eszsl_objective(const TrainingSet& train, const DenseMatrix& v,
                             const EszslConfig& c) {
  DenseMatrix y(train.num_examples(), train.num_classes(), 0.0);
  for (std::size_t n = 0; n < train.num_examples(); ++n) {
    y(n, train.y.class_index[n]) = 1.0;
  }
  DenseMatrix vz = naive_matmul(v, train.z.entries);
  DenseMatrix scores = naive_matmul(naive_transpose(train.x), vz);
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      const double diff = scores(i, j) - y(i, j);
      loss += diff * diff;
    }
  }
  double reg_vz = 0.0;
  for (std::size_t i = 0; i < vz.size(); ++i) {
    reg_vz += vz.data()[i] * vz.data()[i];
  }
  DenseMatrix xtv = naive_matmul(naive_transpose(train.x), v);
  double reg_xtv = 0.0;
  for (std::size_t i = 0; i < xtv.size(); ++i) {
    reg_xtv += xtv.data()[i] * xtv.data()[i];
  }
  double reg_v = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    reg_v += v.data()[i] * v.data()[i];
  }
  return loss + c.lambda * reg_vz + c.gamma * reg_xtv +
         c.lambda * c.gamma * reg_v;
}

TrainingSet scalar_instance() {
  TrainingSet train;
  train.x = DenseMatrix(1, 1, 1.0);
  train.y.num_classes = 1;
  train.y.class_index = {0};
  train.z.weighting = text::Weighting::binary;
  train.z.entries = DenseMatrix(1, 1, 1.0);
  train.z.class_ids = {"c"};
  return train;
}

}  // namespace

TEST_SUITE("eszsl") {

TEST_CASE("objective: V = 0 gives ||Y||^2 = N") {
  std::mt19937_64 rng(2);
  TinyProblem p = random_problem(2, 3, 4, 2, 7, rng);
  EszslConfig c{1.0, 1.0};
  CHECK(eszsl_objective(p.train, DenseMatrix(3, 4, 0.0), c) ==
        doctest::Approx(7.0));
}

TEST_CASE("objective: scalar hand expansion (v-1)^2 + 3v^2") {
  TrainingSet train = scalar_instance();
  EszslConfig c{1.0, 1.0};
  for (double v : {0.0, 0.25, 1.0, -2.0}) {
    CHECK(eszsl_objective(train, DenseMatrix(1, 1, v), c) ==
          doctest::Approx((v - 1.0) * (v - 1.0) + 3.0 * v * v));
  }
}

TEST_CASE("objective matches the naive evaluator") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 6; ++trial) {
    TinyProblem p = random_problem(2, 3, 5, 3, 10, rng);
    DenseMatrix v = random_matrix(3, 5, rng);
    EszslConfig c{0.7, 1.9};
    CHECK(eszsl_objective(p.train, v, c) ==
          doctest::Approx(naive_eszsl_objective(p.train, v, c))
              .epsilon(1e-12));
  }
}

TEST_CASE("fit: scalar calculus oracle gives v = 0.25") {
  TrainingSet train = scalar_instance();
  EszslModel model = eszsl_fit(train, {1.0, 1.0});
  CHECK(model.v(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("fit: gradient vanishes at the solution (finite differences)") {
  std::mt19937_64 rng(42);
  TinyProblem p = random_problem(2, 4, 6, 3, 12, rng);
  EszslConfig c{0.5, 1.5};
  EszslModel model = eszsl_fit(p.train, c);

  const double f0 = naive_eszsl_objective(p.train, model.v, c);
  const double h = 1e-5;
  double grad_norm_sq = 0.0;
  for (std::size_t i = 0; i < model.v.size(); ++i) {
    DenseMatrix plus = model.v, minus = model.v;
    plus.data()[i] += h;
    minus.data()[i] -= h;
    const double fd = (naive_eszsl_objective(p.train, plus, c) -
                       naive_eszsl_objective(p.train, minus, c)) /
                      (2.0 * h);
    grad_norm_sq += fd * fd;
  }
  CHECK(std::sqrt(grad_norm_sq) <= 1e-5 * (1.0 + f0));
}

TEST_CASE("fit: stationarity equation residual") {
  std::mt19937_64 rng(43);
  TinyProblem p = random_problem(2, 5, 7, 3, 14, rng);
  EszslConfig c{0.9, 0.4};
  EszslModel model = eszsl_fit(p.train, c);

  DenseMatrix y(p.train.num_examples(), p.train.num_classes(), 0.0);
  for (std::size_t n = 0; n < p.train.num_examples(); ++n) {
    y(n, p.train.y.class_index[n]) = 1.0;
  }
  DenseMatrix gram_x = naive_matmul(p.train.x, naive_transpose(p.train.x));
  for (std::size_t i = 0; i < gram_x.rows(); ++i) gram_x(i, i) += c.lambda;
  DenseMatrix gram_z =
      naive_matmul(p.train.z.entries, naive_transpose(p.train.z.entries));
  for (std::size_t i = 0; i < gram_z.rows(); ++i) gram_z(i, i) += c.gamma;
  DenseMatrix lhs = naive_matmul(naive_matmul(gram_x, model.v), gram_z);
  DenseMatrix rhs = naive_matmul(naive_matmul(p.train.x, y),
                                 naive_transpose(p.train.z.entries));
  CHECK(naive_frobenius(sub(lhs, rhs)) / naive_frobenius(rhs) <= 1e-8);
}

TEST_CASE("fit: near-exact recovery when regularization vanishes") {
  // X = I, Z = I, so V = Y reproduces the labels exactly.
  TrainingSet train;
  train.x = DenseMatrix::identity(6);
  train.y.num_classes = 3;
  train.y.class_index = {0, 1, 2, 0, 1, 2};
  train.z.weighting = text::Weighting::binary;
  train.z.entries = DenseMatrix::identity(3);
  train.z.class_ids = {"a", "b", "c"};

  EszslModel model = eszsl_fit(train, {1e-10, 1e-10});
  DenseMatrix scores = naive_matmul(
      naive_transpose(train.x), naive_matmul(model.v, train.z.entries));
  double loss = 0.0;
  for (std::size_t n = 0; n < 6; ++n) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double target = (train.y.class_index[n] == c) ? 1.0 : 0.0;
      loss += (scores(n, c) - target) * (scores(n, c) - target);
    }
  }
  CHECK(loss < 1e-6);
}

TEST_CASE("predict: single candidate and scaling invariance") {
  std::mt19937_64 rng(44);
  TinyProblem p = random_problem(2, 4, 5, 3, 9, rng);
  EszslModel model = eszsl_fit(p.train, {1.0, 1.0});

  text::DocMatrix one;
  one.weighting = text::Weighting::binary;
  one.entries = DenseMatrix(5, 1, 1.0);
  one.class_ids = {"only"};
  std::vector<double> x{0.1, -0.4, 0.7, 0.2};
  CHECK(eszsl_predict(model, x, one).class_index == 0);

  text::DocMatrix many;
  many.weighting = text::Weighting::binary;
  many.entries = random_matrix(5, 4, rng, 0.0, 1.0);
  many.class_ids = {"a", "b", "c", "d"};
  Prediction base = eszsl_predict(model, x, many);
  std::vector<double> scaled = x;
  for (double& v : scaled) v *= 3.0;
  CHECK(eszsl_predict(model, scaled, many).class_index == base.class_index);

  // Brute-force score oracle.
  for (std::size_t c = 0; c < many.num_classes(); ++c) {
    double score = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        score += x[i] * model.v(i, j) * many.entries(j, c);
      }
    }
    CHECK(base.scores[c] == doctest::Approx(score).epsilon(1e-10));
  }

  CHECK_THROWS_AS(eszsl_predict(model, std::vector<double>{1.0}, many),
                  DimensionMismatch);
}

TEST_CASE("config validation") {
  TrainingSet train = scalar_instance();
  CHECK_THROWS(eszsl_fit(train, {0.0, 1.0}));
  CHECK_THROWS(eszsl_fit(train, {1.0, -2.0}));
}

}  // TEST_SUITE
