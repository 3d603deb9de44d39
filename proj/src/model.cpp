#include "nszsl/model.hpp"
#include <limits>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nszsl/errors.hpp"
#include "nszsl/kernels.hpp"
#include "nszsl/linsolve.hpp"

namespace nszsl {

namespace {

using linsolve::CholeskyFactor;
using linsolve::SymmetricEigen;

// out = a · Y for one-hot Y given as label indices: column scatter-add,
// O(rows·N) instead of a dense product.
DenseMatrix matmul_label_right(const DenseMatrix& a, const LabelIndicator& y) {
  if (a.cols() != y.rows()) {
    throw DimensionMismatch("matmul_label_right: column/example mismatch");
  }
  DenseMatrix out(a.rows(), y.num_classes, 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* src = a.row_ptr(i);
    double* dst = out.row_ptr(i);
    for (std::size_t n = 0; n < y.rows(); ++n) {
      dst[y.class_index[n]] += src[n];
    }
  }
  return out;
}

double trace_mean(const DenseMatrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t / static_cast<double>(m.rows());
}

// Cholesky with the epsilon_ridge diagonal repair: one retry with
// eps·(trace/n) added, then the failure propagates.
CholeskyFactor cholesky_repaired(DenseMatrix gram, double epsilon_ridge) {
  try {
    return CholeskyFactor(gram);
  } catch (const NotPositiveDefinite&) {
    const double shift = epsilon_ridge * trace_mean(gram);
    if (!(shift > 0.0)) throw;
    add_scaled_identity(gram, shift);
    return CholeskyFactor(gram);
  }
}

// ‖scores − Y‖²_F evaluated destructively on the dense score matrix.
double squared_loss(DenseMatrix& scores, const LabelIndicator& y) {
  for (std::size_t n = 0; n < y.rows(); ++n) {
    scores(n, y.class_index[n]) -= 1.0;
  }
  return kernels::active().sumsq(scores.data(), scores.size());
}

struct ObjectiveParts {
  double loss = 0.0;
  double reg_match = 0.0;
  std::vector<double> wz_column_sumsq;
};

ObjectiveParts objective_parts(const TrainingSet& train, const DenseMatrix& wx,
                               const DenseMatrix& wz) {
  if (wx.cols() != train.feat_dim() || wz.cols() != train.doc_dim() ||
      wx.rows() != wz.rows()) {
    throw DimensionMismatch("objective: weight shapes inconsistent with data");
  }
  ObjectiveParts parts;
  DenseMatrix f = matmul(wx, train.x);            // m×N
  DenseMatrix wzz = matmul(wz, train.z.entries);  // m×C
  DenseMatrix scores = matmul_atb(f, wzz);        // N×C
  parts.loss = squared_loss(scores, train.y);
  DenseMatrix vz = matmul_atb(wx, wzz);  // d×C
  parts.reg_match = kernels::active().sumsq(vz.data(), vz.size());
  parts.wz_column_sumsq = column_sumsq(wz);
  return parts;
}

// Per-fit invariants of the data: X Xᵀ and X Y never change across
// iterations, and every per-iteration quantity the solver needs can be
// reduced to m×m / m×C products through them.
struct DataCache {
  DenseMatrix xxt;  // d×d
  DenseMatrix xy;   // d×C

  explicit DataCache(const TrainingSet& train)
      : xxt(matmul_abt(train.x, train.x)),
        xy(matmul_label_right(train.x, train.y)) {}
};

// Quantities tied to one Wx: F Fᵀ, Wx Wxᵀ and F Y with F = Wx X, all
// m-sized, obtained without forming the m×N matrix F.
struct WxCache {
  DenseMatrix fft;    // m×m
  DenseMatrix wxwxt;  // m×m
  DenseMatrix fy;     // m×C

  WxCache(const DataCache& data, const DenseMatrix& wx)
      : fft(matmul_abt(matmul(wx, data.xxt), wx)),
        wxwxt(matmul_abt(wx, wx)),
        fy(matmul(wx, data.xy)) {}
};

// Loss and match regularizer evaluated through quadratic forms:
// ‖FᵀP − Y‖² = ⟨FFᵀP, P⟩ − 2⟨FY, P⟩ + N and ‖WxᵀP‖² = ⟨WxWxᵀP, P⟩
// with P = Wz Z.
ObjectiveParts objective_parts_cached(const TrainingSet& train,
                                      const WxCache& wc,
                                      const DenseMatrix& wz) {
  const auto& k = kernels::active();
  ObjectiveParts parts;
  DenseMatrix p = matmul(wz, train.z.entries);  // m×C
  DenseMatrix fp = matmul(wc.fft, p);
  const double pfp = k.dot(fp.data(), p.data(), p.size());
  const double fyp = k.dot(wc.fy.data(), p.data(), p.size());
  parts.loss = pfp - 2.0 * fyp + static_cast<double>(train.num_examples());
  DenseMatrix wp = matmul(wc.wxwxt, p);
  parts.reg_match = k.dot(wp.data(), p.data(), p.size());
  parts.wz_column_sumsq = column_sumsq(wz);
  return parts;
}

double smoothed_regularizer(const std::vector<double>& colsq,
                            const SolverConfig& config) {
  double reg = 0.0;
  if (config.regularizer == Regularizer::l21) {
    for (double s : colsq) reg += std::sqrt(s + config.sigma);
  } else {
    for (double s : colsq) reg += s;
  }
  return reg;
}

// Per-fit invariants of the Wx step: X·Y and the Cholesky of XXᵀ + λ₁I
// depend only on the data and λ₁.
struct WxSolver {
  const DataCache& data;
  CholeskyFactor chol_x;
  double epsilon_ridge;

  WxSolver(const TrainingSet&, const DataCache& data_cache,
           const SolverConfig& config)
      : data(data_cache),
        chol_x([&] {
          DenseMatrix gram = data_cache.xxt;
          add_scaled_identity(gram, config.lambda1);
          return cholesky_repaired(std::move(gram), config.epsilon_ridge);
        }()),
        epsilon_ridge(config.epsilon_ridge) {}

  DenseMatrix solve(const TrainingSet& train, const DenseMatrix& wz) const {
    DenseMatrix h = matmul(wz, train.z.entries);          // m×C
    DenseMatrix t = chol_x.solve(matmul_abt(data.xy, h));  // d×m
    DenseMatrix gram = matmul_abt(h, h);                  // m×m
    try {
      return cholesky_repaired(std::move(gram), epsilon_ridge)
          .solve(transpose(t));
    } catch (const NotPositiveDefinite& e) {
      throw SingularGram(std::string("solve_wx: Wz Z Zᵀ Wzᵀ singular beyond "
                                     "epsilon_ridge repair: ") +
                         e.what());
    }
  }
};

// Eigendecomposition of A = λ₂ (Wx X Xᵀ Wxᵀ + λ₁ Wx Wxᵀ)⁻¹ obtained from
// the eigendecomposition of the inverted matrix (same eigenvectors,
// reciprocal spectrum), with the epsilon_ridge spectral repair.
SymmetricEigen left_coefficient_eig(const WxCache& wc,
                                    const SolverConfig& config) {
  DenseMatrix m0 = wc.fft;
  kernels::active().axpy(config.lambda1, wc.wxwxt.data(), m0.data(),
                         m0.size());

  SymmetricEigen m0_eig = linsolve::sym_eig(m0);
  if (!m0_eig.positive_definite()) {
    const double mean =
        std::accumulate(m0_eig.eigenvalues.begin(), m0_eig.eigenvalues.end(),
                        0.0) /
        static_cast<double>(m0_eig.dim);
    const double shift = config.epsilon_ridge * mean;
    if (shift > 0.0) {
      for (double& ev : m0_eig.eigenvalues) ev += shift;
    }
    if (!m0_eig.positive_definite()) {
      throw NotPositiveDefinite(
          "solve_wz: Wx X Xᵀ Wxᵀ + λ1 Wx Wxᵀ not positive definite (is Wx "
          "rank deficient?)");
    }
  }

  SymmetricEigen a_eig;
  a_eig.dim = m0_eig.dim;
  a_eig.eigenvalues.resize(m0_eig.dim);
  a_eig.eigenvectors = DenseMatrix(m0_eig.dim, m0_eig.dim);
  // Reciprocals reverse the ordering; flip to keep eigenvalues descending.
  for (std::size_t j = 0; j < m0_eig.dim; ++j) {
    const std::size_t src = m0_eig.dim - 1 - j;
    a_eig.eigenvalues[j] = config.lambda2 / m0_eig.eigenvalues[src];
    for (std::size_t i = 0; i < m0_eig.dim; ++i) {
      a_eig.eigenvectors(i, j) = m0_eig.eigenvectors(i, src);
    }
  }
  return a_eig;
}

// y = A x in the eigenbasis of A.
DenseMatrix apply_eig(const SymmetricEigen& eig, const DenseMatrix& x) {
  DenseMatrix t = matmul_atb(eig.eigenvectors, x);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    kernels::active().scale(eig.eigenvalues[i], t.row_ptr(i), t.cols());
  }
  return matmul(eig.eigenvectors, t);
}

WzResult solve_wz_impl(const TrainingSet& train, const WxCache& wc,
                       const SolverConfig& config, std::size_t m) {
  const std::size_t d_hat = train.doc_dim();
  const SymmetricEigen a_eig = left_coefficient_eig(wc, config);

  const bool reweighted = config.regularizer == Regularizer::l21;
  const std::size_t max_iter = reweighted ? config.max_inner : 1;

  WzResult result;
  result.wz = DenseMatrix(m, d_hat, 0.0);
  double previous = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // D⁰ is the identity; afterwards D comes from the current iterate.
    std::vector<double> dinv_sqrt(d_hat, 1.0);
    if (reweighted && iter > 0) {
      const std::vector<double> d = update_d(result.wz, config.sigma);
      for (std::size_t i = 0; i < d_hat; ++i) {
        dinv_sqrt[i] = 1.0 / std::sqrt(d[i]);
      }
    }

    // Symmetrized system: A W̃ + W̃ (G Gᵀ) = (1/λ₂) A F Y Gᵀ with
    // G = D^{-1/2} Z and W̃ = Wz D^{1/2}.
    DenseMatrix g = train.z.entries;  // d̂×C
    scale_rows(g, dinv_sqrt);
    DenseMatrix c = apply_eig(a_eig, matmul_abt(wc.fy, g));
    scale_in_place(c, 1.0 / config.lambda2);

    double residual = 0.0;
    DenseMatrix w_tilde =
        linsolve::solve_sylvester_spd_factored(a_eig, g, c, &residual);
    result.max_residual = std::max(result.max_residual, residual);

    result.wz = std::move(w_tilde);
    scale_cols(result.wz, dinv_sqrt);  // Wz = W̃ D^{-1/2}

    ObjectiveParts parts = objective_parts_cached(train, wc, result.wz);
    const double current =
        parts.loss + config.lambda1 * parts.reg_match +
        config.lambda2 * smoothed_regularizer(parts.wz_column_sumsq, config);
    result.surrogate_trace.push_back(current);

    if (!reweighted ||
        (std::isfinite(previous) &&
         std::fabs(previous - current) <=
             config.rel_tol * std::max(std::fabs(previous), 1.0))) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

}  // namespace

DenseMatrix LabelIndicator::dense() const {
  validate();
  DenseMatrix y(rows(), num_classes, 0.0);
  for (std::size_t n = 0; n < rows(); ++n) {
    y(n, class_index[n]) = 1.0;
  }
  return y;
}

void LabelIndicator::validate() const {
  if (num_classes == 0 || class_index.empty()) {
    throw DimensionMismatch("LabelIndicator: empty");
  }
  for (std::size_t idx : class_index) {
    if (idx >= num_classes) {
      throw DimensionMismatch("LabelIndicator: label out of range");
    }
  }
}

void TrainingSet::validate() const {
  y.validate();
  if (x.cols() != y.rows()) {
    throw DimensionMismatch("TrainingSet: x columns != number of labels");
  }
  if (z.num_classes() != y.num_classes) {
    throw DimensionMismatch("TrainingSet: z classes != label classes");
  }
  if (!x.all_finite() || !z.entries.all_finite()) {
    throw NonFiniteValue("TrainingSet: non-finite entries");
  }
}

std::string_view to_string(Regularizer r) {
  return r == Regularizer::l21 ? "l21" : "frobenius";
}

Regularizer regularizer_from_string(std::string_view s) {
  if (s == "l21") return Regularizer::l21;
  if (s == "frobenius") return Regularizer::frobenius;
  throw ParseError("unknown regularizer: " + std::string(s));
}

void SolverConfig::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw Error("InvalidArgument", "lambda1 and lambda2 must be positive");
  }
  if (!(sigma > 0.0)) {
    throw Error("InvalidArgument", "sigma must be positive");
  }
  if (!(rel_tol > 0.0)) {
    throw Error("InvalidArgument", "rel_tol must be positive");
  }
  if (max_inner < 1 || max_outer < 1) {
    throw Error("InvalidArgument", "iteration limits must be >= 1");
  }
}

ObjectiveTerms objective(const TrainingSet& train, const DenseMatrix& wx,
                         const DenseMatrix& wz, const SolverConfig& config) {
  ObjectiveParts parts = objective_parts(train, wx, wz);
  ObjectiveTerms terms;
  terms.loss = parts.loss;
  terms.reg_match = parts.reg_match;
  for (double s : parts.wz_column_sumsq) terms.reg_l21 += std::sqrt(s);
  terms.total = terms.loss + config.lambda1 * terms.reg_match +
                config.lambda2 * terms.reg_l21;
  return terms;
}

ObjectiveTerms objective(const TrainingSet& train, const ModelWeights& model) {
  return objective(train, model.wx, model.wz, model.config);
}

double smoothed_objective(const TrainingSet& train, const DenseMatrix& wx,
                          const DenseMatrix& wz, const SolverConfig& config) {
  ObjectiveParts parts = objective_parts(train, wx, wz);
  return parts.loss + config.lambda1 * parts.reg_match +
         config.lambda2 * smoothed_regularizer(parts.wz_column_sumsq, config);
}

double l21_norm(const DenseMatrix& w) {
  double sum = 0.0;
  for (double s : column_sumsq(w)) sum += std::sqrt(s);
  return sum;
}

std::vector<double> update_d(const DenseMatrix& wz, double sigma) {
  if (!(sigma > 0.0)) {
    throw Error("InvalidArgument", "update_d: sigma must be positive");
  }
  std::vector<double> d = column_sumsq(wz);
  for (double& v : d) v = 1.0 / (2.0 * std::sqrt(v + sigma));
  return d;
}

WzResult solve_wz(const TrainingSet& train, const DenseMatrix& wx,
                  const SolverConfig& config) {
  config.validate();
  train.validate();
  if (wx.cols() != train.feat_dim()) {
    throw DimensionMismatch("solve_wz: wx columns != feature dimension");
  }
  const DataCache data(train);
  const WxCache wc(data, wx);
  return solve_wz_impl(train, wc, config, wx.rows());
}

DenseMatrix solve_wx(const TrainingSet& train, const DenseMatrix& wz,
                     const SolverConfig& config) {
  config.validate();
  train.validate();
  if (wz.cols() != train.doc_dim()) {
    throw DimensionMismatch("solve_wx: wz columns != document dimension");
  }
  const DataCache data(train);
  return WxSolver(train, data, config).solve(train, wz);
}

ModelWeights fit(const TrainingSet& train, const SolverConfig& config) {
  config.validate();
  train.validate();

  const std::size_t m =
      config.m_override ? config.m_override : train.num_classes();

  ModelWeights model;
  model.m = m;
  model.config = config;
  model.paper_conformant = (m == train.num_classes());

  // Gaussian init, stdev 1/√d to keep initial activations O(1).
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(
      0.0, 1.0 / std::sqrt(static_cast<double>(train.feat_dim())));
  model.wx = DenseMatrix(m, train.feat_dim());
  for (std::size_t i = 0; i < model.wx.size(); ++i) {
    model.wx.data()[i] = gauss(rng);
  }
  model.wz = DenseMatrix(m, train.doc_dim(), 0.0);

  const DataCache data(train);
  const WxSolver wx_solver(train, data, config);
  WxCache wc(data, model.wx);

  auto record = [&](void) -> double {
    ObjectiveParts parts = objective_parts_cached(train, wc, model.wz);
    ObjectiveTerms exact;
    exact.loss = parts.loss;
    exact.reg_match = parts.reg_match;
    for (double s : parts.wz_column_sumsq) exact.reg_l21 += std::sqrt(s);
    exact.total = exact.loss + config.lambda1 * exact.reg_match +
                  config.lambda2 * exact.reg_l21;
    const double smoothed =
        parts.loss + config.lambda1 * parts.reg_match +
        config.lambda2 * smoothed_regularizer(parts.wz_column_sumsq, config);
    model.trace.push_back(smoothed);
    model.trace_terms.push_back(exact);
    return smoothed;
  };

  double cycle_objective = record();

  for (std::size_t outer = 0; outer < config.max_outer; ++outer) {
    WzResult wz_step = solve_wz_impl(train, wc, config, m);
    model.wz = std::move(wz_step.wz);
    record();

    model.wx = wx_solver.solve(train, model.wz);
    wc = WxCache(data, model.wx);
    const double current = record();

    if (std::fabs(cycle_objective - current) <=
        config.rel_tol * std::max(std::fabs(cycle_objective), 1.0)) {
      model.converged = true;
      break;
    }
    cycle_objective = current;
  }
  return model;
}

namespace {

std::vector<double> candidate_scores(const ModelWeights& model,
                                     std::span<const double> x,
                                     const text::DocMatrix& unseen_z) {
  if (x.size() != model.wx.cols()) {
    throw DimensionMismatch("predict: feature vector length != d");
  }
  if (unseen_z.vocab_size() != model.wz.cols()) {
    throw DimensionMismatch("predict: candidate descriptions have wrong "
                            "dimensionality");
  }
  const auto& k = kernels::active();
  const std::size_t m = model.m;

  std::vector<double> t(m, 0.0);  // Wx x
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = k.dot(model.wx.row_ptr(i), x.data(), x.size());
  }
  DenseMatrix p = matmul(model.wz, unseen_z.entries);  // m×Ĉ
  std::vector<double> scores(unseen_z.num_classes(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    k.axpy(t[i], p.row_ptr(i), scores.data(), scores.size());
  }
  return scores;
}

}  // namespace

Prediction predict(const ModelWeights& model, std::span<const double> x,
                   const text::DocMatrix& unseen_z) {
  Prediction out;
  out.scores = candidate_scores(model, x, unseen_z);
  // max_element returns the first maximum: lowest-index tie break.
  out.class_index = static_cast<std::size_t>(
      std::max_element(out.scores.begin(), out.scores.end()) -
      out.scores.begin());
  return out;
}

std::vector<std::size_t> predict_topk(const ModelWeights& model,
                                      std::span<const double> x,
                                      const text::DocMatrix& unseen_z,
                                      std::size_t k) {
  const std::vector<double> scores = candidate_scores(model, x, unseen_z);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  order.resize(std::min(k, order.size()));
  return order;
}

ImportanceWeights importance_weights(const ModelWeights& model) {
  ImportanceWeights w;
  w.values = column_sumsq(model.wz);
  for (double& v : w.values) v = std::sqrt(v);
  return w;
}

std::vector<std::vector<std::string>> top_words_per_class(
    const ModelWeights& model, const text::Vocabulary& vocab,
    const text::DocMatrix& z, std::size_t k) {
  if (z.weighting != text::Weighting::binary) {
    throw Error("InvalidArgument",
                "top_words_per_class: requires a binary DocMatrix");
  }
  if (z.vocab_size() != vocab.size() || z.vocab_size() != model.wz.cols()) {
    throw DimensionMismatch("top_words_per_class: dimensions disagree");
  }
  const ImportanceWeights weights = importance_weights(model);

  std::vector<std::vector<std::string>> result;
  result.reserve(z.num_classes());
  for (std::size_t c = 0; c < z.num_classes(); ++c) {
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < z.vocab_size(); ++i) {
      if (z.entries(i, c) > 0.5) present.push_back(i);
    }
    std::stable_sort(present.begin(), present.end(),
                     [&](std::size_t a, std::size_t b) {
                       return weights.values[a] > weights.values[b];
                     });
    present.resize(std::min(k, present.size()));
    std::vector<std::string> words;
    words.reserve(present.size());
    for (std::size_t i : present) words.push_back(vocab.terms[i]);
    result.push_back(std::move(words));
  }
  return result;
}

}  // namespace nszsl
