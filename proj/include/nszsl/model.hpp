#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nszsl/dense_matrix.hpp"
#include "nszsl/textpipe.hpp"

namespace nszsl {

/// Image features, one column per example (d×N).
using FeatureMatrix = DenseMatrix;

/// One-hot class assignment for N examples, stored as the label index per
/// example. dense() materializes the N×C indicator matrix (each row has a
/// single 1).
struct LabelIndicator {
  std::vector<std::size_t> class_index;
  std::size_t num_classes = 0;

  std::size_t rows() const noexcept { return class_index.size(); }
  DenseMatrix dense() const;
  void validate() const;
};

struct TrainingSet {
  FeatureMatrix x;    // d×N
  LabelIndicator y;   // N examples over C classes
  text::DocMatrix z;  // d̂×C

  std::size_t feat_dim() const noexcept { return x.rows(); }
  std::size_t num_examples() const noexcept { return x.cols(); }
  std::size_t num_classes() const noexcept { return y.num_classes; }
  std::size_t doc_dim() const noexcept { return z.vocab_size(); }

  /// Throws DimensionMismatch when the cross-field invariants fail.
  void validate() const;
};

enum class Regularizer { l21, frobenius };

std::string_view to_string(Regularizer r);
Regularizer regularizer_from_string(std::string_view s);

struct SolverConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  /// Smoothing of the column-norm reweighting, 1/(2√(‖w‖² + σ)).
  double sigma = 1e-6;
  std::size_t max_outer = 100;
  std::size_t max_inner = 50;
  double rel_tol = 1e-5;
  std::uint64_t seed = 0;
  Regularizer regularizer = Regularizer::l21;
  /// Relative diagonal repair added to Gram matrices that fail the SPD
  /// check (scaled by trace/n).
  double epsilon_ridge = 1e-8;
  /// 0 keeps the default m = number of seen classes; anything else marks
  /// the model as non-conformant to the reference protocol.
  std::size_t m_override = 0;

  void validate() const;
};

struct ObjectiveTerms {
  double total = 0.0;
  double loss = 0.0;
  double reg_match = 0.0;
  double reg_l21 = 0.0;
};

struct ModelWeights {
  DenseMatrix wx;  // m×d
  DenseMatrix wz;  // m×d̂
  std::size_t m = 0;
  SolverConfig config;
  /// Solver objective at initialization and after every half-step (the
  /// σ-smoothed quantity whose monotone descent the algorithm guarantees).
  std::vector<double> trace;
  /// Exact objective terms at the same points.
  std::vector<ObjectiveTerms> trace_terms;
  bool converged = false;
  bool paper_conformant = true;
};

/// Exact evaluation of the training objective: loss ‖XᵀWxᵀWzZ − Y‖²_F,
/// match regularizer ‖WxᵀWzZ‖²_F, and the true l2,1 term Σ_i ‖w_z^i‖₂
/// (the smoothing is internal to the solver, never reported here).
ObjectiveTerms objective(const TrainingSet& train, const DenseMatrix& wx,
                         const DenseMatrix& wz, const SolverConfig& config);
ObjectiveTerms objective(const TrainingSet& train, const ModelWeights& model);

/// Solver-internal objective: the l2,1 term is replaced by its σ-smoothed
/// surrogate Σ√(‖w_z^i‖² + σ) (or by ‖Wz‖²_F in frobenius mode). This is
/// the quantity whose monotone descent the algorithms guarantee.
double smoothed_objective(const TrainingSet& train, const DenseMatrix& wx,
                          const DenseMatrix& wz, const SolverConfig& config);

/// Σ_i ‖column i‖₂.
double l21_norm(const DenseMatrix& w);

/// Reweighting diagonal d_i = 1 / (2√(‖w_z^i‖² + σ)).
std::vector<double> update_d(const DenseMatrix& wz, double sigma);

struct WzResult {
  DenseMatrix wz;
  /// Smoothed objective after every inner solve.
  std::vector<double> surrogate_trace;
  /// Worst relative Sylvester residual across inner solves.
  double max_residual = 0.0;
  bool converged = false;
};

/// Inner subproblem: Wx fixed, Wz solved by iterated reweighting. Each
/// iteration solves the Sylvester system through the symmetrizing change
/// of variables W̃ = Wz D^{1/2}, which turns the right coefficient into the
/// positive semidefinite D^{-1/2} Z Zᵀ D^{-1/2} (supplied to linsolve in
/// factored form). In frobenius mode the weight matrix is the identity and
/// a single solve is exact.
WzResult solve_wz(const TrainingSet& train, const DenseMatrix& wx,
                  const SolverConfig& config);

/// Closed-form Wx step:
/// Wxᵀ = (XXᵀ + λ₁I)⁻¹ X Y Zᵀ Wzᵀ (Wz Z Zᵀ Wzᵀ)⁻¹.
DenseMatrix solve_wx(const TrainingSet& train, const DenseMatrix& wz,
                     const SolverConfig& config);

/// Alternating minimization: Gaussian Wx init (entries N(0, 1/d), seeded),
/// then solve_wz / solve_wx half-steps until the relative objective change
/// drops below rel_tol or max_outer is reached. Deterministic given the
/// seed.
ModelWeights fit(const TrainingSet& train, const SolverConfig& config);

struct Prediction {
  std::size_t class_index = 0;
  std::vector<double> scores;
};

/// Scores s_c = xᵀ Wxᵀ Wz z_c over the candidate columns of unseen_z;
/// argmax with lowest-index tie break.
Prediction predict(const ModelWeights& model, std::span<const double> x,
                   const text::DocMatrix& unseen_z);

/// k highest-scoring classes, descending score, lowest index on ties.
std::vector<std::size_t> predict_topk(const ModelWeights& model,
                                      std::span<const double> x,
                                      const text::DocMatrix& unseen_z,
                                      std::size_t k);

/// Per-word relevance: the l2 norm of each column of Wz.
struct ImportanceWeights {
  std::vector<double> values;
};

ImportanceWeights importance_weights(const ModelWeights& model);

/// For each class, the words present in its (binary) description column
/// ranked by importance weight; at most k per class.
std::vector<std::vector<std::string>> top_words_per_class(
    const ModelWeights& model, const text::Vocabulary& vocab,
    const text::DocMatrix& z, std::size_t k);

}  // namespace nszsl
