#include "nszsl/eszsl.hpp"

#include <algorithm>

#include "nszsl/errors.hpp"
#include "nszsl/kernels.hpp"
#include "nszsl/linsolve.hpp"

namespace nszsl::eszsl {

void EszslConfig::validate() const {
  if (!(gamma > 0.0) || !(lambda > 0.0)) {
    throw Error("InvalidArgument", "eszsl: gamma and lambda must be positive");
  }
}

double eszsl_objective(const TrainingSet& train, const DenseMatrix& v,
                       const EszslConfig& config) {
  if (v.rows() != train.feat_dim() || v.cols() != train.doc_dim()) {
    throw DimensionMismatch("eszsl_objective: V shape mismatch");
  }
  const auto& k = kernels::active();

  DenseMatrix vz = matmul(v, train.z.entries);   // d×C
  DenseMatrix scores = matmul_atb(train.x, vz);  // N×C
  for (std::size_t n = 0; n < train.y.rows(); ++n) {
    scores(n, train.y.class_index[n]) -= 1.0;
  }
  const double loss = k.sumsq(scores.data(), scores.size());
  const double reg_vz = k.sumsq(vz.data(), vz.size());
  DenseMatrix xtv = matmul_atb(train.x, v);  // N×d̂
  const double reg_xtv = k.sumsq(xtv.data(), xtv.size());
  const double reg_v = k.sumsq(v.data(), v.size());

  return loss + config.lambda * reg_vz + config.gamma * reg_xtv +
         config.lambda * config.gamma * reg_v;
}

EszslModel eszsl_fit(const TrainingSet& train, const EszslConfig& config) {
  config.validate();
  train.validate();

  // Stationarity of the objective: the loss contributes XXᵀVZZᵀ − XYZᵀ,
  // λ‖VZ‖² contributes λVZZᵀ, γ‖XᵀV‖² contributes γXXᵀV, and λγ‖V‖²
  // contributes λγV, which factors as (XXᵀ + λI) V (ZZᵀ + γI) = X Y Zᵀ.
  DenseMatrix xy(train.feat_dim(), train.num_classes(), 0.0);
  for (std::size_t i = 0; i < train.feat_dim(); ++i) {
    const double* src = train.x.row_ptr(i);
    double* dst = xy.row_ptr(i);
    for (std::size_t n = 0; n < train.y.rows(); ++n) {
      dst[train.y.class_index[n]] += src[n];
    }
  }
  DenseMatrix rhs = matmul_abt(xy, train.z.entries);  // X Y Zᵀ, d×d̂

  DenseMatrix gram_x = matmul_abt(train.x, train.x);
  add_scaled_identity(gram_x, config.lambda);
  DenseMatrix left = linsolve::CholeskyFactor(gram_x).solve(rhs);  // d×d̂

  DenseMatrix gram_z = matmul_abt(train.z.entries, train.z.entries);
  add_scaled_identity(gram_z, config.gamma);
  // V (ZZᵀ + γI) = L  ⇔  (ZZᵀ + γI) Vᵀ = Lᵀ.
  DenseMatrix vt = linsolve::CholeskyFactor(gram_z).solve(transpose(left));

  EszslModel model;
  model.config = config;
  model.v = transpose(vt);
  return model;
}

Prediction eszsl_predict(const EszslModel& model, std::span<const double> x,
                         const text::DocMatrix& unseen_z) {
  if (x.size() != model.v.rows()) {
    throw DimensionMismatch("eszsl_predict: feature vector length != d");
  }
  if (unseen_z.vocab_size() != model.v.cols()) {
    throw DimensionMismatch(
        "eszsl_predict: candidate descriptions have wrong dimensionality");
  }
  const auto& k = kernels::active();

  // xᵀ V, then one dot per candidate column via the row-major trick.
  std::vector<double> xv(model.v.cols(), 0.0);
  for (std::size_t i = 0; i < model.v.rows(); ++i) {
    k.axpy(x[i], model.v.row_ptr(i), xv.data(), xv.size());
  }
  Prediction out;
  out.scores.assign(unseen_z.num_classes(), 0.0);
  for (std::size_t i = 0; i < unseen_z.vocab_size(); ++i) {
    k.axpy(xv[i], unseen_z.entries.row_ptr(i), out.scores.data(),
           out.scores.size());
  }
  out.class_index = static_cast<std::size_t>(
      std::max_element(out.scores.begin(), out.scores.end()) -
      out.scores.begin());
  return out;
}

}  // namespace nszsl::eszsl
