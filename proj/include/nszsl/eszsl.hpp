#pragma once

#include "nszsl/dense_matrix.hpp"
#include "nszsl/model.hpp"

namespace nszsl::eszsl {

struct EszslConfig {
  double gamma = 1.0;
  double lambda = 1.0;

  void validate() const;
};

struct EszslModel {
  DenseMatrix v;  // d×d̂
  EszslConfig config;
};

/// ‖XᵀVZ − Y‖²_F + λ‖VZ‖²_F + γ‖XᵀV‖²_F + λγ‖V‖²_F with S = Z.
double eszsl_objective(const TrainingSet& train, const DenseMatrix& v,
                       const EszslConfig& config);

/// Closed form from the stationarity condition
/// (XXᵀ + γI) V (ZZᵀ + λI) = X Y Zᵀ, solved with two SPD solves.
EszslModel eszsl_fit(const TrainingSet& train, const EszslConfig& config);

/// argmax_c xᵀ V z_c, lowest-index tie break.
Prediction eszsl_predict(const EszslModel& model, std::span<const double> x,
                         const text::DocMatrix& unseen_z);

}  // namespace nszsl::eszsl
