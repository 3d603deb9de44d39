#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nszsl/eszsl.hpp"
#include "nszsl/model.hpp"

namespace nszsl::cv {

enum class Metric { top1, top5, mean_per_class_accuracy };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct CvPlan {
  std::size_t num_folds = 5;
  double holdout_fraction = 0.2;
  /// Grid values are 10^b for every exponent, crossed with itself
  /// (λ1 × λ2, or γ × λ for the baseline).
  std::vector<int> grid_exponents = {-2, -1, 0, 1, 2, 3, 4, 5, 6};
  std::size_t num_trials = 10;
  Metric metric = Metric::top1;
  std::uint64_t seed = 0;
  /// Worker threads for grid cells; results are reduced in grid order
  /// regardless of the value.
  std::size_t jobs = 1;

  void validate() const;
};

struct ClassSplit {
  std::vector<std::size_t> train_classes;
  std::vector<std::size_t> validation_classes;
};

/// Deterministic class-wise fold: one seeded shuffle of the classes, then
/// a rotating contiguous slice of round(holdout_fraction·C) classes is
/// held out. Throws TooFewClasses when a fold would leave an empty
/// validation set or fewer than 2 training classes.
ClassSplit split_classes(std::size_t num_classes, const CvPlan& plan,
                         std::size_t fold_index);

/// Restriction of a training set to a class subset: Z columns and label
/// rows outside the subset are dropped, labels are remapped to the subset
/// order. Fold models never see a held-out class through these.
TrainingSet restrict_to_classes(const TrainingSet& full,
                                const std::vector<std::size_t>& classes);

enum class Method { nszsl, eszsl };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

/// Labeled evaluation data over unseen classes: descriptions, features and
/// the index of each example's class among the unseen columns.
struct UnseenSet {
  text::DocMatrix z;
  FeatureMatrix x;
  std::vector<std::size_t> labels;
};

struct CvCell {
  double value1 = 0.0;  // λ1 (nszsl) or γ (eszsl)
  double value2 = 0.0;  // λ2 (nszsl) or λ (eszsl)
  double mean_accuracy = 0.0;
  bool failed = false;
  std::string error;
};

struct CvResult {
  Method method = Method::nszsl;
  double best_value1 = 0.0;
  double best_value2 = 0.0;
  double best_mean_accuracy = 0.0;
  /// Full grid, row-major over (exponent1, exponent2).
  std::vector<CvCell> table;
  std::vector<int> grid_exponents;
  /// Final model retrained on all seen classes at the best cell (first
  /// trial seed).
  std::variant<ModelWeights, eszsl::EszslModel> final_model;
  /// Test metric over num_trials refits; NaN without a test set.
  double test_mean = 0.0;
  double test_std = 0.0;
  std::vector<double> trial_metrics;
};

/// Grid search per the reference protocol: for every cell, every fold
/// trains on the fold's training classes only (columns of Z and rows of Y
/// restricted) and validates zero-shot on the held-out classes; cell score
/// is the mean validation metric over folds, best cell breaks ties toward
/// the lexicographically smallest (value1, value2). The winning cell is
/// then retrained on all seen classes; when `test` is given the final
/// metric is reported as mean ± sample std over num_trials seeded refits.
CvResult grid_search(const TrainingSet& train, const CvPlan& plan,
                     Method method,
                     const SolverConfig& base_config = SolverConfig{},
                     const UnseenSet* test = nullptr);

/// top1 / top5 / mean-per-class accuracy of a trained model on a labeled
/// unseen-class set. Throws EmptyTestSet when there are no examples.
double evaluate(const ModelWeights& model, const FeatureMatrix& test_x,
                const std::vector<std::size_t>& test_labels,
                const text::DocMatrix& unseen_z, Metric metric);
double evaluate(const eszsl::EszslModel& model, const FeatureMatrix& test_x,
                const std::vector<std::size_t>& test_labels,
                const text::DocMatrix& unseen_z, Metric metric);

}  // namespace nszsl::cv
