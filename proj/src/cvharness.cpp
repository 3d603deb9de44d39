#include "nszsl/cvharness.hpp"
#include <atomic>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "nszsl/errors.hpp"

namespace nszsl::cv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic per-fold / per-trial seeds derived from the plan seed.
std::uint64_t fold_seed(const CvPlan& plan, std::size_t fold) {
  return splitmix64(plan.seed ^ splitmix64(fold + 1));
}
// Trial 0 reuses the plan seed verbatim so a 1×1 grid search retrains the
// exact model `fit(train, {seed: plan.seed})` would produce.
std::uint64_t trial_seed(const CvPlan& plan, std::size_t trial) {
  if (trial == 0) return plan.seed;
  return splitmix64(plan.seed ^ splitmix64(0x5eedull + trial));
}

struct FoldData {
  TrainingSet train;
  UnseenSet validation;
};

}  // namespace

// Restricts a training set to a subset of classes (columns of Z, matching
// examples, labels remapped to the subset order).
TrainingSet restrict_to_classes(const TrainingSet& full,
                                const std::vector<std::size_t>& classes) {
  std::vector<std::size_t> remap(full.num_classes(),
                                 std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < classes.size(); ++j) {
    remap[classes[j]] = j;
  }

  std::vector<std::size_t> examples;
  for (std::size_t n = 0; n < full.num_examples(); ++n) {
    if (remap[full.y.class_index[n]] !=
        std::numeric_limits<std::size_t>::max()) {
      examples.push_back(n);
    }
  }
  if (examples.empty()) {
    throw TooFewClasses("fold has no training examples");
  }

  TrainingSet out;
  out.x = DenseMatrix(full.feat_dim(), examples.size());
  for (std::size_t i = 0; i < full.feat_dim(); ++i) {
    const double* src = full.x.row_ptr(i);
    double* dst = out.x.row_ptr(i);
    for (std::size_t j = 0; j < examples.size(); ++j) {
      dst[j] = src[examples[j]];
    }
  }
  out.y.num_classes = classes.size();
  out.y.class_index.reserve(examples.size());
  for (std::size_t n : examples) {
    out.y.class_index.push_back(remap[full.y.class_index[n]]);
  }

  out.z.weighting = full.z.weighting;
  out.z.entries = DenseMatrix(full.doc_dim(), classes.size());
  for (std::size_t j = 0; j < classes.size(); ++j) {
    out.z.class_ids.push_back(full.z.class_ids.empty()
                                  ? std::to_string(classes[j])
                                  : full.z.class_ids[classes[j]]);
    for (std::size_t i = 0; i < full.doc_dim(); ++i) {
      out.z.entries(i, j) = full.z.entries(i, classes[j]);
    }
  }
  return out;
}

UnseenSet validation_set(const TrainingSet& full,
                         const std::vector<std::size_t>& classes) {
  TrainingSet as_train = restrict_to_classes(full, classes);
  UnseenSet out;
  out.z = std::move(as_train.z);
  out.x = std::move(as_train.x);
  out.labels = std::move(as_train.y.class_index);
  return out;
}

namespace {

double metric_from_scores(const DenseMatrix& scores,
                          const std::vector<std::size_t>& labels,
                          Metric metric) {
  const std::size_t n = labels.size();
  const std::size_t num_classes = scores.cols();

  auto top1_hit = [&](std::size_t row) {
    const double* s = scores.row_ptr(row);
    const std::size_t arg = static_cast<std::size_t>(
        std::max_element(s, s + num_classes) - s);
    return arg == labels[row];
  };

  switch (metric) {
    case Metric::top1: {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < n; ++i) hits += top1_hit(i);
      return static_cast<double>(hits) / static_cast<double>(n);
    }
    case Metric::top5: {
      const std::size_t k = std::min<std::size_t>(5, num_classes);
      std::size_t hits = 0;
      std::vector<std::size_t> order(num_classes);
      for (std::size_t i = 0; i < n; ++i) {
        const double* s = scores.row_ptr(i);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                           return s[a] > s[b];
                         });
        for (std::size_t j = 0; j < k; ++j) {
          if (order[j] == labels[i]) {
            ++hits;
            break;
          }
        }
      }
      return static_cast<double>(hits) / static_cast<double>(n);
    }
    case Metric::mean_per_class_accuracy: {
      std::vector<std::size_t> per_class_hits(num_classes, 0);
      std::vector<std::size_t> per_class_total(num_classes, 0);
      for (std::size_t i = 0; i < n; ++i) {
        ++per_class_total[labels[i]];
        per_class_hits[labels[i]] += top1_hit(i);
      }
      double sum = 0.0;
      std::size_t present = 0;
      for (std::size_t c = 0; c < num_classes; ++c) {
        if (per_class_total[c] == 0) continue;
        ++present;
        sum += static_cast<double>(per_class_hits[c]) /
               static_cast<double>(per_class_total[c]);
      }
      return sum / static_cast<double>(present);
    }
  }
  return 0.0;
}

double evaluate_scores(const DenseMatrix& scores,
                       const std::vector<std::size_t>& labels, Metric metric) {
  if (labels.empty()) throw EmptyTestSet("evaluate: no test examples");
  if (scores.rows() != labels.size()) {
    throw DimensionMismatch("evaluate: label count != example count");
  }
  for (std::size_t l : labels) {
    if (l >= scores.cols()) {
      throw DimensionMismatch("evaluate: label outside candidate classes");
    }
  }
  return metric_from_scores(scores, labels, metric);
}

}  // namespace

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::top1:
      return "top1";
    case Metric::top5:
      return "top5";
    case Metric::mean_per_class_accuracy:
      return "mean_per_class_accuracy";
  }
  return "unknown";
}

Metric metric_from_string(std::string_view s) {
  if (s == "top1") return Metric::top1;
  if (s == "top5") return Metric::top5;
  if (s == "mean_per_class_accuracy") return Metric::mean_per_class_accuracy;
  throw ParseError("unknown metric: " + std::string(s));
}

std::string_view to_string(Method m) {
  return m == Method::nszsl ? "nszsl" : "eszsl";
}

Method method_from_string(std::string_view s) {
  if (s == "nszsl") return Method::nszsl;
  if (s == "eszsl") return Method::eszsl;
  throw ParseError("unknown method: " + std::string(s));
}

void CvPlan::validate() const {
  if (!(holdout_fraction > 0.0) || !(holdout_fraction < 1.0)) {
    throw Error("InvalidArgument", "holdout_fraction must be in (0, 1)");
  }
  if (num_folds < 2) {
    throw Error("InvalidArgument", "num_folds must be >= 2");
  }
  if (grid_exponents.empty()) {
    throw Error("InvalidArgument", "grid_exponents must be non-empty");
  }
  if (num_trials < 1) {
    throw Error("InvalidArgument", "num_trials must be >= 1");
  }
}

ClassSplit split_classes(std::size_t num_classes, const CvPlan& plan,
                         std::size_t fold_index) {
  plan.validate();
  if (fold_index >= plan.num_folds) {
    throw Error("InvalidArgument", "fold_index out of range");
  }
  const std::size_t holdout = static_cast<std::size_t>(
      std::llround(plan.holdout_fraction * static_cast<double>(num_classes)));
  if (holdout == 0) {
    throw TooFewClasses("split_classes: validation set would be empty");
  }
  if (num_classes - holdout < 2) {
    throw TooFewClasses("split_classes: fewer than 2 training classes left");
  }

  // One global shuffle, then a rotating contiguous slice per fold.
  std::vector<std::size_t> shuffled(num_classes);
  std::iota(shuffled.begin(), shuffled.end(), 0);
  std::mt19937_64 rng(plan.seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  ClassSplit split;
  const std::size_t start = (fold_index * holdout) % num_classes;
  std::vector<bool> held(num_classes, false);
  for (std::size_t i = 0; i < holdout; ++i) {
    const std::size_t pos = (start + i) % num_classes;
    split.validation_classes.push_back(shuffled[pos]);
    held[pos] = true;
  }
  for (std::size_t pos = 0; pos < num_classes; ++pos) {
    if (!held[pos]) split.train_classes.push_back(shuffled[pos]);
  }
  return split;
}

double evaluate(const ModelWeights& model, const FeatureMatrix& test_x,
                const std::vector<std::size_t>& test_labels,
                const text::DocMatrix& unseen_z, Metric metric) {
  DenseMatrix t = matmul(model.wx, test_x);           // m×N̂
  DenseMatrix p = matmul(model.wz, unseen_z.entries);  // m×Ĉ
  return evaluate_scores(matmul_atb(t, p), test_labels, metric);
}

double evaluate(const eszsl::EszslModel& model, const FeatureMatrix& test_x,
                const std::vector<std::size_t>& test_labels,
                const text::DocMatrix& unseen_z, Metric metric) {
  DenseMatrix vz = matmul(model.v, unseen_z.entries);  // d×Ĉ
  return evaluate_scores(matmul_atb(test_x, vz), test_labels, metric);
}

CvResult grid_search(const TrainingSet& train, const CvPlan& plan,
                     Method method, const SolverConfig& base_config,
                     const UnseenSet* test) {
  plan.validate();
  train.validate();

  const std::size_t num_exp = plan.grid_exponents.size();
  const std::size_t num_cells = num_exp * num_exp;

  // Folds are shared by every cell.
  std::vector<FoldData> folds;
  folds.reserve(plan.num_folds);
  for (std::size_t f = 0; f < plan.num_folds; ++f) {
    const ClassSplit split = split_classes(train.num_classes(), plan, f);
    FoldData fold;
    fold.train = restrict_to_classes(train, split.train_classes);
    fold.validation = validation_set(train, split.validation_classes);
    folds.push_back(std::move(fold));
  }

  CvResult result;
  result.method = method;
  result.grid_exponents = plan.grid_exponents;
  result.table.assign(num_cells, CvCell{});

  auto run_cell = [&](std::size_t cell) {
    CvCell& out = result.table[cell];
    out.value1 = std::pow(10.0, plan.grid_exponents[cell / num_exp]);
    out.value2 = std::pow(10.0, plan.grid_exponents[cell % num_exp]);
    try {
      double total = 0.0;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const FoldData& fold = folds[f];
        double acc = 0.0;
        if (method == Method::nszsl) {
          SolverConfig config = base_config;
          config.lambda1 = out.value1;
          config.lambda2 = out.value2;
          config.seed = fold_seed(plan, f);
          ModelWeights model = fit(fold.train, config);
          acc = evaluate(model, fold.validation.x, fold.validation.labels,
                         fold.validation.z, plan.metric);
        } else {
          eszsl::EszslModel model =
              eszsl::eszsl_fit(fold.train, {out.value1, out.value2});
          acc = evaluate(model, fold.validation.x, fold.validation.labels,
                         fold.validation.z, plan.metric);
        }
        total += acc;
      }
      out.mean_accuracy = total / static_cast<double>(folds.size());
    } catch (const Error& e) {
      out.failed = true;
      out.error = std::string(e.category()) + ": " + e.what();
      out.mean_accuracy = -std::numeric_limits<double>::infinity();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, plan.jobs);
  if (jobs == 1) {
    for (std::size_t cell = 0; cell < num_cells; ++cell) run_cell(cell);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < std::min(jobs, num_cells); ++w) {
      workers.emplace_back([&] {
        for (std::size_t cell = next.fetch_add(1); cell < num_cells;
             cell = next.fetch_add(1)) {
          run_cell(cell);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  // Best cell; the table is in ascending (value1, value2) order, so the
  // first strict maximum is the lexicographically smallest winner.
  std::size_t best = 0;
  for (std::size_t cell = 1; cell < num_cells; ++cell) {
    if (result.table[cell].mean_accuracy >
        result.table[best].mean_accuracy) {
      best = cell;
    }
  }
  if (result.table[best].failed) {
    throw NoConvergence("grid_search: every grid cell failed");
  }
  result.best_value1 = result.table[best].value1;
  result.best_value2 = result.table[best].value2;
  result.best_mean_accuracy = result.table[best].mean_accuracy;

  // Retrain on all seen classes at the winning cell.
  if (method == Method::nszsl) {
    SolverConfig config = base_config;
    config.lambda1 = result.best_value1;
    config.lambda2 = result.best_value2;

    for (std::size_t trial = 0; trial < plan.num_trials; ++trial) {
      config.seed = trial_seed(plan, trial);
      ModelWeights model = fit(train, config);
      if (test != nullptr) {
        result.trial_metrics.push_back(
            evaluate(model, test->x, test->labels, test->z, plan.metric));
      }
      if (trial == 0) result.final_model = std::move(model);
      if (test == nullptr) break;  // no metric to average, one fit suffices
    }
  } else {
    // The baseline has no stochastic component; one fit serves all trials.
    eszsl::EszslModel model =
        eszsl::eszsl_fit(train, {result.best_value1, result.best_value2});
    if (test != nullptr) {
      const double metric =
          evaluate(model, test->x, test->labels, test->z, plan.metric);
      result.trial_metrics.assign(plan.num_trials, metric);
    }
    result.final_model = std::move(model);
  }

  if (!result.trial_metrics.empty()) {
    const double n = static_cast<double>(result.trial_metrics.size());
    const double mean =
        std::accumulate(result.trial_metrics.begin(),
                        result.trial_metrics.end(), 0.0) /
        n;
    double var = 0.0;
    for (double v : result.trial_metrics) var += (v - mean) * (v - mean);
    result.test_mean = mean;
    result.test_std = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  } else {
    result.test_mean = std::numeric_limits<double>::quiet_NaN();
    result.test_std = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace nszsl::cv
