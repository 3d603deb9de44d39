#include "nszsl/synthgen.hpp"
#include <numeric>
#include <cstdio>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "nszsl/errors.hpp"

namespace nszsl::synth {

namespace {

std::string class_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
  return std::string(buf);
}

}  // namespace

void SynthSpec::validate() const {
  if (num_seen < 2 || num_unseen < 1) {
    throw Error("InvalidArgument",
                "synth: need at least 2 seen and 1 unseen class");
  }
  if (feat_dim < 1 || doc_dim < 1 || samples_per_class < 1) {
    throw Error("InvalidArgument", "synth: dimensions must be positive");
  }
  if (informative_dims < 1 || informative_dims > doc_dim) {
    throw Error("InvalidArgument",
                "synth: informative_dims must be in [1, doc_dim]");
  }
  if (!(doc_flip_prob >= 0.0) || !(doc_flip_prob < 1.0)) {
    throw Error("InvalidArgument", "synth: doc_flip_prob must be in [0, 1)");
  }
  if (!(feature_noise_std >= 0.0)) {
    throw Error("InvalidArgument", "synth: feature_noise_std must be >= 0");
  }
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();

  const std::size_t total_classes = spec.num_seen + spec.num_unseen;
  const std::size_t k = spec.informative_dims;
  // Need distinct non-zero patterns for every class.
  if (k < 63 && total_classes > ((1ull << k) - 1)) {
    throw Error("InvalidArgument",
                "synth: informative_dims too small for distinct class "
                "patterns");
  }

  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution flip(spec.doc_flip_prob);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Informative dimensions: a random k-subset of the doc dimensions.
  std::vector<std::size_t> dims(spec.doc_dim);
  std::iota(dims.begin(), dims.end(), 0);
  std::shuffle(dims.begin(), dims.end(), rng);
  std::vector<std::size_t> informative(dims.begin(), dims.begin() + k);
  std::sort(informative.begin(), informative.end());

  SynthData data;
  data.informative_mask.assign(spec.doc_dim, false);
  for (std::size_t i : informative) data.informative_mask[i] = true;

  // Distinct informative patterns; all-zero is rejected too (such a class
  // would have no feature signal at all).
  std::vector<std::vector<bool>> patterns;
  std::set<std::vector<bool>> used;
  while (patterns.size() < total_classes) {
    std::vector<bool> pattern(k);
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      pattern[i] = coin(rng);
      any = any || pattern[i];
    }
    if (!any || !used.insert(pattern).second) continue;
    patterns.push_back(std::move(pattern));
  }

  // Fixed signal map M (d×k), entries N(0, 1/k) so features stay O(1).
  DenseMatrix signal_map(spec.feat_dim, k);
  const double map_scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t i = 0; i < signal_map.size(); ++i) {
    signal_map.data()[i] = map_scale * gauss(rng);
  }

  auto make_doc_column = [&](text::DocMatrix& z, std::size_t col,
                             const std::vector<bool>& pattern) {
    for (std::size_t i = 0; i < k; ++i) {
      z.entries(informative[i], col) = pattern[i] ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < spec.doc_dim; ++i) {
      if (!data.informative_mask[i]) {
        z.entries(i, col) = flip(rng) ? 1.0 : 0.0;
      }
    }
  };

  auto make_samples = [&](DenseMatrix& x, std::size_t first_col,
                          const std::vector<bool>& pattern) {
    // x = M s + noise, one column per sample.
    std::vector<double> mean(spec.feat_dim, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (!pattern[j]) continue;
      for (std::size_t i = 0; i < spec.feat_dim; ++i) {
        mean[i] += signal_map(i, j);
      }
    }
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      for (std::size_t i = 0; i < spec.feat_dim; ++i) {
        x(i, first_col + s) = mean[i] + spec.feature_noise_std * gauss(rng);
      }
    }
  };

  // Seen classes.
  data.train.z.weighting = text::Weighting::binary;
  data.train.z.entries = DenseMatrix(spec.doc_dim, spec.num_seen, 0.0);
  data.train.x =
      DenseMatrix(spec.feat_dim, spec.num_seen * spec.samples_per_class);
  data.train.y.num_classes = spec.num_seen;
  for (std::size_t c = 0; c < spec.num_seen; ++c) {
    data.seen_ids.push_back(class_name("seen_", c));
    data.train.z.class_ids.push_back(data.seen_ids.back());
    make_doc_column(data.train.z, c, patterns[c]);
    make_samples(data.train.x, c * spec.samples_per_class, patterns[c]);
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      data.train.y.class_index.push_back(c);
    }
  }

  // Unseen classes.
  data.test.z.weighting = text::Weighting::binary;
  data.test.z.entries = DenseMatrix(spec.doc_dim, spec.num_unseen, 0.0);
  data.test.x =
      DenseMatrix(spec.feat_dim, spec.num_unseen * spec.samples_per_class);
  for (std::size_t c = 0; c < spec.num_unseen; ++c) {
    const auto& pattern = patterns[spec.num_seen + c];
    data.unseen_ids.push_back(class_name("unseen_", c));
    data.test.z.class_ids.push_back(data.unseen_ids.back());
    make_doc_column(data.test.z, c, pattern);
    make_samples(data.test.x, c * spec.samples_per_class, pattern);
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      data.test.labels.push_back(c);
    }
  }

  data.train.validate();
  return data;
}

}  // namespace nszsl::synth
