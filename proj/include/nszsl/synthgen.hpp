#pragma once

#include <cstdint>
#include <vector>

#include "nszsl/cvharness.hpp"
#include "nszsl/model.hpp"

namespace nszsl::synth {

/// Planted-signal benchmark family: a known subset of description
/// dimensions causally drives the features, the rest is random bit noise,
/// so suppression quality is directly measurable.
struct SynthSpec {
  std::size_t num_seen = 40;
  std::size_t num_unseen = 10;
  std::size_t feat_dim = 64;       // d
  std::size_t doc_dim = 300;       // d̂
  std::size_t informative_dims = 50;  // k
  std::size_t samples_per_class = 30;
  double doc_flip_prob = 0.05;
  double feature_noise_std = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  TrainingSet train;
  cv::UnseenSet test;
  /// Ground truth: true at the doc dimensions that drive the features;
  /// exactly `informative_dims` entries set.
  std::vector<bool> informative_mask;
  std::vector<std::string> seen_ids;
  std::vector<std::string> unseen_ids;
};

/// Every class gets a distinct random binary pattern over the informative
/// dimensions (regenerated on collision or all-zero); the remaining
/// dimensions are i.i.d. Bernoulli(doc_flip_prob) bits. Features are
/// x = M·(informative sub-vector) + N(0, feature_noise_std²) with a fixed
/// random map M shared across classes. Deterministic given the seed.
SynthData generate(const SynthSpec& spec);

}  // namespace nszsl::synth
