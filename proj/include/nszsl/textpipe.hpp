#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nszsl/dense_matrix.hpp"

namespace nszsl::text {

/// Stop words, held in tokenizer-normalized form: every entry is run
/// through the same split/lowercase/min-length rules as document text, so
/// "aren't" suppresses the token "aren".
class StopWordSet {
 public:
  /// The embedded default: the classic ~175-word English list.
  static const StopWordSet& default_english();
  /// One word per line, '#' starts a comment, UTF-8.
  static StopWordSet from_file(const std::string& path);
  static StopWordSet from_words(const std::vector<std::string>& words);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Lowercases, splits on any non-alphabetic byte (digits and punctuation
/// act as separators), drops tokens shorter than 2 characters and stop
/// words. Duplicates are preserved in input order.
std::vector<std::string> tokenize(std::string_view document,
                                  const StopWordSet& stop_words =
                                      StopWordSet::default_english());

struct Vocabulary {
  /// Distinct terms, lexicographically sorted.
  std::vector<std::string> terms;
  /// Exact inverse of the term ordering.
  std::unordered_map<std::string, std::size_t> index;
  /// Identifiers of the seen-class documents the vocabulary was built from.
  std::vector<std::string> source;

  std::size_t size() const noexcept { return terms.size(); }
  std::optional<std::size_t> lookup(std::string_view token) const;

  /// FNV-1a over the ordered term list; ties a model to its vocabulary.
  std::string hash() const;
};

/// Builds the vocabulary from seen-class documents only.
/// Throws EmptyVocabulary if no token survives the pipeline.
Vocabulary build_vocabulary(
    const std::vector<std::pair<std::string, std::string>>& seen_docs,
    const StopWordSet& stop_words = StopWordSet::default_english());

enum class Weighting { binary, tfidf };

std::string_view to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

/// Per-class description matrix: one column per class over the vocabulary
/// dimensions (or raw signal dimensions for synthetic data).
struct DocMatrix {
  DenseMatrix entries;  // vocab_size × num_classes
  Weighting weighting = Weighting::binary;
  std::vector<std::string> class_ids;

  std::size_t vocab_size() const noexcept { return entries.rows(); }
  std::size_t num_classes() const noexcept { return entries.cols(); }

  /// Column subset in the given order; unknown ids throw UnknownClass.
  DocMatrix select_classes(const std::vector<std::string>& ids) const;
};

/// Featurizes documents against a fixed vocabulary. Out-of-vocabulary
/// tokens are dropped silently. Binary: entry is 1 iff the word occurs.
/// TF-IDF: raw count × log(C/df), df over this document set, each column
/// l2-normalized. Throws AllZeroColumn when a document yields an all-zero
/// column.
DocMatrix featurize(
    const std::vector<std::pair<std::string, std::string>>& docs,
    const Vocabulary& vocab, Weighting weighting,
    const StopWordSet& stop_words = StopWordSet::default_english());

}  // namespace nszsl::text
