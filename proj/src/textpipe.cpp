#include "nszsl/textpipe.hpp"
#include <cstdio>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "nszsl/errors.hpp"
#include "nszsl/kernels.hpp"

namespace nszsl::text {

namespace {

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Split/lowercase/min-length only; stop-word filtering is the caller's.
std::vector<std::string> raw_tokens(std::string_view document) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : document) {
    if (is_alpha(c)) {
      current.push_back(to_lower(c));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(std::move(current));
  return tokens;
}

const char* kDefaultStopWords[] = {
    "a",          "about",      "above",     "after",     "again",
    "against",    "all",        "am",        "an",        "and",
    "any",        "are",        "aren't",    "as",        "at",
    "be",         "because",    "been",      "before",    "being",
    "below",      "between",    "both",      "but",       "by",
    "can't",      "cannot",     "could",     "couldn't",  "did",
    "didn't",     "do",         "does",      "doesn't",   "doing",
    "don't",      "down",       "during",    "each",      "few",
    "for",        "from",       "further",   "had",       "hadn't",
    "has",        "hasn't",     "have",      "haven't",   "having",
    "he",         "he'd",       "he'll",     "he's",      "her",
    "here",       "here's",     "hers",      "herself",   "him",
    "himself",    "his",        "how",       "how's",     "i",
    "i'd",        "i'll",       "i'm",       "i've",      "if",
    "in",         "into",       "is",        "isn't",     "it",
    "it's",       "its",        "itself",    "let's",     "me",
    "more",       "most",       "mustn't",   "my",        "myself",
    "no",         "nor",        "not",       "of",        "off",
    "on",         "once",       "only",      "or",        "other",
    "ought",      "our",        "ours",      "ourselves", "out",
    "over",       "own",        "same",      "shan't",    "she",
    "she'd",      "she'll",     "she's",     "should",    "shouldn't",
    "so",         "some",       "such",      "than",      "that",
    "that's",     "the",        "their",     "theirs",    "them",
    "themselves", "then",       "there",     "there's",   "these",
    "they",       "they'd",     "they'll",   "they're",   "they've",
    "this",       "those",      "through",   "to",        "too",
    "under",      "until",      "up",        "very",      "was",
    "wasn't",     "we",         "we'd",      "we'll",     "we're",
    "we've",      "were",       "weren't",   "what",      "what's",
    "when",       "when's",     "where",     "where's",   "which",
    "while",      "who",        "who's",     "whom",      "why",
    "why's",      "with",       "won't",     "would",     "wouldn't",
    "you",        "you'd",      "you'll",    "you're",    "you've",
    "your",       "yours",      "yourself",  "yourselves"};

}  // namespace

const StopWordSet& StopWordSet::default_english() {
  static const StopWordSet instance = [] {
    std::vector<std::string> words;
    words.reserve(std::size(kDefaultStopWords));
    for (const char* w : kDefaultStopWords) words.emplace_back(w);
    return from_words(words);
  }();
  return instance;
}

StopWordSet StopWordSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("stop-word file not readable: " + path);
  }
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string word;
    while (fields >> word) words.push_back(word);
  }
  return from_words(words);
}

StopWordSet StopWordSet::from_words(const std::vector<std::string>& words) {
  StopWordSet set;
  for (const auto& word : words) {
    // Normalize through the tokenizer so entries match what documents
    // actually produce ("aren't" -> "aren").
    for (auto& token : raw_tokens(word)) {
      set.words_.insert(std::move(token));
    }
  }
  return set;
}

bool StopWordSet::contains(std::string_view token) const {
  return words_.find(std::string(token)) != words_.end();
}

std::vector<std::string> tokenize(std::string_view document,
                                  const StopWordSet& stop_words) {
  std::vector<std::string> tokens = raw_tokens(document);
  std::erase_if(tokens, [&](const std::string& t) {
    return stop_words.contains(t);
  });
  return tokens;
}

std::optional<std::size_t> Vocabulary::lookup(std::string_view token) const {
  auto it = index.find(std::string(token));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64-bit offset basis
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;  // term separator
    h *= 1099511628211ull;
  };
  for (const auto& term : terms) mix(term);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

Vocabulary build_vocabulary(
    const std::vector<std::pair<std::string, std::string>>& seen_docs,
    const StopWordSet& stop_words) {
  if (seen_docs.empty()) {
    throw EmptyVocabulary("build_vocabulary: no documents given");
  }
  std::set<std::string> distinct;
  Vocabulary vocab;
  for (const auto& [class_id, body] : seen_docs) {
    vocab.source.push_back(class_id);
    for (auto& token : tokenize(body, stop_words)) {
      distinct.insert(std::move(token));
    }
  }
  if (distinct.empty()) {
    throw EmptyVocabulary(
        "build_vocabulary: no token survives tokenization and stop-word "
        "removal");
  }
  vocab.terms.assign(distinct.begin(), distinct.end());
  vocab.index.reserve(vocab.terms.size());
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
    vocab.index.emplace(vocab.terms[i], i);
  }
  return vocab;
}

std::string_view to_string(Weighting w) {
  return w == Weighting::binary ? "binary" : "tfidf";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "binary") return Weighting::binary;
  if (s == "tfidf") return Weighting::tfidf;
  throw ParseError("unknown weighting: " + std::string(s));
}

DocMatrix DocMatrix::select_classes(
    const std::vector<std::string>& ids) const {
  if (ids.empty()) {
    throw DimensionMismatch("select_classes: empty class list");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t j = 0; j < class_ids.size(); ++j) {
    position.emplace(class_ids[j], j);
  }
  DocMatrix out;
  out.weighting = weighting;
  out.class_ids = ids;
  out.entries = DenseMatrix(entries.rows(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    auto it = position.find(ids[j]);
    if (it == position.end()) {
      throw UnknownClass("select_classes: class not in DocMatrix: " + ids[j]);
    }
    for (std::size_t i = 0; i < entries.rows(); ++i) {
      out.entries(i, j) = entries(i, it->second);
    }
  }
  return out;
}

DocMatrix featurize(
    const std::vector<std::pair<std::string, std::string>>& docs,
    const Vocabulary& vocab, Weighting weighting,
    const StopWordSet& stop_words) {
  if (docs.empty()) {
    throw DimensionMismatch("featurize: no documents given");
  }
  if (vocab.terms.empty()) {
    throw EmptyVocabulary("featurize: empty vocabulary");
  }

  const std::size_t d_hat = vocab.size();
  const std::size_t num_classes = docs.size();

  DocMatrix out;
  out.weighting = weighting;
  out.entries = DenseMatrix(d_hat, num_classes, 0.0);

  // Raw in-vocabulary counts.
  for (std::size_t c = 0; c < num_classes; ++c) {
    out.class_ids.push_back(docs[c].first);
    for (const auto& token : tokenize(docs[c].second, stop_words)) {
      if (auto idx = vocab.lookup(token)) {
        out.entries(*idx, c) += 1.0;
      }
    }
  }

  if (weighting == Weighting::binary) {
    for (std::size_t i = 0; i < d_hat; ++i) {
      for (std::size_t c = 0; c < num_classes; ++c) {
        if (out.entries(i, c) > 0.0) out.entries(i, c) = 1.0;
      }
    }
  } else {
    // idf over this document set: log(C / df).
    for (std::size_t i = 0; i < d_hat; ++i) {
      std::size_t df = 0;
      for (std::size_t c = 0; c < num_classes; ++c) {
        if (out.entries(i, c) > 0.0) ++df;
      }
      if (df == 0) continue;
      const double idf =
          std::log(static_cast<double>(num_classes) / static_cast<double>(df));
      for (std::size_t c = 0; c < num_classes; ++c) {
        out.entries(i, c) *= idf;
      }
    }
  }

  // All-zero columns are ingestion errors; for tfidf, l2-normalize the rest.
  std::vector<double> colsq = column_sumsq(out.entries);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (colsq[c] == 0.0) {
      throw AllZeroColumn("featurize: class '" + out.class_ids[c] +
                          "' produced an all-zero column");
    }
  }
  if (weighting == Weighting::tfidf) {
    std::vector<double> inv_norm(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      inv_norm[c] = 1.0 / std::sqrt(colsq[c]);
    }
    scale_cols(out.entries, inv_norm);
  }
  return out;
}

}  // namespace nszsl::text
