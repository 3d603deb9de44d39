#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nszsl/cvharness.hpp"
#include "nszsl/eszsl.hpp"
#include "nszsl/model.hpp"
#include "nszsl/synthgen.hpp"
#include "nszsl/textpipe.hpp"

namespace nszsl::io {

// --- matrices -----------------------------------------------------------
// Two interchangeable on-disk forms, documented in docs/FORMATS.md:
//   * CSV: "#dims d=<rows> n=<cols>" header line, then comma-separated
//     rows, 17 significant digits (decimal round-trip safe).
//   * binary: magic "NZSL", u32 version, u64 rows, u64 cols, row-major
//     little-endian float64 (bit-exact round trip).
// Readers sniff the magic bytes, so either form loads through the same
// entry point.

DenseMatrix load_features(const std::string& path);
void save_matrix_csv(const std::string& path, const DenseMatrix& m);
void save_matrix_binary(const std::string& path, const DenseMatrix& m);

// --- labels & class lists ------------------------------------------------

/// One class id per line, in example order. Throws UnknownClass (with the
/// line number) for ids outside `class_list`.
LabelIndicator load_labels(const std::string& path,
                           const std::vector<std::string>& class_list);
void save_labels(const std::string& path,
                 const std::vector<std::size_t>& class_index,
                 const std::vector<std::string>& class_list);

/// One id per line; '#' starts a comment.
std::vector<std::string> load_class_list(const std::string& path);
void save_class_list(const std::string& path,
                     const std::vector<std::string>& ids);

// --- vocabulary / doc matrices ------------------------------------------

void save_vocabulary(const std::string& path, const text::Vocabulary& vocab);
text::Vocabulary load_vocabulary(const std::string& path);

void save_docmatrix(const std::string& path, const text::DocMatrix& dm);
text::DocMatrix load_docmatrix(const std::string& path);

// --- models ---------------------------------------------------------------

void save_model(const std::string& path, const ModelWeights& model,
                const std::string& vocab_hash = "");
ModelWeights load_model(const std::string& path);

void save_eszsl_model(const std::string& path, const eszsl::EszslModel& model,
                      const std::string& vocab_hash = "");
eszsl::EszslModel load_eszsl_model(const std::string& path);

/// "nszsl" or "eszsl" without loading the weights.
std::string peek_model_kind(const std::string& path);

// --- cross-validation results ---------------------------------------------

void save_cv_result(const std::string& json_path,
                    const std::string& cells_csv_path,
                    const cv::CvResult& result);

// --- dataset manifests -----------------------------------------------------

/// Points at everything one experiment needs. Relative paths are resolved
/// against the manifest's own directory. Class descriptions come either
/// from a directory of per-class text files or from a prebuilt DocMatrix.
struct DatasetManifest {
  int version = 1;
  std::string train_features;
  std::string train_labels;
  std::string test_features;
  std::string test_labels;
  std::string seen_classes;
  std::string unseen_classes;
  std::string documents_dir;  // exclusive with docmatrix
  std::string docmatrix;
  std::string stopwords;  // optional override
  text::Weighting weighting = text::Weighting::binary;
};

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& manifest);

struct Dataset {
  TrainingSet train;
  cv::UnseenSet test;
  std::optional<text::Vocabulary> vocab;  // only for document corpora
  std::vector<std::string> seen_ids;
  std::vector<std::string> unseen_ids;
};

/// Loads and cross-validates everything the manifest references. The
/// vocabulary is always built from seen-class documents only.
Dataset load_dataset(const DatasetManifest& manifest);

/// Writes a synthetic dataset in the exact same formats (binary features,
/// label/class lists, DocMatrix JSON over seen+unseen classes) plus a
/// manifest, so downstream commands treat it like real data. Also writes
/// the ground-truth informative mask. Returns the manifest path.
std::string save_synth_dataset(const std::string& dir,
                               const synth::SynthSpec& spec,
                               const synth::SynthData& data);

}  // namespace nszsl::io
