#include "nszsl/dataio.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "nszsl/errors.hpp"

namespace nszsl::io {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary matrix format is defined little-endian");

namespace {

constexpr char kBinaryMagic[4] = {'N', 'Z', 'S', 'L'};
constexpr std::uint32_t kBinaryVersion = 1;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ParseError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ParseError("cannot open for reading: " + path);
  return in;
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("invalid JSON: " + path);
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw ParseError("failed writing: " + path);
}

void check_format(const json& j, const std::string& path,
                  const std::string& format) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw SchemaVersionMismatch(path + ": expected format '" + format + "'");
  }
  if (j.value("version", 0) != 1) {
    throw SchemaVersionMismatch(path + ": unsupported version");
  }
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ParseError(where + ": expected a non-empty nested array");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ParseError(where + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw ParseError(where + ": non-numeric entry");
      m(i, c) = j[i][c].get<double>();
    }
  }
  return m;
}

DenseMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");

  std::size_t rows = 0;
  std::size_t cols = 0;
  if (std::sscanf(line.c_str(), "#dims d=%zu n=%zu", &rows, &cols) != 2 ||
      rows == 0 || cols == 0) {
    throw ParseError(path + ":1: expected header '#dims d=<rows> n=<cols>'");
  }

  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(path + ": fewer rows than the header declares");
    }
    const char* cursor = line.c_str();
    for (std::size_t j = 0; j < cols; ++j) {
      char* end = nullptr;
      const double v = std::strtod(cursor, &end);
      if (end == cursor) {
        throw ParseError(path + ":" + std::to_string(i + 2) + ": column " +
                         std::to_string(j + 1) + ": expected a number");
      }
      if (!std::isfinite(v)) {
        throw NonFiniteValue(path + ":" + std::to_string(i + 2) +
                             ": non-finite value");
      }
      m(i, j) = v;
      cursor = end;
      if (j + 1 < cols) {
        while (*cursor == ' ') ++cursor;
        if (*cursor != ',') {
          throw ParseError(path + ":" + std::to_string(i + 2) +
                           ": expected ',' after column " +
                           std::to_string(j + 1));
        }
        ++cursor;
      }
    }
  }
  return m;
}

DenseMatrix load_matrix_binary(const std::string& path) {
  std::ifstream in = open_in(path, true);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw ParseError(path + ": bad binary matrix header");
  }
  if (version != kBinaryVersion) {
    throw SchemaVersionMismatch(path + ": unsupported binary matrix version");
  }
  if (rows == 0 || cols == 0 || rows > (1ull << 32) || cols > (1ull << 32)) {
    throw ParseError(path + ": implausible matrix dimensions");
  }
  DenseMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!in || in.gcount() !=
                 static_cast<std::streamsize>(sizeof(double) * m.size())) {
    throw ParseError(path + ": truncated binary matrix");
  }
  if (!m.all_finite()) throw NonFiniteValue(path + ": non-finite entries");
  return m;
}

std::vector<std::string> read_id_lines(const std::string& path,
                                       bool strip_comments) {
  std::ifstream in = open_in(path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (strip_comments) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
    }
    // trim
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(begin, end - begin + 1));
  }
  return ids;
}

json config_to_json(const SolverConfig& c) {
  return json{{"lambda1", c.lambda1},
              {"lambda2", c.lambda2},
              {"sigma", c.sigma},
              {"max_outer", c.max_outer},
              {"max_inner", c.max_inner},
              {"rel_tol", c.rel_tol},
              {"seed", c.seed},
              {"regularizer", std::string(to_string(c.regularizer))},
              {"epsilon_ridge", c.epsilon_ridge},
              {"m_override", c.m_override}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.lambda1 = j.at("lambda1").get<double>();
  c.lambda2 = j.at("lambda2").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.max_outer = j.at("max_outer").get<std::size_t>();
  c.max_inner = j.at("max_inner").get<std::size_t>();
  c.rel_tol = j.at("rel_tol").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.regularizer =
      regularizer_from_string(j.at("regularizer").get<std::string>());
  c.epsilon_ridge = j.at("epsilon_ridge").get<double>();
  c.m_override = j.at("m_override").get<std::size_t>();
  return c;
}

std::string resolve_against(const fs::path& base, const std::string& maybe) {
  if (maybe.empty()) return maybe;
  fs::path p(maybe);
  if (p.is_absolute()) return p.string();
  return (base / p).string();
}

}  // namespace

DenseMatrix load_features(const std::string& path) {
  std::ifstream probe = open_in(path, true);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  if (probe.gcount() == 0) throw ParseError(path + ": empty file");
  probe.close();
  if (std::memcmp(magic, kBinaryMagic, 4) == 0) {
    return load_matrix_binary(path);
  }
  return load_matrix_csv(path);
}

void save_matrix_csv(const std::string& path, const DenseMatrix& m) {
  std::ofstream out = open_out(path);
  out << "#dims d=" << m.rows() << " n=" << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw ParseError("failed writing: " + path);
}

void save_matrix_binary(const std::string& path, const DenseMatrix& m) {
  std::ofstream out = open_out(path, true);
  const std::uint64_t rows = m.rows();
  const std::uint64_t cols = m.cols();
  out.write(kBinaryMagic, 4);
  out.write(reinterpret_cast<const char*>(&kBinaryVersion),
            sizeof kBinaryVersion);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!out) throw ParseError("failed writing: " + path);
}

LabelIndicator load_labels(const std::string& path,
                           const std::vector<std::string>& class_list) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < class_list.size(); ++i) {
    index.emplace(class_list[i], i);
  }

  std::ifstream in = open_in(path);
  LabelIndicator labels;
  labels.num_classes = class_list.size();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string id = line.substr(begin, end - begin + 1);
    auto it = index.find(id);
    if (it == index.end()) {
      throw UnknownClass(path + ":" + std::to_string(line_no) +
                         ": unknown class '" + id + "'");
    }
    labels.class_index.push_back(it->second);
  }
  if (labels.class_index.empty()) {
    throw ParseError(path + ": no labels");
  }
  return labels;
}

void save_labels(const std::string& path,
                 const std::vector<std::size_t>& class_index,
                 const std::vector<std::string>& class_list) {
  std::ofstream out = open_out(path);
  for (std::size_t idx : class_index) {
    out << class_list.at(idx) << '\n';
  }
  if (!out) throw ParseError("failed writing: " + path);
}

std::vector<std::string> load_class_list(const std::string& path) {
  std::vector<std::string> ids = read_id_lines(path, true);
  if (ids.empty()) throw ParseError(path + ": empty class list");
  return ids;
}

void save_class_list(const std::string& path,
                     const std::vector<std::string>& ids) {
  std::ofstream out = open_out(path);
  for (const auto& id : ids) out << id << '\n';
  if (!out) throw ParseError("failed writing: " + path);
}

void save_vocabulary(const std::string& path, const text::Vocabulary& vocab) {
  write_json_file(path, json{{"format", "nszsl-vocab"},
                             {"version", 1},
                             {"terms", vocab.terms},
                             {"source", vocab.source},
                             {"hash", vocab.hash()}});
}

text::Vocabulary load_vocabulary(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-vocab");
  text::Vocabulary vocab;
  vocab.terms = j.at("terms").get<std::vector<std::string>>();
  vocab.source = j.value("source", std::vector<std::string>{});
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
    vocab.index.emplace(vocab.terms[i], i);
  }
  if (vocab.terms.empty()) throw EmptyVocabulary(path + ": no terms");
  return vocab;
}

void save_docmatrix(const std::string& path, const text::DocMatrix& dm) {
  write_json_file(path,
                  json{{"format", "nszsl-docmatrix"},
                       {"version", 1},
                       {"weighting", std::string(to_string(dm.weighting))},
                       {"class_ids", dm.class_ids},
                       {"entries", matrix_to_json(dm.entries)}});
}

text::DocMatrix load_docmatrix(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-docmatrix");
  text::DocMatrix dm;
  dm.weighting =
      text::weighting_from_string(j.at("weighting").get<std::string>());
  dm.class_ids = j.at("class_ids").get<std::vector<std::string>>();
  dm.entries = matrix_from_json(j.at("entries"), path);
  if (dm.class_ids.size() != dm.entries.cols()) {
    throw ParseError(path + ": class_ids length != entry columns");
  }
  return dm;
}

void save_model(const std::string& path, const ModelWeights& model,
                const std::string& vocab_hash) {
  write_json_file(path, json{{"format", "nszsl-model"},
                             {"version", 1},
                             {"kind", "nszsl"},
                             {"m", model.m},
                             {"d", model.wx.cols()},
                             {"d_hat", model.wz.cols()},
                             {"config", config_to_json(model.config)},
                             {"wx", matrix_to_json(model.wx)},
                             {"wz", matrix_to_json(model.wz)},
                             {"trace", model.trace},
                             {"converged", model.converged},
                             {"paper_conformant", model.paper_conformant},
                             {"vocab_hash", vocab_hash}});
}

ModelWeights load_model(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-model");
  if (j.value("kind", "") != "nszsl") {
    throw SchemaVersionMismatch(path + ": expected kind 'nszsl'");
  }
  ModelWeights model;
  model.m = j.at("m").get<std::size_t>();
  model.config = config_from_json(j.at("config"));
  model.wx = matrix_from_json(j.at("wx"), path);
  model.wz = matrix_from_json(j.at("wz"), path);
  model.trace = j.value("trace", std::vector<double>{});
  model.converged = j.value("converged", false);
  model.paper_conformant = j.value("paper_conformant", true);
  if (model.wx.rows() != model.m || model.wz.rows() != model.m) {
    throw ParseError(path + ": weight shapes inconsistent with m");
  }
  return model;
}

void save_eszsl_model(const std::string& path, const eszsl::EszslModel& model,
                      const std::string& vocab_hash) {
  write_json_file(path, json{{"format", "nszsl-model"},
                             {"version", 1},
                             {"kind", "eszsl"},
                             {"d", model.v.rows()},
                             {"d_hat", model.v.cols()},
                             {"config",
                              json{{"gamma", model.config.gamma},
                                   {"lambda", model.config.lambda}}},
                             {"v", matrix_to_json(model.v)},
                             {"vocab_hash", vocab_hash}});
}

eszsl::EszslModel load_eszsl_model(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-model");
  if (j.value("kind", "") != "eszsl") {
    throw SchemaVersionMismatch(path + ": expected kind 'eszsl'");
  }
  eszsl::EszslModel model;
  model.config.gamma = j.at("config").at("gamma").get<double>();
  model.config.lambda = j.at("config").at("lambda").get<double>();
  model.v = matrix_from_json(j.at("v"), path);
  return model;
}

std::string peek_model_kind(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-model");
  const std::string kind = j.value("kind", "");
  if (kind != "nszsl" && kind != "eszsl") {
    throw SchemaVersionMismatch(path + ": unknown model kind '" + kind + "'");
  }
  return kind;
}

void save_cv_result(const std::string& json_path,
                    const std::string& cells_csv_path,
                    const cv::CvResult& result) {
  json cells = json::array();
  for (const auto& cell : result.table) {
    cells.push_back(json{{"value1", cell.value1},
                         {"value2", cell.value2},
                         {"mean_accuracy", cell.mean_accuracy},
                         {"failed", cell.failed},
                         {"error", cell.error}});
  }
  json j{{"format", "nszsl-cvresult"},
         {"version", 1},
         {"method", std::string(cv::to_string(result.method))},
         {"best_value1", result.best_value1},
         {"best_value2", result.best_value2},
         {"best_mean_accuracy", result.best_mean_accuracy},
         {"grid_exponents", result.grid_exponents},
         {"cells", std::move(cells)},
         {"trial_metrics", result.trial_metrics}};
  if (!result.trial_metrics.empty()) {
    j["test_mean"] = result.test_mean;
    j["test_std"] = result.test_std;
  }
  write_json_file(json_path, j);

  if (!cells_csv_path.empty()) {
    std::ofstream out = open_out(cells_csv_path);
    out << "value1,value2,mean_accuracy,failed\n";
    for (const auto& cell : result.table) {
      out << format_double(cell.value1) << ',' << format_double(cell.value2)
          << ',' << format_double(cell.mean_accuracy) << ','
          << (cell.failed ? 1 : 0) << '\n';
    }
    if (!out) throw ParseError("failed writing: " + cells_csv_path);
  }
}

DatasetManifest load_manifest(const std::string& path) {
  json j = parse_json_file(path);
  check_format(j, path, "nszsl-manifest");

  const fs::path base = fs::path(path).parent_path();
  DatasetManifest m;
  m.train_features = resolve_against(base, j.at("train_features"));
  m.train_labels = resolve_against(base, j.at("train_labels"));
  m.test_features = resolve_against(base, j.at("test_features"));
  m.test_labels = resolve_against(base, j.at("test_labels"));
  m.seen_classes = resolve_against(base, j.at("seen_classes"));
  m.unseen_classes = resolve_against(base, j.at("unseen_classes"));
  m.documents_dir = resolve_against(base, j.value("documents_dir", ""));
  m.docmatrix = resolve_against(base, j.value("docmatrix", ""));
  m.stopwords = resolve_against(base, j.value("stopwords", ""));
  m.weighting =
      text::weighting_from_string(j.value("weighting", "binary"));

  if (m.documents_dir.empty() == m.docmatrix.empty()) {
    throw ParseError(path +
                     ": exactly one of documents_dir/docmatrix is required");
  }
  for (const std::string* p :
       {&m.train_features, &m.train_labels, &m.test_features, &m.test_labels,
        &m.seen_classes, &m.unseen_classes}) {
    if (!fs::exists(*p)) throw ParseError(path + ": missing file: " + *p);
  }
  if (!m.documents_dir.empty() && !fs::is_directory(m.documents_dir)) {
    throw ParseError(path + ": documents_dir is not a directory");
  }
  if (!m.docmatrix.empty() && !fs::exists(m.docmatrix)) {
    throw ParseError(path + ": missing file: " + m.docmatrix);
  }
  if (!m.stopwords.empty() && !fs::exists(m.stopwords)) {
    throw ParseError(path + ": missing file: " + m.stopwords);
  }
  return m;
}

void save_manifest(const std::string& path, const DatasetManifest& manifest) {
  json j{{"format", "nszsl-manifest"},
         {"version", 1},
         {"train_features", manifest.train_features},
         {"train_labels", manifest.train_labels},
         {"test_features", manifest.test_features},
         {"test_labels", manifest.test_labels},
         {"seen_classes", manifest.seen_classes},
         {"unseen_classes", manifest.unseen_classes},
         {"weighting", std::string(to_string(manifest.weighting))}};
  if (!manifest.documents_dir.empty()) {
    j["documents_dir"] = manifest.documents_dir;
  }
  if (!manifest.docmatrix.empty()) j["docmatrix"] = manifest.docmatrix;
  if (!manifest.stopwords.empty()) j["stopwords"] = manifest.stopwords;
  write_json_file(path, j);
}

namespace {

std::vector<std::pair<std::string, std::string>> read_documents(
    const std::string& dir, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, fs::path> by_stem;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      by_stem.emplace(entry.path().stem().string(), entry.path());
    }
  }
  std::vector<std::pair<std::string, std::string>> docs;
  docs.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_stem.find(id);
    if (it == by_stem.end()) {
      throw ParseError("no document for class '" + id + "' in " + dir);
    }
    std::ifstream in = open_in(it->second.string());
    std::ostringstream body;
    body << in.rdbuf();
    docs.emplace_back(id, body.str());
  }
  return docs;
}

}  // namespace

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset ds;
  ds.seen_ids = load_class_list(manifest.seen_classes);
  ds.unseen_ids = load_class_list(manifest.unseen_classes);

  std::unordered_set<std::string> seen_set(ds.seen_ids.begin(),
                                           ds.seen_ids.end());
  if (seen_set.size() != ds.seen_ids.size()) {
    throw ParseError("duplicate ids in seen class list");
  }
  for (const auto& id : ds.unseen_ids) {
    if (seen_set.count(id)) {
      throw ParseError("class '" + id + "' appears in both class lists");
    }
  }

  ds.train.x = load_features(manifest.train_features);
  ds.train.y = load_labels(manifest.train_labels, ds.seen_ids);
  ds.test.x = load_features(manifest.test_features);
  LabelIndicator test_labels =
      load_labels(manifest.test_labels, ds.unseen_ids);
  ds.test.labels = std::move(test_labels.class_index);

  if (!manifest.docmatrix.empty()) {
    const text::DocMatrix all = load_docmatrix(manifest.docmatrix);
    ds.train.z = all.select_classes(ds.seen_ids);
    ds.test.z = all.select_classes(ds.unseen_ids);
  } else {
    const text::StopWordSet stop =
        manifest.stopwords.empty()
            ? text::StopWordSet::default_english()
            : text::StopWordSet::from_file(manifest.stopwords);
    auto seen_docs = read_documents(manifest.documents_dir, ds.seen_ids);
    auto unseen_docs = read_documents(manifest.documents_dir, ds.unseen_ids);
    ds.vocab = text::build_vocabulary(seen_docs, stop);
    ds.train.z = text::featurize(seen_docs, *ds.vocab, manifest.weighting,
                                 stop);
    ds.test.z = text::featurize(unseen_docs, *ds.vocab, manifest.weighting,
                                stop);
  }

  ds.train.validate();
  if (ds.test.x.cols() != ds.test.labels.size()) {
    throw DimensionMismatch("test features/labels count mismatch");
  }
  if (ds.test.x.rows() != ds.train.x.rows()) {
    throw DimensionMismatch("train/test feature dimensionality differs");
  }
  return ds;
}

std::string save_synth_dataset(const std::string& dir,
                               const synth::SynthSpec& spec,
                               const synth::SynthData& data) {
  fs::create_directories(dir);
  const fs::path base(dir);

  save_matrix_binary((base / "train_features.nzsl").string(), data.train.x);
  save_matrix_binary((base / "test_features.nzsl").string(), data.test.x);
  save_labels((base / "train_labels.txt").string(),
              data.train.y.class_index, data.seen_ids);
  save_labels((base / "test_labels.txt").string(), data.test.labels,
              data.unseen_ids);
  save_class_list((base / "seen_classes.txt").string(), data.seen_ids);
  save_class_list((base / "unseen_classes.txt").string(), data.unseen_ids);

  // One DocMatrix over seen followed by unseen classes.
  text::DocMatrix all;
  all.weighting = text::Weighting::binary;
  all.class_ids = data.seen_ids;
  all.class_ids.insert(all.class_ids.end(), data.unseen_ids.begin(),
                       data.unseen_ids.end());
  all.entries = DenseMatrix(spec.doc_dim, all.class_ids.size());
  for (std::size_t i = 0; i < spec.doc_dim; ++i) {
    for (std::size_t c = 0; c < data.seen_ids.size(); ++c) {
      all.entries(i, c) = data.train.z.entries(i, c);
    }
    for (std::size_t c = 0; c < data.unseen_ids.size(); ++c) {
      all.entries(i, data.seen_ids.size() + c) = data.test.z.entries(i, c);
    }
  }
  save_docmatrix((base / "docmatrix.json").string(), all);

  json mask = json::array();
  for (bool b : data.informative_mask) mask.push_back(b ? 1 : 0);
  write_json_file((base / "informative_mask.json").string(),
                  json{{"format", "nszsl-mask"},
                       {"version", 1},
                       {"informative", std::move(mask)}});

  write_json_file((base / "synth_spec.json").string(),
                  json{{"format", "nszsl-synthspec"},
                       {"version", 1},
                       {"num_seen", spec.num_seen},
                       {"num_unseen", spec.num_unseen},
                       {"feat_dim", spec.feat_dim},
                       {"doc_dim", spec.doc_dim},
                       {"informative_dims", spec.informative_dims},
                       {"samples_per_class", spec.samples_per_class},
                       {"doc_flip_prob", spec.doc_flip_prob},
                       {"feature_noise_std", spec.feature_noise_std},
                       {"seed", spec.seed}});

  DatasetManifest manifest;
  manifest.train_features = "train_features.nzsl";
  manifest.train_labels = "train_labels.txt";
  manifest.test_features = "test_features.nzsl";
  manifest.test_labels = "test_labels.txt";
  manifest.seen_classes = "seen_classes.txt";
  manifest.unseen_classes = "unseen_classes.txt";
  manifest.docmatrix = "docmatrix.json";
  manifest.weighting = text::Weighting::binary;

  const std::string manifest_path = (base / "manifest.json").string();
  save_manifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace nszsl::io
