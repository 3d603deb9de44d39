// nszsl — command-line front end for the zero-shot learning toolkit.
// Subcommands: synth, vocab, featurize, train, cv, eval, analyze.
// Every run writes a resolved-config JSON next to its outputs; errors exit
// nonzero with a single machine-parsable "error: <category>: <message>"
// line on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "nszsl/cvharness.hpp"
#include "nszsl/dataio.hpp"
#include "nszsl/errors.hpp"
#include "nszsl/eszsl.hpp"
#include "nszsl/kernels.hpp"
#include "nszsl/model.hpp"
#include "nszsl/synthgen.hpp"
#include "nszsl/textpipe.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nszsl;

namespace {

void write_resolved_config(const std::string& dir, const std::string& command,
                           json config) {
  fs::create_directories(dir);
  config["command"] = command;
  config["kernels"] =
      std::string(kernels::backend_name(kernels::active_backend()));
  std::ofstream out(fs::path(dir) / "resolved_config.json");
  out << config.dump(2) << '\n';
  if (!out) throw ParseError("cannot write resolved config in " + dir);
}

text::StopWordSet stopwords_or_default(const std::string& path) {
  if (path.empty()) return text::StopWordSet::default_english();
  return text::StopWordSet::from_file(path);
}

std::vector<std::pair<std::string, std::string>> read_docs_dir(
    const std::string& dir, const std::vector<std::string>& only) {
  if (!fs::is_directory(dir)) {
    throw ParseError("not a directory: " + dir);
  }
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files.emplace_back(entry.path().stem().string(), entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::pair<std::string, std::string>> docs;
  auto read_file = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
  };
  if (only.empty()) {
    for (const auto& [id, path] : files) docs.emplace_back(id, read_file(path));
  } else {
    for (const auto& id : only) {
      auto it = std::find_if(files.begin(), files.end(),
                             [&](const auto& f) { return f.first == id; });
      if (it == files.end()) {
        throw ParseError("no document for class '" + id + "' in " + dir);
      }
      docs.emplace_back(id, read_file(it->second));
    }
  }
  if (docs.empty()) throw ParseError("no documents in " + dir);
  return docs;
}

// Placeholder vocabulary for datasets without text (synthetic DocMatrix):
// one "dim<index>" term per description dimension.
text::Vocabulary placeholder_vocab(std::size_t d_hat) {
  text::Vocabulary v;
  v.terms.reserve(d_hat);
  for (std::size_t i = 0; i < d_hat; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "dim%05zu", i);
    v.terms.emplace_back(buf);
    v.index.emplace(v.terms.back(), i);
  }
  return v;
}

void save_trace_csv(const std::string& path, const ModelWeights& model) {
  std::ofstream out(path);
  out << "iteration,total,loss,reg_match,reg_l21\n";
  char buf[32];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < model.trace.size(); ++i) {
    const ObjectiveTerms& t = model.trace_terms[i];
    out << i << ',' << fmt(model.trace[i]) << ',' << fmt(t.loss) << ','
        << fmt(t.reg_match) << ',' << fmt(t.reg_l21) << '\n';
  }
  if (!out) throw ParseError("cannot write " + path);
}

struct SolverFlags {
  SolverConfig config;
  std::string regularizer = "l21";

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda1", config.lambda1, "Match-regularizer weight");
    cmd->add_option("--lambda2", config.lambda2,
                    "Noise-suppression regularizer weight");
    cmd->add_option("--sigma", config.sigma, "Column-norm smoothing");
    cmd->add_option("--max-outer", config.max_outer,
                    "Outer alternation iteration cap");
    cmd->add_option("--max-inner", config.max_inner,
                    "Inner reweighting iteration cap");
    cmd->add_option("--rel-tol", config.rel_tol,
                    "Relative objective-change stop tolerance");
    cmd->add_option("--epsilon-ridge", config.epsilon_ridge,
                    "Diagonal repair for near-singular Gram matrices");
    cmd->add_option("--seed", config.seed, "RNG seed");
    cmd->add_option("--m-override", config.m_override,
                    "Override the intermediate dimension m (default: number "
                    "of seen classes)");
    cmd->add_option("--regularizer", regularizer, "l21 or frobenius")
        ->check(CLI::IsMember({"l21", "frobenius"}));
  }

  SolverConfig resolved() const {
    SolverConfig c = config;
    c.regularizer = regularizer_from_string(regularizer);
    return c;
  }

  json to_json() const {
    const SolverConfig c = resolved();
    return json{{"lambda1", c.lambda1},
                {"lambda2", c.lambda2},
                {"sigma", c.sigma},
                {"max_outer", c.max_outer},
                {"max_inner", c.max_inner},
                {"rel_tol", c.rel_tol},
                {"seed", c.seed},
                {"regularizer", regularizer},
                {"epsilon_ridge", c.epsilon_ridge},
                {"m_override", c.m_override}};
  }
};

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f ± %.4f", mean, std);
  return std::string(buf);
}

// --- subcommand bodies ----------------------------------------------------

int cmd_synth(const synth::SynthSpec& spec, const std::string& out_dir) {
  synth::SynthData data = synth::generate(spec);
  const std::string manifest = io::save_synth_dataset(out_dir, spec, data);
  write_resolved_config(out_dir, "synth",
                        json{{"seed", spec.seed},
                             {"num_seen", spec.num_seen},
                             {"num_unseen", spec.num_unseen},
                             {"feat_dim", spec.feat_dim},
                             {"doc_dim", spec.doc_dim},
                             {"informative_dims", spec.informative_dims},
                             {"samples_per_class", spec.samples_per_class},
                             {"doc_flip_prob", spec.doc_flip_prob},
                             {"feature_noise_std", spec.feature_noise_std},
                             {"out", out_dir}});
  std::cout << "wrote " << manifest << "\n";
  return 0;
}

int cmd_vocab(const std::string& docs_dir, const std::string& stopwords,
              const std::string& classes_file, const std::string& out) {
  std::vector<std::string> only;
  if (!classes_file.empty()) only = io::load_class_list(classes_file);
  const auto docs = read_docs_dir(docs_dir, only);
  const text::Vocabulary vocab =
      text::build_vocabulary(docs, stopwords_or_default(stopwords));
  io::save_vocabulary(out, vocab);
  write_resolved_config(fs::path(out).parent_path().string(), "vocab",
                        json{{"docs", docs_dir},
                             {"stopwords", stopwords},
                             {"classes", classes_file},
                             {"out", out},
                             {"terms", vocab.size()}});
  std::cout << "vocabulary: " << vocab.size() << " terms -> " << out << "\n";
  return 0;
}

int cmd_featurize(const std::string& docs_dir, const std::string& vocab_path,
                  const std::string& weighting, const std::string& stopwords,
                  const std::string& classes_file, const std::string& out) {
  std::vector<std::string> only;
  if (!classes_file.empty()) only = io::load_class_list(classes_file);
  const auto docs = read_docs_dir(docs_dir, only);
  const text::Vocabulary vocab = io::load_vocabulary(vocab_path);
  const text::DocMatrix dm =
      text::featurize(docs, vocab, text::weighting_from_string(weighting),
                      stopwords_or_default(stopwords));
  io::save_docmatrix(out, dm);
  write_resolved_config(fs::path(out).parent_path().string(), "featurize",
                        json{{"docs", docs_dir},
                             {"vocab", vocab_path},
                             {"weighting", weighting},
                             {"stopwords", stopwords},
                             {"classes", classes_file},
                             {"out", out}});
  std::cout << "doc matrix: " << dm.vocab_size() << "x" << dm.num_classes()
            << " -> " << out << "\n";
  return 0;
}

int cmd_train(const std::string& manifest_path, const std::string& method,
              const SolverFlags& solver, double gamma, double lambda,
              const std::string& out_dir) {
  const io::Dataset ds =
      io::load_dataset(io::load_manifest(manifest_path));
  fs::create_directories(out_dir);
  const std::string vocab_hash = ds.vocab ? ds.vocab->hash() : "";

  json config{{"manifest", manifest_path},
              {"method", method},
              {"out", out_dir}};

  if (method == "nszsl") {
    const SolverConfig sc = solver.resolved();
    ModelWeights model = fit(ds.train, sc);
    io::save_model((fs::path(out_dir) / "model.json").string(), model,
                   vocab_hash);
    save_trace_csv((fs::path(out_dir) / "trace.csv").string(), model);
    config["solver"] = solver.to_json();
    write_resolved_config(out_dir, "train", config);
    std::cout << "trained nszsl model (" << (model.converged ? "converged"
                                                             : "max_outer hit")
              << ", " << model.trace.size() << " trace points) -> " << out_dir
              << "/model.json\n";
  } else {
    eszsl::EszslModel model = eszsl::eszsl_fit(ds.train, {gamma, lambda});
    io::save_eszsl_model((fs::path(out_dir) / "model.json").string(), model,
                         vocab_hash);
    config["gamma"] = gamma;
    config["lambda"] = lambda;
    write_resolved_config(out_dir, "train", config);
    std::cout << "trained eszsl model -> " << out_dir << "/model.json\n";
  }
  return 0;
}

int cmd_cv(const std::string& manifest_path, const std::string& method,
           const SolverFlags& solver, cv::CvPlan plan,
           const std::string& metric, int grid_min, int grid_max,
           const std::string& out_dir) {
  if (grid_min > grid_max) {
    throw Error("InvalidArgument", "--grid-min must be <= --grid-max");
  }
  plan.grid_exponents.clear();
  for (int b = grid_min; b <= grid_max; ++b) plan.grid_exponents.push_back(b);
  plan.metric = cv::metric_from_string(metric);

  const io::Dataset ds =
      io::load_dataset(io::load_manifest(manifest_path));
  const std::string vocab_hash = ds.vocab ? ds.vocab->hash() : "";

  const cv::Method m = cv::method_from_string(method);
  const cv::CvResult result =
      cv::grid_search(ds.train, plan, m, solver.resolved(), &ds.test);

  fs::create_directories(out_dir);
  io::save_cv_result((fs::path(out_dir) / "cvresult.json").string(),
                     (fs::path(out_dir) / "cv_cells.csv").string(), result);
  if (m == cv::Method::nszsl) {
    io::save_model((fs::path(out_dir) / "best_model.json").string(),
                   std::get<ModelWeights>(result.final_model), vocab_hash);
  } else {
    io::save_eszsl_model((fs::path(out_dir) / "best_model.json").string(),
                         std::get<eszsl::EszslModel>(result.final_model),
                         vocab_hash);
  }
  write_resolved_config(out_dir, "cv",
                        json{{"manifest", manifest_path},
                             {"method", method},
                             {"solver", solver.to_json()},
                             {"num_folds", plan.num_folds},
                             {"holdout_fraction", plan.holdout_fraction},
                             {"grid_min", grid_min},
                             {"grid_max", grid_max},
                             {"num_trials", plan.num_trials},
                             {"metric", metric},
                             {"seed", plan.seed},
                             {"jobs", plan.jobs},
                             {"out", out_dir}});

  std::cout << "best cell: (" << result.best_value1 << ", "
            << result.best_value2
            << "), validation accuracy = " << result.best_mean_accuracy
            << "\n";
  if (!result.trial_metrics.empty()) {
    std::cout << metric << ": "
              << format_mean_std(result.test_mean, result.test_std) << " over "
              << result.trial_metrics.size() << " trials\n";
  }
  return 0;
}

int cmd_eval(const std::vector<std::string>& model_paths,
             const std::string& manifest_path, const std::string& metric,
             const std::string& out_dir) {
  const io::Dataset ds =
      io::load_dataset(io::load_manifest(manifest_path));
  const cv::Metric m = cv::metric_from_string(metric);

  std::vector<double> values;
  for (const auto& path : model_paths) {
    const std::string kind = io::peek_model_kind(path);
    if (kind == "nszsl") {
      values.push_back(cv::evaluate(io::load_model(path), ds.test.x,
                                    ds.test.labels, ds.test.z, m));
    } else {
      values.push_back(cv::evaluate(io::load_eszsl_model(path), ds.test.x,
                                    ds.test.labels, ds.test.z, m));
    }
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double std_dev = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;

  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "eval.json");
  out << json{{"format", "nszsl-eval"},
              {"version", 1},
              {"metric", metric},
              {"mean", mean},
              {"std", std_dev},
              {"trials", values}}
             .dump(2)
      << '\n';
  write_resolved_config(out_dir, "eval",
                        json{{"models", model_paths},
                             {"manifest", manifest_path},
                             {"metric", metric},
                             {"out", out_dir}});
  std::cout << metric << ": " << format_mean_std(mean, std_dev) << "\n";
  return 0;
}

int cmd_analyze(const std::string& model_path,
                const std::string& manifest_path,
                const std::string& vocab_path, std::size_t top_k,
                const std::string& out_dir) {
  if (io::peek_model_kind(model_path) != "nszsl") {
    throw Error("InvalidArgument",
                "analyze requires an nszsl model (importance weights are "
                "column norms of Wz)");
  }
  const ModelWeights model = io::load_model(model_path);
  const io::Dataset ds =
      io::load_dataset(io::load_manifest(manifest_path));

  text::Vocabulary vocab;
  if (!vocab_path.empty()) {
    vocab = io::load_vocabulary(vocab_path);
  } else if (ds.vocab) {
    vocab = *ds.vocab;
  } else {
    vocab = placeholder_vocab(model.wz.cols());
  }
  if (vocab.size() != model.wz.cols()) {
    throw DimensionMismatch("vocabulary size does not match the model's Wz");
  }

  const ImportanceWeights weights = importance_weights(model);
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "importance_weights.csv");
    out << "index,word,weight\n";
    char buf[32];
    for (std::size_t i = 0; i < weights.values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", weights.values[i]);
      out << i << ',' << vocab.terms[i] << ',' << buf << '\n';
    }
    if (!out) throw ParseError("cannot write importance_weights.csv");
  }

  bool wrote_top_words = false;
  if (ds.train.z.weighting == text::Weighting::binary) {
    const auto top = top_words_per_class(model, vocab, ds.train.z, top_k);
    std::ofstream out(fs::path(out_dir) / "top_words.tsv");
    for (std::size_t c = 0; c < top.size(); ++c) {
      out << ds.train.z.class_ids[c];
      for (const auto& word : top[c]) out << '\t' << word;
      out << '\n';
    }
    if (!out) throw ParseError("cannot write top_words.tsv");
    wrote_top_words = true;
  }

  write_resolved_config(out_dir, "analyze",
                        json{{"model", model_path},
                             {"manifest", manifest_path},
                             {"vocab", vocab_path},
                             {"top_k", top_k},
                             {"out", out_dir},
                             {"top_words_written", wrote_top_words}});
  std::cout << "analysis -> " << out_dir << " (importance_weights.csv"
            << (wrote_top_words ? ", top_words.tsv" : "") << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot learning from noisy textual class descriptions"};
  app.require_subcommand(1);

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a planted-signal dataset");
  synth::SynthSpec spec;
  std::string synth_out;
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--seed", spec.seed, "RNG seed");
  synth_cmd->add_option("--num-seen", spec.num_seen, "Seen classes");
  synth_cmd->add_option("--num-unseen", spec.num_unseen, "Unseen classes");
  synth_cmd->add_option("--feat-dim", spec.feat_dim, "Feature dimensionality");
  synth_cmd->add_option("--doc-dim", spec.doc_dim,
                        "Description dimensionality");
  synth_cmd->add_option("--informative-dims", spec.informative_dims,
                        "Signal-carrying description dimensions");
  synth_cmd->add_option("--samples-per-class", spec.samples_per_class,
                        "Examples per class");
  synth_cmd->add_option("--doc-flip-prob", spec.doc_flip_prob,
                        "Noise-bit probability");
  synth_cmd->add_option("--feature-noise-std", spec.feature_noise_std,
                        "Feature noise standard deviation");

  // vocab
  auto* vocab_cmd =
      app.add_subcommand("vocab", "Build a vocabulary from documents");
  std::string vocab_docs, vocab_stop, vocab_classes, vocab_out;
  vocab_cmd->add_option("--docs", vocab_docs, "Directory of per-class files")
      ->required();
  vocab_cmd->add_option("--out", vocab_out, "Output vocabulary JSON")
      ->required();
  vocab_cmd->add_option("--stopwords", vocab_stop, "Stop-word file override");
  vocab_cmd->add_option("--classes", vocab_classes,
                        "Class list restricting which documents are used");

  // featurize
  auto* feat_cmd =
      app.add_subcommand("featurize", "Turn documents into a DocMatrix");
  std::string feat_docs, feat_vocab, feat_stop, feat_classes, feat_out;
  std::string feat_weighting = "binary";
  feat_cmd->add_option("--docs", feat_docs, "Directory of per-class files")
      ->required();
  feat_cmd->add_option("--vocab", feat_vocab, "Vocabulary JSON")->required();
  feat_cmd->add_option("--out", feat_out, "Output DocMatrix JSON")->required();
  feat_cmd->add_option("--weighting", feat_weighting, "binary or tfidf")
      ->check(CLI::IsMember({"binary", "tfidf"}));
  feat_cmd->add_option("--stopwords", feat_stop, "Stop-word file override");
  feat_cmd->add_option("--classes", feat_classes, "Class list restriction");

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit a model on a manifest");
  std::string train_manifest, train_out;
  std::string train_method = "nszsl";
  SolverFlags train_solver;
  double train_gamma = 1.0, train_lambda = 1.0;
  train_cmd->add_option("--manifest", train_manifest, "Dataset manifest")
      ->required();
  train_cmd->add_option("--out", train_out, "Output directory")->required();
  train_cmd->add_option("--method", train_method, "nszsl or eszsl")
      ->check(CLI::IsMember({"nszsl", "eszsl"}));
  train_solver.attach(train_cmd);
  train_cmd->add_option("--gamma", train_gamma, "ESZSL feature regularizer");
  train_cmd->add_option("--lambda", train_lambda,
                        "ESZSL description regularizer");

  // cv
  auto* cv_cmd =
      app.add_subcommand("cv", "Cross-validated hyperparameter grid search");
  std::string cv_manifest, cv_out;
  std::string cv_method = "nszsl";
  std::string cv_metric = "top1";
  SolverFlags cv_solver;
  cv::CvPlan plan;
  int grid_min = -2, grid_max = 6;
  cv_cmd->add_option("--manifest", cv_manifest, "Dataset manifest")
      ->required();
  cv_cmd->add_option("--out", cv_out, "Output directory")->required();
  cv_cmd->add_option("--method", cv_method, "nszsl or eszsl")
      ->check(CLI::IsMember({"nszsl", "eszsl"}));
  cv_solver.attach(cv_cmd);
  cv_cmd->add_option("--folds", plan.num_folds, "Cross-validation folds");
  cv_cmd->add_option("--holdout", plan.holdout_fraction,
                     "Held-out class fraction per fold");
  cv_cmd->add_option("--grid-min", grid_min, "Smallest grid exponent");
  cv_cmd->add_option("--grid-max", grid_max, "Largest grid exponent");
  cv_cmd->add_option("--trials", plan.num_trials, "Final refit trials");
  cv_cmd->add_option("--metric", cv_metric,
                     "top1, top5 or mean_per_class_accuracy")
      ->check(CLI::IsMember({"top1", "top5", "mean_per_class_accuracy"}));
  cv_cmd->add_option("--cv-seed", plan.seed,
                     "Seed for folds and trial refits");
  cv_cmd->add_option("--jobs", plan.jobs, "Worker threads over grid cells");

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate saved models on a manifest");
  std::vector<std::string> eval_models;
  std::string eval_manifest, eval_out;
  std::string eval_metric = "top1";
  eval_cmd->add_option("--model", eval_models,
                       "Model JSON (repeat for multiple trials)")
      ->required();
  eval_cmd->add_option("--manifest", eval_manifest, "Dataset manifest")
      ->required();
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();
  eval_cmd->add_option("--metric", eval_metric,
                       "top1, top5 or mean_per_class_accuracy")
      ->check(CLI::IsMember({"top1", "top5", "mean_per_class_accuracy"}));

  // analyze
  auto* an_cmd = app.add_subcommand(
      "analyze", "Export importance weights and top words per class");
  std::string an_model, an_manifest, an_vocab, an_out;
  std::size_t an_topk = 15;
  an_cmd->add_option("--model", an_model, "nszsl model JSON")->required();
  an_cmd->add_option("--manifest", an_manifest, "Dataset manifest")
      ->required();
  an_cmd->add_option("--out", an_out, "Output directory")->required();
  an_cmd->add_option("--vocab", an_vocab, "Vocabulary JSON override");
  an_cmd->add_option("--top-k", an_topk, "Words listed per class");

  try {
    app.parse(argc, argv);

    if (synth_cmd->parsed()) return cmd_synth(spec, synth_out);
    if (vocab_cmd->parsed()) {
      return cmd_vocab(vocab_docs, vocab_stop, vocab_classes, vocab_out);
    }
    if (feat_cmd->parsed()) {
      return cmd_featurize(feat_docs, feat_vocab, feat_weighting, feat_stop,
                           feat_classes, feat_out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_manifest, train_method, train_solver,
                       train_gamma, train_lambda, train_out);
    }
    if (cv_cmd->parsed()) {
      return cmd_cv(cv_manifest, cv_method, cv_solver, plan, cv_metric,
                    grid_min, grid_max, cv_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_models, eval_manifest, eval_metric, eval_out);
    }
    if (an_cmd->parsed()) {
      return cmd_analyze(an_model, an_manifest, an_vocab, an_topk, an_out);
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: UsageError: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
