// End-to-end checks of the command-line front end, driven through the
// built binary (path from the NSZSL_CLI_BIN environment variable).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nszsl/dataio.hpp"

namespace fs = std::filesystem;

namespace {

struct CliFixture {
  fs::path dir;
  std::string bin;

  CliFixture() {
    const char* env = std::getenv("NSZSL_CLI_BIN");
    bin = env ? env : "";
    dir = fs::temp_directory_path() /
          ("nszsl_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }

  int run(const std::string& args, std::string* err = nullptr) const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd =
        bin + " " + args + " > " + path("stdout.txt") + " 2> " + err_file;
    const int rc = std::system(cmd.c_str());
    if (err != nullptr) {
      std::ifstream in(err_file);
      std::ostringstream body;
      body << in.rdbuf();
      *err = body.str();
    }
    return WEXITSTATUS(rc);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth -> train -> eval -> analyze pipeline") {
  CliFixture cli;
  REQUIRE_FALSE(cli.bin.empty());

  REQUIRE(cli.run("synth --out " + cli.path("data") +
                  " --seed 7 --num-seen 8 --num-unseen 3 --feat-dim 12"
                  " --doc-dim 30 --informative-dims 10"
                  " --samples-per-class 6") == 0);
  REQUIRE(fs::exists(cli.path("data/manifest.json")));
  REQUIRE(fs::exists(cli.path("data/resolved_config.json")));

  REQUIRE(cli.run("train --manifest " + cli.path("data/manifest.json") +
                  " --out " + cli.path("run") +
                  " --lambda1 0.1 --lambda2 1 --seed 3 --max-outer 15") == 0);
  REQUIRE(fs::exists(cli.path("run/model.json")));
  REQUIRE(fs::exists(cli.path("run/trace.csv")));

  REQUIRE(cli.run("eval --model " + cli.path("run/model.json") +
                  " --manifest " + cli.path("data/manifest.json") +
                  " --out " + cli.path("eval")) == 0);
  const std::string eval_json = slurp(cli.path("eval/eval.json"));
  CHECK(eval_json.find("\"metric\": \"top1\"") != std::string::npos);
  // Accuracy lands in [0, 1]: crude but format-independent check.
  CHECK(eval_json.find("\"mean\"") != std::string::npos);

  REQUIRE(cli.run("analyze --model " + cli.path("run/model.json") +
                  " --manifest " + cli.path("data/manifest.json") +
                  " --out " + cli.path("analysis") + " --top-k 5") == 0);
  const std::string weights = slurp(cli.path("analysis/importance_weights.csv"));
  CHECK(weights.rfind("index,word,weight", 0) == 0);
  CHECK(fs::exists(cli.path("analysis/top_words.tsv")));
}

TEST_CASE("train is idempotent: identical bytes on a rerun") {
  CliFixture cli;
  REQUIRE_FALSE(cli.bin.empty());
  REQUIRE(cli.run("synth --out " + cli.path("data") +
                  " --seed 1 --num-seen 6 --num-unseen 2 --feat-dim 8"
                  " --doc-dim 16 --informative-dims 8"
                  " --samples-per-class 4") == 0);

  const std::string train_args =
      "train --manifest " + cli.path("data/manifest.json") + " --out " +
      cli.path("run") + " --seed 11 --max-outer 8";
  REQUIRE(cli.run(train_args) == 0);
  const std::string first = slurp(cli.path("run/model.json"));
  REQUIRE(cli.run(train_args) == 0);
  CHECK(slurp(cli.path("run/model.json")) == first);
}

TEST_CASE("cv with a 1x1 grid saves the same weights as train") {
  CliFixture cli;
  REQUIRE_FALSE(cli.bin.empty());
  REQUIRE(cli.run("synth --out " + cli.path("data") +
                  " --seed 5 --num-seen 8 --num-unseen 2 --feat-dim 8"
                  " --doc-dim 20 --informative-dims 10"
                  " --samples-per-class 5") == 0);

  REQUIRE(cli.run("cv --manifest " + cli.path("data/manifest.json") +
                  " --out " + cli.path("cv") +
                  " --grid-min 0 --grid-max 0 --folds 2 --holdout 0.25"
                  " --trials 1 --cv-seed 42 --max-outer 8") == 0);
  REQUIRE(cli.run("train --manifest " + cli.path("data/manifest.json") +
                  " --out " + cli.path("tr") +
                  " --lambda1 1 --lambda2 1 --seed 42 --max-outer 8") == 0);

  nszsl::ModelWeights from_cv =
      nszsl::io::load_model(cli.path("cv/best_model.json"));
  nszsl::ModelWeights from_train =
      nszsl::io::load_model(cli.path("tr/model.json"));
  CHECK(from_cv.wx == from_train.wx);
  CHECK(from_cv.wz == from_train.wz);

  CHECK(fs::exists(cli.path("cv/cvresult.json")));
  CHECK(fs::exists(cli.path("cv/cv_cells.csv")));
}

TEST_CASE("vocab and featurize work on a document corpus") {
  CliFixture cli;
  REQUIRE_FALSE(cli.bin.empty());
  fs::create_directories(cli.path("docs"));
  {
    std::ofstream(cli.path("docs/otter.txt"))
        << "The otter swims, swims fast in the river.";
    std::ofstream(cli.path("docs/beaver.txt"))
        << "The beaver builds dams in the river.";
  }
  REQUIRE(cli.run("vocab --docs " + cli.path("docs") + " --out " +
                  cli.path("vocab.json")) == 0);
  REQUIRE(cli.run("featurize --docs " + cli.path("docs") + " --vocab " +
                  cli.path("vocab.json") + " --weighting binary --out " +
                  cli.path("dm.json")) == 0);

  nszsl::text::DocMatrix dm = nszsl::io::load_docmatrix(cli.path("dm.json"));
  CHECK(dm.num_classes() == 2);
  nszsl::text::Vocabulary vocab =
      nszsl::io::load_vocabulary(cli.path("vocab.json"));
  CHECK(vocab.lookup("river").has_value());
  CHECK_FALSE(vocab.lookup("the").has_value());
}

TEST_CASE("errors are single-line machine-parsable on stderr") {
  CliFixture cli;
  REQUIRE_FALSE(cli.bin.empty());
  std::string err;
  CHECK(cli.run("train --manifest " + cli.path("missing.json") + " --out " +
                    cli.path("x"),
                &err) == 1);
  CHECK(err.rfind("error: ParseError:", 0) == 0);

  CHECK(cli.run("eval --help", &err) == 0);

  CHECK(cli.run("train --manifest", &err) == 1);
  CHECK(err.rfind("error: UsageError:", 0) == 0);
}

}  // TEST_SUITE
