#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "nszsl/errors.hpp"
#include "nszsl/textpipe.hpp"

using namespace nszsl;
using namespace nszsl::text;

namespace {

std::vector<std::pair<std::string, std::string>> docs2(
    const std::string& id1, const std::string& body1, const std::string& id2,
    const std::string& body2) {
  return {{id1, body1}, {id2, body2}};
}

}  // namespace

TEST_SUITE("textpipe") {

TEST_CASE("tokenize: stop words, punctuation, duplicates preserved") {
  auto tokens = tokenize("The otter swims, swims fast.");
  CHECK(tokens == std::vector<std::string>{"otter", "swims", "swims", "fast"});
}

TEST_CASE("tokenize: empty input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \t\n ").empty());
}

TEST_CASE("tokenize: digits split tokens, short pieces dropped") {
  auto tokens = tokenize("A 2nd-stage RUMINANT stomach");
  CHECK(tokens ==
        std::vector<std::string>{"nd", "stage", "ruminant", "stomach"});
}

TEST_CASE("tokenize: non-ascii bytes act as separators") {
  auto tokens = tokenize("caf\xc3\xa9 naive");
  CHECK(tokens == std::vector<std::string>{"caf", "naive"});
}

TEST_CASE("stop-word entries are tokenizer-normalized") {
  StopWordSet set = StopWordSet::from_words({"aren't"});
  CHECK(set.contains("aren"));
  CHECK_FALSE(set.contains("arent"));
}

TEST_CASE("stop-word file with comments") {
  const auto path = std::filesystem::temp_directory_path() / "stop_test.txt";
  {
    std::ofstream out(path);
    out << "# comment line\nfoo\nbar # trailing\n\n";
  }
  StopWordSet set = StopWordSet::from_file(path.string());
  CHECK(set.contains("foo"));
  CHECK(set.contains("bar"));
  CHECK_FALSE(set.contains("comment"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(StopWordSet::from_file("/nonexistent/stopwords"),
                  ParseError);
}

TEST_CASE("build_vocabulary: sorted distinct terms") {
  Vocabulary v = build_vocabulary(docs2("a", "red fox", "b", "red bird"));
  CHECK(v.terms == std::vector<std::string>{"bird", "fox", "red"});
  CHECK(v.size() == 3);
  CHECK(v.lookup("fox") == 1);
  CHECK_FALSE(v.lookup("wolf").has_value());
  CHECK(v.source == std::vector<std::string>{"a", "b"});
}

TEST_CASE("build_vocabulary: all stop words -> EmptyVocabulary") {
  CHECK_THROWS_AS(build_vocabulary({{"a", "the the the"}}), EmptyVocabulary);
  CHECK_THROWS_AS(build_vocabulary({}), EmptyVocabulary);
}

TEST_CASE("vocabulary hash depends on term order and content") {
  Vocabulary v1 = build_vocabulary({{"a", "red fox"}});
  Vocabulary v2 = build_vocabulary({{"a", "red fox jumps"}});
  CHECK(v1.hash() != v2.hash());
  CHECK(v1.hash() == build_vocabulary({{"z", "fox red"}}).hash());
}

TEST_CASE("featurize: binary column") {
  Vocabulary v = build_vocabulary(docs2("a", "bird fox red", "b", "red"));
  DocMatrix dm = featurize({{"c1", "red red fox"}}, v, Weighting::binary);
  CHECK(dm.entries(0, 0) == 0.0);  // bird
  CHECK(dm.entries(1, 0) == 1.0);  // fox
  CHECK(dm.entries(2, 0) == 1.0);  // red
}

TEST_CASE("featurize: binary is invariant to word repetition") {
  Vocabulary v = build_vocabulary({{"a", "wolf bear lynx"}});
  DocMatrix once = featurize({{"c", "wolf bear"}}, v, Weighting::binary);
  DocMatrix many =
      featurize({{"c", "wolf wolf wolf bear bear"}}, v, Weighting::binary);
  CHECK(once.entries == many.entries);
}

TEST_CASE("featurize: tfidf with a single class is all idf-zero") {
  Vocabulary v = build_vocabulary({{"a", "red fox"}});
  CHECK_THROWS_AS(featurize({{"c1", "red red fox"}}, v, Weighting::tfidf),
                  AllZeroColumn);
}

TEST_CASE("featurize: tfidf hand evaluation") {
  Vocabulary v = build_vocabulary(docs2("a", "red fox", "b", "red bird"));
  DocMatrix dm = featurize(docs2("c1", "red fox", "c2", "red bird"), v,
                           Weighting::tfidf);
  // "red" has df=2 so idf=0; each column normalizes to a one-hot on its
  // distinctive word.
  CHECK(dm.entries(0, 0) == doctest::Approx(0.0));  // bird in c1
  CHECK(dm.entries(1, 0) == doctest::Approx(1.0));  // fox in c1
  CHECK(dm.entries(2, 0) == doctest::Approx(0.0));  // red in c1
  CHECK(dm.entries(0, 1) == doctest::Approx(1.0));  // bird in c2
}

TEST_CASE("featurize: out-of-vocabulary tokens are dropped silently") {
  Vocabulary v = build_vocabulary({{"a", "red fox"}});
  DocMatrix dm =
      featurize({{"u", "red zebra quagga"}}, v, Weighting::binary);
  CHECK(dm.entries(0, 0) == 0.0);  // fox
  CHECK(dm.entries(1, 0) == 1.0);  // red
}

TEST_CASE("featurize: document with no in-vocabulary token") {
  Vocabulary v = build_vocabulary({{"a", "red fox"}});
  CHECK_THROWS_AS(featurize({{"u", "zebra quagga"}}, v, Weighting::binary),
                  AllZeroColumn);
}

TEST_CASE("featurize: permuting documents permutes columns") {
  Vocabulary v =
      build_vocabulary(docs2("a", "red fox wolf", "b", "red bird"));
  auto docs = docs2("c1", "red fox", "c2", "bird wolf");
  DocMatrix forward = featurize(docs, v, Weighting::binary);
  std::reverse(docs.begin(), docs.end());
  DocMatrix backward = featurize(docs, v, Weighting::binary);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(forward.entries(i, 0) == backward.entries(i, 1));
    CHECK(forward.entries(i, 1) == backward.entries(i, 0));
  }
  CHECK(backward.class_ids == std::vector<std::string>{"c2", "c1"});
}

TEST_CASE("every vocabulary term appears in at least one seen document") {
  std::mt19937_64 rng(9);
  const std::vector<std::string> pool{"otter", "river",  "fish",  "swim",
                                      "dive",  "burrow", "night", "fur"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<std::pair<std::string, std::string>> docs;
  for (int c = 0; c < 4; ++c) {
    std::string body;
    for (int w = 0; w < 6; ++w) body += pool[pick(rng)] + " ";
    docs.emplace_back("c" + std::to_string(c), body);
  }
  Vocabulary v = build_vocabulary(docs);
  for (const auto& term : v.terms) {
    bool found = false;
    for (const auto& [id, body] : docs) {
      if (body.find(term) != std::string::npos) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("select_classes reorders columns and rejects unknown ids") {
  Vocabulary v = build_vocabulary(docs2("a", "red fox", "b", "red bird"));
  DocMatrix dm = featurize(docs2("c1", "red fox", "c2", "bird"), v,
                           Weighting::binary);
  DocMatrix sel = dm.select_classes({"c2", "c1"});
  CHECK(sel.class_ids == std::vector<std::string>{"c2", "c1"});
  CHECK(sel.entries(0, 0) == dm.entries(0, 1));
  CHECK_THROWS_AS(dm.select_classes({"nope"}), UnknownClass);
}

}  // TEST_SUITE
