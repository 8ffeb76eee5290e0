#include "wassret/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "wassret/error.hpp"

using namespace wassret;

namespace {

RawDocument raw(const std::string& id, const std::string& text) {
  return RawDocument{id, text, "en"};
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The cat sits.") ==
        std::vector<std::string>{"The", "cat", "sits"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("le chat,  est") ==
        std::vector<std::string>{"le", "chat", "est"});
  CHECK(tokenize("  \t\n ") == std::vector<std::string>{});
  // interior punctuation survives, edges are stripped
  CHECK(tokenize("«state-of-the-art» ... (ok)") ==
        std::vector<std::string>{"state-of-the-art", "ok"});
}

TEST_CASE("preprocess applies the paper's cleaning rules") {
  const StopwordSet stop = {"the", "on"};

  SUBCASE("short documents are rejected") {
    Rejection rejection;
    auto doc = preprocess(raw("d1", "The cat sits on the mat"), stop,
                          &rejection);
    CHECK_FALSE(doc.has_value());
    CHECK(rejection.id == "d1");
    CHECK(rejection.reason.find("too-short") != std::string::npos);
  }

  SUBCASE("digits and case folding") {
    auto doc = preprocess(raw("d2", "Dog42 DOG dog"), StopwordSet{});
    CHECK_FALSE(doc.has_value());  // two tokens survive, below the minimum
  }

  SUBCASE("truncation to the first 500 surviving tokens") {
    std::ostringstream text;
    for (int i = 0; i < 600; ++i) text << "w" << char('a' + i % 26) << "x ";
    auto doc = preprocess(raw("d3", text.str()), StopwordSet{});
    REQUIRE(doc.has_value());
    CHECK(doc->tokens.size() == 500);
  }

  SUBCASE("surviving document invariants") {
    auto doc = preprocess(
        raw("d4", "The Quick brown fox JUMPS over a lazy dog, twice!"), stop);
    REQUIRE(doc.has_value());
    std::size_t total = 0;
    for (const auto& [word, count] : doc->counts) {
      CHECK(count > 0);
      CHECK(stop.count(word) == 0);
      total += count;
    }
    CHECK(total == doc->tokens.size());
    for (const std::string& tok : doc->tokens) {
      for (char c : tok) CHECK_FALSE(c >= 'A' && c <= 'Z');
    }
  }

  SUBCASE("idempotent on its own output") {
    auto doc = preprocess(
        raw("d5", "Éclair ÉCLAIR naïve Straße mañana œuvre grüß"), stop);
    REQUIRE(doc.has_value());
    auto again = preprocess(raw("d5", join(doc->tokens)), stop);
    REQUIRE(again.has_value());
    CHECK(again->tokens == doc->tokens);
    CHECK(again->counts == doc->counts);
  }
}

TEST_CASE("build_corpus computes document frequencies") {
  const StopwordSet stop;
  std::vector<RawDocument> raws = {
      raw("a", "cat dog bird fish mouse horse"),
      raw("b", "cat cat cat cat cat whale shark trout perch bass"),
      raw("c", "owl raven crow finch lark swift"),
  };
  const CorpusBuild built = build_corpus(raws, stop);
  CHECK(built.corpus.size() == 3);
  CHECK(built.corpus.doc_freq.at("cat") == 2);  // documents, not occurrences
  CHECK(built.corpus.doc_freq.at("owl") == 1);
  CHECK(built.rejected.empty());
  CHECK(built.corpus.find("b") != nullptr);
  CHECK(built.corpus.find("zzz") == nullptr);

  for (const auto& [word, df] : built.corpus.doc_freq) {
    CHECK(df >= 1);
    CHECK(df <= static_cast<int>(built.corpus.size()));
  }
}

TEST_CASE("build_corpus with every document rejected is an error") {
  CHECK_THROWS_AS(build_corpus({raw("a", "tiny"), raw("b", "also tiny")},
                               StopwordSet{}),
                  DataError);
}

TEST_CASE("build_corpus records rejections") {
  std::vector<RawDocument> raws = {
      raw("keep", "one two three four five six seven"),
      raw("drop", "too short"),
  };
  const CorpusBuild built = build_corpus(raws, StopwordSet{});
  CHECK(built.corpus.size() == 1);
  REQUIRE(built.rejected.size() == 1);
  CHECK(built.rejected[0].id == "drop");
}

TEST_CASE("df bounds hold on random corpora") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> word(0, 9);
  std::uniform_int_distribution<int> len(6, 30);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RawDocument> raws;
    for (int d = 0; d < 8; ++d) {
      std::ostringstream text;
      const int n = len(rng);
      for (int k = 0; k < n; ++k) text << "word" << char('a' + word(rng)) << ' ';
      raws.push_back(raw("doc" + std::to_string(d), text.str()));
    }
    const CorpusBuild built = build_corpus(raws, StopwordSet{});
    for (const auto& [w, df] : built.corpus.doc_freq) {
      int appearances = 0;
      for (const Document& doc : built.corpus.documents) {
        appearances += doc.counts.count(w) != 0;
      }
      CHECK(df == appearances);
      CHECK(df <= static_cast<int>(built.corpus.size()));
      CHECK(df >= 1);
    }
  }
}

TEST_CASE("corpus TSV loader") {
  const auto path =
      std::filesystem::temp_directory_path() / "wassret_test_corpus.tsv";

  SUBCASE("text keeps embedded tabs after the first separator") {
    std::ofstream(path) << "d1\thello world\td2-looking text\n"
                        << "d2\tsecond document\n";
    const auto raws = load_raw_corpus(path, "en");
    REQUIRE(raws.size() == 2);
    CHECK(raws[0].id == "d1");
    CHECK(raws[0].text == "hello world\td2-looking text");
    CHECK(raws[1].language == "en");
  }

  SUBCASE("missing tab is fatal and names the line") {
    std::ofstream(path) << "d1\tok text\n" << "no-tab-here\n";
    CHECK_THROWS_WITH_AS(load_raw_corpus(path, "en"),
                         doctest::Contains(":2"), DataError);
  }

  SUBCASE("empty and duplicate ids are fatal") {
    std::ofstream(path) << "\ttext\n";
    CHECK_THROWS_AS(load_raw_corpus(path, "en"), DataError);
    std::ofstream(path) << "d1\ta\nd1\tb\n";
    CHECK_THROWS_AS(load_raw_corpus(path, "en"), DataError);
  }

  std::filesystem::remove(path);
}

TEST_CASE("stopword loading and rejection log") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto stop_path = dir / "wassret_test_stop.txt";
  std::ofstream(stop_path) << "the\non\n\nle\n";
  const StopwordSet stop = load_stopwords(stop_path);
  CHECK(stop.size() == 3);
  CHECK(stop.count("le") == 1);

  const auto log_path = dir / "wassret_test_rejects.tsv";
  write_rejection_log(log_path, {{"d9", "too-short: 2 tokens"}});
  std::ifstream in(log_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "d9\ttoo-short: 2 tokens");

  std::filesystem::remove(stop_path);
  std::filesystem::remove(log_path);
}
