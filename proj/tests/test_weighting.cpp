#include "wassret/weighting.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "wassret/error.hpp"

using namespace wassret;

namespace {

Document make_doc(const std::vector<std::string>& tokens,
                  const std::string& id = "doc") {
  Document d;
  d.id = id;
  d.language = "en";
  d.tokens = tokens;
  for (const auto& t : tokens) ++d.counts[t];
  return d;
}

Corpus corpus_with_df(std::size_t n_docs,
                      const std::unordered_map<std::string, int>& df) {
  Corpus c;
  c.documents.resize(n_docs);
  c.doc_freq = df;
  return c;
}

void check_valid(const DiscreteDistribution& d) {
  double sum = 0.0;
  for (double w : d.weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(d.words.size() == d.weights.size());
  for (std::size_t i = 0; i < d.words.size(); ++i) {
    for (std::size_t j = i + 1; j < d.words.size(); ++j) {
      CHECK(d.words[i] != d.words[j]);
    }
  }
}

}  // namespace

TEST_CASE("tf weights") {
  const auto third = tf_weights(make_doc({"cat", "sits", "mat"}));
  check_valid(third);
  for (double w : third.weights) CHECK(w == doctest::Approx(1.0 / 3.0));

  const auto single =
      tf_weights(make_doc({"echo", "echo", "echo", "echo", "echo", "echo",
                           "echo"}));
  REQUIRE(single.words.size() == 1);
  CHECK(single.weights[0] == 1.0);

  const auto sym = tf_weights(make_doc({"a", "b", "a", "b"}));
  CHECK(sym.weights[0] == doctest::Approx(0.5));
  CHECK(sym.weights[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(tf_weights(make_doc({})), DataError);
}

TEST_CASE("tf weights ignore token order") {
  const auto a = tf_weights(make_doc({"x", "y", "y", "z"}));
  auto b = tf_weights(make_doc({"z", "y", "x", "y"}));
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    for (std::size_t j = 0; j < b.words.size(); ++j) {
      if (a.words[i] == b.words[j]) {
        CHECK(a.weights[i] == doctest::Approx(b.weights[j]));
      }
    }
  }
}

TEST_CASE("smoothed idf formula") {
  const Corpus ubiquitous = corpus_with_df(10, {{"w", 10}});
  CHECK(smoothed_idf(ubiquitous).at("w") == doctest::Approx(0.0).scale(1));

  const Corpus mid = corpus_with_df(10, {{"w", 4}});
  CHECK(smoothed_idf(mid).at("w") ==
        doctest::Approx(std::log(11.0 / 5.0)).epsilon(1e-12));

  const Corpus single = corpus_with_df(1, {{"w", 1}});
  CHECK(smoothed_idf(single).at("w") == doctest::Approx(0.0).scale(1));
}

TEST_CASE("idf weights") {
  const double ln2 = std::log(2.0);

  SUBCASE("equal idf reduces to tf") {
    const auto d = idf_weights(make_doc({"a", "b"}), {{"a", ln2}, {"b", ln2}});
    check_valid(d);
    CHECK(d.weights[0] == doctest::Approx(0.5));
    CHECK(d.weights[1] == doctest::Approx(0.5));
  }

  SUBCASE("zero-idf words are dropped from the support") {
    const auto d = idf_weights(make_doc({"a", "b"}), {{"a", 0.0}, {"b", ln2}});
    REQUIRE(d.words == std::vector<std::string>{"b"});
    CHECK(d.weights[0] == 1.0);
  }

  SUBCASE("count and idf multiply before normalization") {
    const auto d = idf_weights(make_doc({"a", "a", "b"}),
                               {{"a", 1.0}, {"b", 2.0}});
    check_valid(d);
    CHECK(d.weights[0] == doctest::Approx(0.5));  // 2*1.0
    CHECK(d.weights[1] == doctest::Approx(0.5));  // 1*2.0
  }

  SUBCASE("all-zero idf is an error") {
    CHECK_THROWS_AS(idf_weights(make_doc({"a", "b"}), {{"a", 0.0}, {"b", 0.0}}),
                    DataError);
  }

  SUBCASE("missing idf entry is an error") {
    CHECK_THROWS_AS(idf_weights(make_doc({"a"}), IdfMap{}), DataError);
  }
}

TEST_CASE("log base does not change normalized idf weights") {
  // scaling the whole idf table by any constant cancels in L1 normalization;
  // log2 is ln scaled by 1/ln(2)
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> idf_value(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> tokens;
    IdfMap nat, base2;
    for (int w = 0; w < 6; ++w) {
      const std::string word(1, static_cast<char>('a' + w));
      const int c = count(rng);
      for (int k = 0; k < c; ++k) tokens.push_back(word);
      const double v = idf_value(rng);
      nat[word] = v;
      base2[word] = v / std::log(2.0);
    }
    const Document doc = make_doc(tokens);
    const auto a = idf_weights(doc, nat);
    const auto b = idf_weights(doc, base2);
    REQUIRE(a.words == b.words);
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
      CHECK(a.weights[i] == doctest::Approx(b.weights[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("distribution invariants hold on random documents") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> word(0, 11);
  std::uniform_int_distribution<int> len(6, 60);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> tokens;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      tokens.push_back("w" + std::to_string(word(rng)));
    }
    const Document doc = make_doc(tokens);
    check_valid(tf_weights(doc));

    IdfMap idf;
    std::uniform_real_distribution<double> v(0.0, 2.0);
    for (const auto& [w, c] : doc.counts) idf[w] = v(rng);
    bool all_zero = true;
    for (const auto& [w, x] : idf) all_zero = all_zero && x == 0.0;
    if (!all_zero) check_valid(idf_weights(doc, idf));
  }
}
