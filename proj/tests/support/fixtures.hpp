#pragma once

#include <random>
#include <string>
#include <vector>

#include "wassret/embeddings.hpp"
#include "wassret/weighting.hpp"

namespace fixtures {

inline wassret::EmbeddingTable make_table(
    const std::string& language, std::size_t dim,
    const std::vector<std::pair<std::string, std::vector<double>>>& entries) {
  wassret::EmbeddingTable table;
  table.language = language;
  table.dim = dim;
  for (const auto& [word, vec] : entries) table.insert(word, vec);
  return table;
}

inline wassret::DiscreteDistribution make_dist(
    const std::vector<std::string>& words, const std::vector<double>& weights,
    const std::string& source = "doc") {
  wassret::DiscreteDistribution d;
  d.words = words;
  d.weights = weights;
  d.source_doc = source;
  return d;
}

// Strictly positive weights on the simplex, bounded away from zero.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n,
                                          double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = u(rng));
  for (double& x : w) x /= total;
  return w;
}

// The worked 3-word example: each source word is strictly nearest its own
// translation, translations offset by exactly 0.05 (3-4-5 scaled), and the
// three concepts sit on a triangle of side ~0.5 so that the whole cost
// matrix stays within one regularization scale.
struct ThreeWordPair {
  wassret::EmbeddingTable src_table;
  wassret::EmbeddingTable tgt_table;
  wassret::DiscreteDistribution src_dist;
  wassret::DiscreteDistribution tgt_dist;
};

inline ThreeWordPair three_word_fixture() {
  ThreeWordPair f;
  f.src_table = make_table("en", 2,
                           {{"cat", {0.0, 0.0}},
                            {"sits", {0.5, 0.0}},
                            {"mat", {0.25, 0.433}}});
  f.tgt_table = make_table("fr", 2,
                           {{"chat", {0.03, 0.04}},
                            {"assis", {0.53, 0.04}},
                            {"tapis", {0.28, 0.473}}});
  const double third = 1.0 / 3.0;
  f.src_dist = make_dist({"cat", "sits", "mat"}, {third, third, third}, "en0");
  f.tgt_dist =
      make_dist({"chat", "assis", "tapis"}, {third, third, third}, "fr0");
  return f;
}

// Variant with distinct matched distances 0.05, 0.10, 0.15 whose optimal
// one-to-one cost is exactly their mean, 0.10.
inline ThreeWordPair three_word_fixture_distinct() {
  ThreeWordPair f;
  f.src_table = make_table("en", 2,
                           {{"cat", {0.0, 0.0}},
                            {"sits", {0.5, 0.0}},
                            {"mat", {0.25, 0.433}}});
  f.tgt_table = make_table("fr", 2,
                           {{"chat", {0.03, 0.04}},
                            {"assis", {0.56, 0.08}},
                            {"tapis", {0.34, 0.553}}});
  const double third = 1.0 / 3.0;
  f.src_dist = make_dist({"cat", "sits", "mat"}, {third, third, third}, "en0");
  f.tgt_dist =
      make_dist({"chat", "assis", "tapis"}, {third, third, third}, "fr0");
  return f;
}

}  // namespace fixtures
