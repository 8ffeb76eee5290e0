#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wassret/weighting.hpp"

namespace wassret {

// Word vectors of one language projected into the shared cross-lingual space.
// Immutable once loaded (and, when requested, collapsed); resolvers keep
// pointers into `data`.
struct EmbeddingTable {
  std::string language;
  std::size_t dim = 0;
  std::vector<std::string> words;  // insertion order
  std::vector<double> data;        // size() x dim, row-major
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return words.size(); }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
  const double* find(const std::string& word) const;
  void insert(const std::string& word, const std::vector<double>& vec);
};

enum class OovMode { Off, Levenshtein };
enum class TieBreak { Lexicographic, SeededRandom };

struct OovPolicy {
  OovMode mode = OovMode::Off;
  int threshold = 1;
  bool collapse = false;
  TieBreak tie_break = TieBreak::SeededRandom;
  std::uint64_t seed = 0;
};

// Text format: header `count dim`, then `word v1 ... vD` per line.
// Malformed header, inconsistent dimension and non-numeric components are
// fatal and name the line; duplicated words keep their first occurrence.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const std::string& language);

// Unit-cost edit distance over unicode scalar values.
int levenshtein(std::string_view a, std::string_view b);

// min(levenshtein(a, b), bound + 1), with early exit.
int levenshtein_bounded(const std::u32string& a, const std::u32string& b,
                        int bound);

// For every surface form present in both tables, the smaller table's entry is
// overwritten by the larger table's vector (first table wins a size tie).
// Sizes are unchanged. Throws DataError on dimension mismatch.
void collapse_cross_lingual(EmbeddingTable& a, EmbeddingTable& b);

// Memoizing word -> vector lookup implementing the OOV fallback: an
// out-of-vocabulary word may borrow the embedding of any in-vocabulary word
// within edit distance policy.threshold, the candidate picked by tie_break.
// Seeded-random picks depend only on (word, seed), so results do not change
// with evaluation order or thread count. Safe for concurrent use.
class Resolver {
 public:
  Resolver(const EmbeddingTable& table, const OovPolicy& policy);

  // nullptr means Unresolved; otherwise points at a table row of dim doubles.
  const double* resolve(const std::string& word);

  const EmbeddingTable& table() const { return table_; }
  const OovPolicy& policy() const { return policy_; }

 private:
  const double* lookup_oov(const std::string& word);

  const EmbeddingTable& table_;
  OovPolicy policy_;
  std::mutex mu_;
  std::unordered_map<std::string, const double*> cache_;
  std::vector<std::u32string> decoded_vocab_;  // built on first OOV scan
};

struct EmbeddedDistribution {
  std::vector<double> vectors;  // surviving support size x dim
  DiscreteDistribution dist;    // weights renormalized after drops
  std::vector<std::string> dropped;
};

// Resolves every support word, drops Unresolved ones and renormalizes.
// Throws DataError if the whole support is unresolved.
EmbeddedDistribution embed_distribution(const DiscreteDistribution& dist,
                                        Resolver& resolver);
EmbeddedDistribution embed_distribution(const DiscreteDistribution& dist,
                                        const EmbeddingTable& table,
                                        const OovPolicy& policy);

}  // namespace wassret
