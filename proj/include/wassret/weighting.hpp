#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "wassret/corpus.hpp"

namespace wassret {

// L1-normalized empirical measure over a document's distinct words.
// Weights are strictly positive and sum to 1 within 1e-12; words appear in
// first-occurrence order.
struct DiscreteDistribution {
  std::vector<std::string> words;
  std::vector<double> weights;
  std::string source_doc;
};

using IdfMap = std::unordered_map<std::string, double>;

// weight(w) = count(w) / total tokens. Throws DataError on an empty document.
DiscreteDistribution tf_weights(const Document& doc);

// idf(w) = ln((N+1) / (df(w)+1)) for every word of the corpus.
IdfMap smoothed_idf(const Corpus& corpus);

// weight(w) proportional to count(w) * idf(w), L1-normalized. Words with
// zero idf are dropped from the support; throws DataError if nothing is left
// or if a word is missing from the idf table.
DiscreteDistribution idf_weights(const Document& doc, const IdfMap& idf);

DiscreteDistribution make_weights(const Document& doc, const IdfMap& idf,
                                  bool use_idf);

}  // namespace wassret
