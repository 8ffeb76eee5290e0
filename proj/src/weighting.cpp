#include "wassret/weighting.hpp"

#include <cmath>

#include "wassret/error.hpp"

namespace wassret {

DiscreteDistribution tf_weights(const Document& doc) {
  if (doc.tokens.empty()) {
    throw DataError("tf weights of empty document '" + doc.id + "'");
  }
  DiscreteDistribution dist;
  dist.source_doc = doc.id;
  dist.words = doc.support();
  dist.weights.reserve(dist.words.size());
  const double total = static_cast<double>(doc.tokens.size());
  for (const std::string& w : dist.words) {
    dist.weights.push_back(doc.counts.at(w) / total);
  }
  return dist;
}

IdfMap smoothed_idf(const Corpus& corpus) {
  if (corpus.documents.empty()) throw DataError("idf of empty corpus");
  IdfMap idf;
  idf.reserve(corpus.doc_freq.size());
  const double n = static_cast<double>(corpus.size());
  for (const auto& [word, df] : corpus.doc_freq) {
    idf.emplace(word, std::log((n + 1.0) / (df + 1.0)));
  }
  return idf;
}

DiscreteDistribution idf_weights(const Document& doc, const IdfMap& idf) {
  if (doc.tokens.empty()) {
    throw DataError("idf weights of empty document '" + doc.id + "'");
  }
  DiscreteDistribution dist;
  dist.source_doc = doc.id;
  double total = 0.0;
  for (const std::string& w : doc.support()) {
    auto it = idf.find(w);
    if (it == idf.end()) {
      throw DataError("word '" + w + "' missing from idf table (document '" +
                      doc.id + "')");
    }
    const double mass = doc.counts.at(w) * it->second;
    if (mass <= 0.0) continue;  // df == N words carry no idf mass
    dist.words.push_back(w);
    dist.weights.push_back(mass);
    total += mass;
  }
  if (dist.words.empty()) {
    throw DataError("document '" + doc.id +
                    "' has no word with positive idf; distribution undefined");
  }
  for (double& w : dist.weights) w /= total;
  return dist;
}

DiscreteDistribution make_weights(const Document& doc, const IdfMap& idf,
                                  bool use_idf) {
  return use_idf ? idf_weights(doc, idf) : tf_weights(doc);
}

}  // namespace wassret
