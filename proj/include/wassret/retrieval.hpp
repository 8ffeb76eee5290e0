#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wassret/corpus.hpp"
#include "wassret/embeddings.hpp"
#include "wassret/transport.hpp"
#include "wassret/weighting.hpp"

namespace wassret {

enum class Method { Wass, EntroWass, Nbow };
enum class Weighting { Tf, Idf };

const char* method_name(Method m);
const char* weighting_name(Weighting w);
std::optional<Method> parse_method(const std::string& s);
std::optional<Weighting> parse_weighting(const std::string& s);

struct RankedEntry {
  std::string doc_id;
  double distance;
};

// Ascending by distance, ties broken by doc_id; covers the whole target
// corpus (un-embeddable targets sit at +infinity).
struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;
};

struct GoldenLinks {
  std::unordered_map<std::string, std::string> links;  // query -> target
};

// TSV `query_id<TAB>target_id`; duplicate query ids are fatal.
GoldenLinks load_golden_links(const std::filesystem::path& path);

struct RetrievalConfig {
  Method method = Method::EntroWass;
  Weighting weighting = Weighting::Idf;
  OovPolicy oov;
  SinkhornConfig sinkhorn;
  RankingValue ranking_value = RankingValue::TransportCost;
  unsigned workers = 1;
  std::size_t top_k = 10;  // entries kept per query in reports
};

// Weighted average of the support's embeddings (weights renormalized after
// OOV drops); the nBOW distance is the Euclidean distance between two such
// vectors.
std::vector<double> nbow_embed(const DiscreteDistribution& dist,
                               const EmbeddingTable& table,
                               const OovPolicy& policy);

// Mean over queries of 1/rank of the golden target, rank 1-based.
// Throws DataError when a ranked query has no golden entry or the golden
// target is absent from its list.
double mrr(const std::vector<RankedList>& lists, const GoldenLinks& golden);

// Prepares a target corpus once (weighting, OOV resolution, embeddings;
// nBOW vectors when applicable) and ranks queries against it. Query
// documents use the idf statistics of their own corpus.
class RetrievalEngine {
 public:
  RetrievalEngine(const Corpus& queries, const Corpus& targets,
                  const EmbeddingTable& query_table,
                  const EmbeddingTable& target_table,
                  const RetrievalConfig& config);

  RankedList rank(const Document& query);
  RankedList rank_by_id(const std::string& query_id);

  const RetrievalConfig& config() const { return config_; }
  const Corpus& queries() const { return queries_; }
  const Corpus& targets() const { return targets_; }
  // Support words dropped as unresolvable, targets once + each ranked query.
  std::size_t unresolved_words() const { return unresolved_words_; }
  const std::vector<std::string>& failed_targets() const {
    return failed_targets_;
  }

 private:
  double target_distance(const EmbeddedDistribution& query,
                         const std::vector<double>& query_nbow,
                         std::size_t target_idx);

  const Corpus& queries_;
  const Corpus& targets_;
  const EmbeddingTable& query_table_;
  const EmbeddingTable& target_table_;
  RetrievalConfig config_;
  IdfMap query_idf_;
  IdfMap target_idf_;
  Resolver query_resolver_;
  Resolver target_resolver_;
  std::vector<std::optional<EmbeddedDistribution>> target_embedded_;
  std::vector<std::vector<double>> target_nbow_;
  std::vector<std::string> failed_targets_;
  std::size_t unresolved_words_ = 0;
};

struct QueryRecord {
  std::string query_id;
  std::size_t correct_rank = 0;
  std::vector<RankedEntry> top_k;
};

struct EvaluationReport {
  RetrievalConfig config;
  std::string query_corpus_label;
  std::string target_corpus_label;
  std::size_t num_queries = 0;
  std::size_t num_targets = 0;
  double mrr_value = 0.0;
  std::size_t unresolved_words = 0;
  std::vector<QueryRecord> per_query;
  double wall_seconds = 0.0;  // serialized only on request
};

// Ranks every query, computes MRR against the golden links and collects
// per-query records in corpus order.
EvaluationReport evaluate(const Corpus& queries, const Corpus& targets,
                          const GoldenLinks& golden,
                          const EmbeddingTable& query_table,
                          const EmbeddingTable& target_table,
                          const RetrievalConfig& config,
                          const std::string& query_label = "queries",
                          const std::string& target_label = "targets");

// Deterministic JSON: same report, same bytes. Timings are opt-in so that
// repeated runs stay byte-identical.
std::string report_to_json(const EvaluationReport& report,
                           bool include_timings = false);
EvaluationReport report_from_json(const std::string& text);

// One-row Table-style text grid for the run (method_weighting vs MRR).
std::string report_summary_grid(const EvaluationReport& report);

}  // namespace wassret
