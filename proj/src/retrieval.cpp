#include "wassret/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wassret/error.hpp"
#include "wassret/kernels.hpp"
#include "wassret/parallel.hpp"

namespace wassret {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::ordered_json distance_to_json(double d) {
  if (std::isfinite(d)) return d;
  return "inf";
}

double distance_from_json(const nlohmann::ordered_json& j) {
  if (j.is_string()) return kInf;
  return j.get<double>();
}

const char* oov_mode_name(OovMode m) {
  return m == OovMode::Off ? "off" : "levenshtein";
}

const char* tie_break_name(TieBreak t) {
  return t == TieBreak::Lexicographic ? "lexicographic" : "seeded-random";
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Wass:
      return "wass";
    case Method::EntroWass:
      return "entro_wass";
    case Method::Nbow:
      return "nbow";
  }
  return "?";
}

const char* weighting_name(Weighting w) {
  return w == Weighting::Tf ? "tf" : "idf";
}

std::optional<Method> parse_method(const std::string& s) {
  if (s == "wass") return Method::Wass;
  if (s == "entro_wass") return Method::EntroWass;
  if (s == "nbow") return Method::Nbow;
  return std::nullopt;
}

std::optional<Weighting> parse_weighting(const std::string& s) {
  if (s == "tf") return Weighting::Tf;
  if (s == "idf") return Weighting::Idf;
  return std::nullopt;
}

GoldenLinks load_golden_links(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open golden links file: " + path.string());
  GoldenLinks golden;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected query_id<TAB>target_id");
    }
    std::string query = line.substr(0, tab);
    if (!golden.links.emplace(std::move(query), line.substr(tab + 1)).second) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": duplicate query id");
    }
  }
  return golden;
}

std::vector<double> nbow_embed(const DiscreteDistribution& dist,
                               const EmbeddingTable& table,
                               const OovPolicy& policy) {
  EmbeddedDistribution e = embed_distribution(dist, table, policy);
  std::vector<double> out(table.dim);
  kernels::weighted_row_sum(e.vectors.data(), e.dist.weights.size(), table.dim,
                            e.dist.weights.data(), out.data());
  return out;
}

double mrr(const std::vector<RankedList>& lists, const GoldenLinks& golden) {
  if (lists.empty()) throw DataError("mrr of zero ranked lists");
  double sum = 0.0;
  for (const RankedList& list : lists) {
    auto it = golden.links.find(list.query_id);
    if (it == golden.links.end()) {
      throw DataError("no golden entry for query '" + list.query_id + "'");
    }
    std::size_t rank = 0;
    for (std::size_t k = 0; k < list.entries.size(); ++k) {
      if (list.entries[k].doc_id == it->second) {
        rank = k + 1;
        break;
      }
    }
    if (rank == 0) {
      throw DataError("golden target '" + it->second +
                      "' absent from the ranked list of query '" +
                      list.query_id + "'");
    }
    sum += 1.0 / static_cast<double>(rank);
  }
  return sum / static_cast<double>(lists.size());
}

RetrievalEngine::RetrievalEngine(const Corpus& queries, const Corpus& targets,
                                 const EmbeddingTable& query_table,
                                 const EmbeddingTable& target_table,
                                 const RetrievalConfig& config)
    : queries_(queries),
      targets_(targets),
      query_table_(query_table),
      target_table_(target_table),
      config_(config),
      query_resolver_(query_table, config.oov),
      target_resolver_(target_table, config.oov) {
  if (query_table.dim != target_table.dim) {
    throw DataError("embedding tables have different dimensions");
  }
  if (config_.weighting == Weighting::Idf) {
    query_idf_ = smoothed_idf(queries_);
    target_idf_ = smoothed_idf(targets_);
  }

  target_embedded_.resize(targets_.size());
  if (config_.method == Method::Nbow) target_nbow_.resize(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    const Document& doc = targets_.documents[t];
    try {
      DiscreteDistribution dist = make_weights(
          doc, target_idf_, config_.weighting == Weighting::Idf);
      EmbeddedDistribution e = embed_distribution(dist, target_resolver_);
      prune_embedded(e, target_table_.dim);
      unresolved_words_ += e.dropped.size();
      if (config_.method == Method::Nbow) {
        target_nbow_[t].resize(target_table_.dim);
        kernels::weighted_row_sum(e.vectors.data(), e.dist.weights.size(),
                                  target_table_.dim, e.dist.weights.data(),
                                  target_nbow_[t].data());
      }
      target_embedded_[t] = std::move(e);
    } catch (const DataError&) {
      failed_targets_.push_back(doc.id);
    }
  }
}

double RetrievalEngine::target_distance(const EmbeddedDistribution& query,
                                        const std::vector<double>& query_nbow,
                                        std::size_t t) {
  const auto& target = target_embedded_[t];
  if (!target.has_value()) return kInf;

  switch (config_.method) {
    case Method::Nbow:
      return std::sqrt(kernels::squared_l2(
          query_nbow.data(), target_nbow_[t].data(), target_table_.dim));
    case Method::Wass: {
      const CostMatrix A = cost_matrix(
          query.vectors, query.dist.words.size(), target->vectors,
          target->dist.words.size(), target_table_.dim);
      return solve_exact(query.dist.weights, target->dist.weights, A)
          .transport_cost;
    }
    case Method::EntroWass: {
      const CostMatrix A = cost_matrix(
          query.vectors, query.dist.words.size(), target->vectors,
          target->dist.words.size(), target_table_.dim);
      const TransportResult r = solve_sinkhorn(
          query.dist.weights, target->dist.weights, A, config_.sinkhorn);
      return config_.ranking_value == RankingValue::TransportCost
                 ? r.transport_cost
                 : r.objective;
    }
  }
  return kInf;
}

RankedList RetrievalEngine::rank(const Document& query) {
  DiscreteDistribution dist =
      make_weights(query, query_idf_, config_.weighting == Weighting::Idf);
  EmbeddedDistribution embedded = embed_distribution(dist, query_resolver_);
  prune_embedded(embedded, query_table_.dim);
  unresolved_words_ += embedded.dropped.size();

  std::vector<double> query_nbow;
  if (config_.method == Method::Nbow) {
    query_nbow.resize(query_table_.dim);
    kernels::weighted_row_sum(embedded.vectors.data(),
                              embedded.dist.weights.size(), query_table_.dim,
                              embedded.dist.weights.data(), query_nbow.data());
  }

  std::vector<double> distances(targets_.size());
  parallel_for(targets_.size(), config_.workers, [&](std::size_t t) {
    distances[t] = target_distance(embedded, query_nbow, t);
  });

  RankedList out;
  out.query_id = query.id;
  out.entries.reserve(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    out.entries.push_back({targets_.documents[t].id, distances[t]});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.doc_id < b.doc_id;
            });
  return out;
}

RankedList RetrievalEngine::rank_by_id(const std::string& query_id) {
  const Document* doc = queries_.find(query_id);
  if (doc == nullptr) {
    throw DataError("unknown query id '" + query_id + "'");
  }
  return rank(*doc);
}

EvaluationReport evaluate(const Corpus& queries, const Corpus& targets,
                          const GoldenLinks& golden,
                          const EmbeddingTable& query_table,
                          const EmbeddingTable& target_table,
                          const RetrievalConfig& config,
                          const std::string& query_label,
                          const std::string& target_label) {
  const auto start = std::chrono::steady_clock::now();
  RetrievalEngine engine(queries, targets, query_table, target_table, config);

  EvaluationReport report;
  report.config = config;
  report.query_corpus_label = query_label;
  report.target_corpus_label = target_label;
  report.num_queries = queries.size();
  report.num_targets = targets.size();

  std::vector<RankedList> lists;
  lists.reserve(queries.size());
  for (const Document& query : queries.documents) {
    lists.push_back(engine.rank(query));
  }
  report.mrr_value = mrr(lists, golden);
  report.unresolved_words = engine.unresolved_words();

  for (const RankedList& list : lists) {
    QueryRecord record;
    record.query_id = list.query_id;
    const std::string& want = golden.links.at(list.query_id);
    for (std::size_t k = 0; k < list.entries.size(); ++k) {
      if (list.entries[k].doc_id == want) {
        record.correct_rank = k + 1;
        break;
      }
    }
    const std::size_t keep = std::min(config.top_k, list.entries.size());
    record.top_k.assign(list.entries.begin(), list.entries.begin() + keep);
    report.per_query.push_back(std::move(record));
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::string report_to_json(const EvaluationReport& report,
                           bool include_timings) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"method", method_name(report.config.method)},
      {"weighting", weighting_name(report.config.weighting)},
      {"oov",
       {{"mode", oov_mode_name(report.config.oov.mode)},
        {"threshold", report.config.oov.threshold},
        {"collapse", report.config.oov.collapse},
        {"tie_break", tie_break_name(report.config.oov.tie_break)},
        {"seed", report.config.oov.seed}}},
      {"sinkhorn",
       {{"epsilon", report.config.sinkhorn.epsilon},
        {"max_iter", report.config.sinkhorn.max_iter},
        {"tolerance", report.config.sinkhorn.tolerance},
        {"stabilized", report.config.sinkhorn.stabilized}}},
      {"ranking_value",
       report.config.ranking_value == RankingValue::TransportCost
           ? "transport_cost"
           : "regularized_objective"},
      {"workers", report.config.workers},
      {"top_k", report.config.top_k},
      {"query_corpus", report.query_corpus_label},
      {"target_corpus", report.target_corpus_label},
  };
  j["num_queries"] = report.num_queries;
  j["num_targets"] = report.num_targets;
  j["mrr"] = report.mrr_value;
  j["unresolved_words"] = report.unresolved_words;
  auto& per_query = j["per_query"] = nlohmann::ordered_json::array();
  for (const QueryRecord& record : report.per_query) {
    nlohmann::ordered_json r;
    r["query_id"] = record.query_id;
    r["correct_rank"] = record.correct_rank;
    auto& top = r["top_k"] = nlohmann::ordered_json::array();
    for (const RankedEntry& e : record.top_k) {
      top.push_back({{"doc_id", e.doc_id},
                     {"distance", distance_to_json(e.distance)}});
    }
    per_query.push_back(std::move(r));
  }
  if (include_timings) j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  EvaluationReport report;

  const auto& c = j.at("config");
  auto method = parse_method(c.at("method").get<std::string>());
  auto weighting = parse_weighting(c.at("weighting").get<std::string>());
  if (!method || !weighting) throw DataError("report: unknown method/weighting");
  report.config.method = *method;
  report.config.weighting = *weighting;
  const auto& oov = c.at("oov");
  report.config.oov.mode = oov.at("mode").get<std::string>() == "off"
                               ? OovMode::Off
                               : OovMode::Levenshtein;
  report.config.oov.threshold = oov.at("threshold").get<int>();
  report.config.oov.collapse = oov.at("collapse").get<bool>();
  report.config.oov.tie_break =
      oov.at("tie_break").get<std::string>() == "lexicographic"
          ? TieBreak::Lexicographic
          : TieBreak::SeededRandom;
  report.config.oov.seed = oov.at("seed").get<std::uint64_t>();
  const auto& sk = c.at("sinkhorn");
  report.config.sinkhorn.epsilon = sk.at("epsilon").get<double>();
  report.config.sinkhorn.max_iter = sk.at("max_iter").get<int>();
  report.config.sinkhorn.tolerance = sk.at("tolerance").get<double>();
  report.config.sinkhorn.stabilized = sk.at("stabilized").get<bool>();
  report.config.ranking_value =
      c.at("ranking_value").get<std::string>() == "transport_cost"
          ? RankingValue::TransportCost
          : RankingValue::RegularizedObjective;
  report.config.workers = c.at("workers").get<unsigned>();
  report.config.top_k = c.at("top_k").get<std::size_t>();
  report.query_corpus_label = c.at("query_corpus").get<std::string>();
  report.target_corpus_label = c.at("target_corpus").get<std::string>();

  report.num_queries = j.at("num_queries").get<std::size_t>();
  report.num_targets = j.at("num_targets").get<std::size_t>();
  report.mrr_value = j.at("mrr").get<double>();
  report.unresolved_words = j.at("unresolved_words").get<std::size_t>();
  for (const auto& r : j.at("per_query")) {
    QueryRecord record;
    record.query_id = r.at("query_id").get<std::string>();
    record.correct_rank = r.at("correct_rank").get<std::size_t>();
    for (const auto& e : r.at("top_k")) {
      record.top_k.push_back({e.at("doc_id").get<std::string>(),
                              distance_from_json(e.at("distance"))});
    }
    report.per_query.push_back(std::move(record));
  }
  if (j.contains("wall_seconds")) {
    report.wall_seconds = j.at("wall_seconds").get<double>();
  }
  return report;
}

std::string report_summary_grid(const EvaluationReport& report) {
  std::ostringstream out;
  const std::string system = std::string(method_name(report.config.method)) +
                             "_" + weighting_name(report.config.weighting) +
                             (report.config.oov.mode == OovMode::Levenshtein
                                  ? "+"
                                  : "");
  const std::string direction =
      report.query_corpus_label + "->" + report.target_corpus_label;
  out << "system";
  out << std::string(system.size() > 6 ? system.size() - 6 + 2 : 2, ' ');
  out << direction << '\n';
  char mrr_buf[16];
  std::snprintf(mrr_buf, sizeof(mrr_buf), "%.4f", report.mrr_value);
  out << system << "  " << mrr_buf << '\n';
  return out.str();
}

}  // namespace wassret
