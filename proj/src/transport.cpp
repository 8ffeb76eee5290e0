#include "wassret/transport.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wassret/error.hpp"
#include "wassret/kernels.hpp"

namespace wassret {

namespace {

// Enough digits for an exact double round-trip.
std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

struct EmbeddedPair {
  EmbeddedDistribution src;
  EmbeddedDistribution tgt;
  CostMatrix cost;
};

EmbeddedPair embed_pair(const DiscreteDistribution& src,
                        const DiscreteDistribution& tgt,
                        const EmbeddingTable& src_table,
                        const EmbeddingTable& tgt_table,
                        const OovPolicy& policy) {
  EmbeddedPair pair;
  pair.src = embed_distribution(src, src_table, policy);
  pair.tgt = embed_distribution(tgt, tgt_table, policy);
  prune_embedded(pair.src, src_table.dim);
  prune_embedded(pair.tgt, tgt_table.dim);
  pair.cost = cost_matrix(pair.src.vectors, pair.src.dist.words.size(),
                          pair.tgt.vectors, pair.tgt.dist.words.size(),
                          src_table.dim);
  return pair;
}

}  // namespace

double plan_entropy(std::span<const double> plan) {
  double h = 0.0;
  for (double x : plan) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

void prune_embedded(EmbeddedDistribution& e, std::size_t dim) {
  bool any_tiny = false;
  for (double w : e.dist.weights) {
    if (w < kWeightFloor) {
      any_tiny = true;
      break;
    }
  }
  if (!any_tiny) return;

  EmbeddedDistribution kept;
  kept.dist.source_doc = e.dist.source_doc;
  kept.dropped = std::move(e.dropped);
  double total = 0.0;
  for (std::size_t i = 0; i < e.dist.weights.size(); ++i) {
    if (e.dist.weights[i] < kWeightFloor) continue;
    kept.dist.words.push_back(std::move(e.dist.words[i]));
    kept.dist.weights.push_back(e.dist.weights[i]);
    kept.vectors.insert(kept.vectors.end(), e.vectors.begin() + i * dim,
                        e.vectors.begin() + (i + 1) * dim);
    total += e.dist.weights[i];
  }
  if (kept.dist.words.empty()) {
    throw DataError("all weights of document '" + e.dist.source_doc +
                    "' fell below the mass floor");
  }
  for (double& w : kept.dist.weights) w /= total;
  e = std::move(kept);
}

CostMatrix cost_matrix(std::span<const double> src, std::size_t n,
                       std::span<const double> tgt, std::size_t m,
                       std::size_t dim) {
  if (dim == 0 || src.size() != n * dim || tgt.size() != m * dim) {
    throw DataError("cost_matrix: vector spans do not match n x dim / m x dim");
  }
  CostMatrix A;
  A.rows = n;
  A.cols = m;
  A.values.resize(n * m);
  kernels::pairwise_euclidean(src.data(), n, tgt.data(), m, dim,
                              A.values.data());
  return A;
}

double wasserstein_distance(const DiscreteDistribution& src,
                            const DiscreteDistribution& tgt,
                            const EmbeddingTable& src_table,
                            const EmbeddingTable& tgt_table,
                            const OovPolicy& policy) {
  if (src_table.dim != tgt_table.dim) {
    throw DataError("embedding tables have different dimensions");
  }
  const EmbeddedPair pair =
      embed_pair(src, tgt, src_table, tgt_table, policy);
  return solve_exact(pair.src.dist.weights, pair.tgt.dist.weights, pair.cost)
      .transport_cost;
}

double sinkhorn_distance(const DiscreteDistribution& src,
                         const DiscreteDistribution& tgt,
                         const EmbeddingTable& src_table,
                         const EmbeddingTable& tgt_table,
                         const OovPolicy& policy, const SinkhornConfig& cfg,
                         RankingValue value) {
  if (src_table.dim != tgt_table.dim) {
    throw DataError("embedding tables have different dimensions");
  }
  const EmbeddedPair pair =
      embed_pair(src, tgt, src_table, tgt_table, policy);
  const TransportResult r =
      solve_sinkhorn(pair.src.dist.weights, pair.tgt.dist.weights, pair.cost,
                     cfg);
  return value == RankingValue::TransportCost ? r.transport_cost
                                              : r.objective;
}

void export_plan(const TransportResult& result,
                 std::span<const std::string> src_words,
                 std::span<const std::string> tgt_words,
                 const std::filesystem::path& path) {
  if (src_words.size() != result.rows || tgt_words.size() != result.cols) {
    throw DataError("export_plan: labels do not match the plan shape");
  }
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write plan CSV: " + path.string());

  for (const std::string& w : tgt_words) out << ',' << csv_escape(w);
  out << '\n';
  for (std::size_t i = 0; i < result.rows; ++i) {
    out << csv_escape(src_words[i]);
    for (std::size_t j = 0; j < result.cols; ++j) {
      out << ',' << format_double(result.plan_at(i, j));
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing plan CSV: " + path.string());
}

}  // namespace wassret
