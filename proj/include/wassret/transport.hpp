#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wassret/embeddings.hpp"
#include "wassret/weighting.hpp"

namespace wassret {

struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major, nonnegative, finite

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  const double* row(std::size_t i) const { return values.data() + i * cols; }
};

struct TransportResult {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> plan;   // row-major coupling, entries >= 0
  double transport_cost = 0;  // <A, plan>_F
  double entropy = 0;         // -sum plan log plan
  double objective = 0;       // value of the solved objective
  int iterations = 0;
  bool converged = false;
  double marginal_violation = 0;  // max L-inf error of row/col sums

  double plan_at(std::size_t i, std::size_t j) const {
    return plan[i * cols + j];
  }
};

struct SinkhornConfig {
  double epsilon = 0.1;  // entropic regularization weight
  int max_iter = 50;
  double tolerance = 1e-9;  // stop when marginal_violation drops below
  bool stabilized = true;   // log-domain updates
};

// Which value of a regularized solve is used for ranking/reporting.
enum class RankingValue { TransportCost, RegularizedObjective };

// values[i*m+j] = ||src_i - tgt_j||_2 (not squared). Spans hold row-major
// n x dim and m x dim matrices; throws DataError on size mismatch.
CostMatrix cost_matrix(std::span<const double> src, std::size_t n,
                       std::span<const double> tgt, std::size_t m,
                       std::size_t dim);

// Transportation simplex over the bipartite graph: north-west-corner start,
// dual-based pivoting to an optimal vertex. The returned plan is basic, so
// it has at most rows+cols-1 nonzero entries and marginal_violation at
// float-noise level. Marginals must each sum to 1 within 1e-9 and be
// strictly positive.
TransportResult solve_exact(std::span<const double> p,
                            std::span<const double> q, const CostMatrix& A);

// Sinkhorn-Knopp scaling on exp(-A/epsilon). With cfg.stabilized the
// iterations run in the log domain (dual potentials absorb the scalings) and
// remain finite for epsilon down to 1e-3 on unit-scale costs; without it a
// kernel underflow raises NumericalError rather than propagating NaNs.
// objective = transport_cost - epsilon * entropy.
TransportResult solve_sinkhorn(std::span<const double> p,
                               std::span<const double> q, const CostMatrix& A,
                               const SinkhornConfig& cfg);

// embed -> prune tiny weights -> ground costs -> solve. Both return the
// value used for ranking; sinkhorn_distance defaults to the sharp transport
// cost with the entropy-adjusted objective available as a mode.
double wasserstein_distance(const DiscreteDistribution& src,
                            const DiscreteDistribution& tgt,
                            const EmbeddingTable& src_table,
                            const EmbeddingTable& tgt_table,
                            const OovPolicy& policy);
double sinkhorn_distance(const DiscreteDistribution& src,
                         const DiscreteDistribution& tgt,
                         const EmbeddingTable& src_table,
                         const EmbeddingTable& tgt_table,
                         const OovPolicy& policy, const SinkhornConfig& cfg,
                         RankingValue value = RankingValue::TransportCost);

// Weights below this are pruned (and the rest renormalized) before a solve;
// zero-mass rows make the scaling problem ill-posed.
inline constexpr double kWeightFloor = 1e-12;
void prune_embedded(EmbeddedDistribution& e, std::size_t dim);

// CSV: header row of target words, one row per source word labelled in the
// first column, cells printed with enough digits to round-trip.
void export_plan(const TransportResult& result,
                 std::span<const std::string> src_words,
                 std::span<const std::string> tgt_words,
                 const std::filesystem::path& path);

double plan_entropy(std::span<const double> plan);

}  // namespace wassret
