#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "wassret/error.hpp"
#include "wassret/transport.hpp"

namespace wassret::detail {

inline void validate_instance(std::span<const double> p,
                              std::span<const double> q, const CostMatrix& A) {
  if (p.size() != A.rows || q.size() != A.cols) {
    throw DataError("marginal sizes do not match the cost matrix");
  }
  if (p.empty() || q.empty()) throw DataError("empty marginals");
  double sp = 0.0, sq = 0.0;
  for (double x : p) {
    if (!(x > 0.0)) throw DataError("source weights must be strictly positive");
    sp += x;
  }
  for (double x : q) {
    if (!(x > 0.0)) throw DataError("target weights must be strictly positive");
    sq += x;
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9) {
    throw DataError("infeasible marginals: sums " + std::to_string(sp) +
                    " and " + std::to_string(sq) + " are not both 1");
  }
  for (double c : A.values) {
    if (!std::isfinite(c) || c < 0.0) {
      throw DataError("cost matrix entries must be finite and nonnegative");
    }
  }
}

inline std::vector<double> transpose(const std::vector<double>& m,
                                     std::size_t rows, std::size_t cols) {
  std::vector<double> t(m.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = m[i * cols + j];
  }
  return t;
}

inline double max_marginal_violation(std::span<const double> plan,
                                     std::size_t rows, std::size_t cols,
                                     std::span<const double> p,
                                     std::span<const double> q) {
  double worst = 0.0;
  std::vector<double> col_sums(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = plan[i * cols + j];
      rs += x;
      col_sums[j] += x;
    }
    worst = std::max(worst, std::abs(rs - p[i]));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    worst = std::max(worst, std::abs(col_sums[j] - q[j]));
  }
  return worst;
}

}  // namespace wassret::detail
