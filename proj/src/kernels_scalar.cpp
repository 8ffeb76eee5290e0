#include "wassret/kernels.hpp"

#include <cmath>
#include <limits>

namespace wassret::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void pairwise_euclidean(const double* src, std::size_t n, const double* tgt,
                        std::size_t m, std::size_t dim, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = src + i * dim;
    for (std::size_t j = 0; j < m; ++j) {
      out[i * m + j] = std::sqrt(squared_l2(a, tgt + j * dim, dim));
    }
  }
}

void exp_neg_scaled(const double* x, double* out, std::size_t n,
                    double inv_eps) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-x[i] * inv_eps);
}

void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out) {
  // same association as the vector variant (shift + (dual - cost)), so the
  // two backends see bit-identical exponents
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp((shift + (dual[i] - cost[i])) * inv_eps);
  }
}

void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out) {
  for (std::size_t i = 0; i < rows; ++i) out[i] = dot(mat + i * cols, v, cols);
}

double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    scratch[i] = (dual[i] - cost[i]) * inv_eps;
    if (scratch[i] > hi) hi = scratch[i];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(scratch[i] - hi);
  return hi + std::log(acc);
}

void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out) {
  for (std::size_t d = 0; d < dim; ++d) out[d] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w[i];
    const double* row = rows + i * dim;
    for (std::size_t d = 0; d < dim; ++d) out[d] += wi * row[d];
  }
}

}  // namespace wassret::kernels::scalar
