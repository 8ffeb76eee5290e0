#pragma once

#include <cstddef>

// Numeric inner loops shared by the transport solvers, the ground-metric
// builder and the nBOW baseline. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant. The dispatched entry
// points select a backend once at startup (best supported wins, overridable
// with set_backend() or the WASSRET_KERNELS=scalar|avx2 environment variable).
//
// All kernels assume finite inputs. The vectorized exponential is accurate to
// a few ulp on [-708, 709]; arguments below -708 flush to zero and arguments
// above 709 saturate to +inf.

namespace wassret::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool set_backend(Backend b);  // false (and no change) if unsupported here
bool backend_supported(Backend b);
const char* backend_name(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i (a[i]-b[i])^2
double squared_l2(const double* a, const double* b, std::size_t n);

// out[i*m+j] = ||src_i - tgt_j||_2 over row-major (n x dim) and (m x dim)
void pairwise_euclidean(const double* src, std::size_t n, const double* tgt,
                        std::size_t m, std::size_t dim, double* out);

// out[i] = exp(-x[i] * inv_eps)
void exp_neg_scaled(const double* x, double* out, std::size_t n,
                    double inv_eps);

// out[j] = exp((shift + dual[j] - cost[j]) * inv_eps)
void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out);

// out[i] = sum_j mat[i*cols+j] * v[j]
void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out);

// log sum_j exp((dual[j] - cost[j]) * inv_eps), max-shifted.
// scratch must hold n doubles.
double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch);

// out[d] = sum_i w[i] * rows[i*dim+d]; out must hold dim doubles
void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
void pairwise_euclidean(const double* src, std::size_t n, const double* tgt,
                        std::size_t m, std::size_t dim, double* out);
void exp_neg_scaled(const double* x, double* out, std::size_t n,
                    double inv_eps);
void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out);
void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out);
double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch);
void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define WASSRET_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
void pairwise_euclidean(const double* src, std::size_t n, const double* tgt,
                        std::size_t m, std::size_t dim, double* out);
void exp_neg_scaled(const double* x, double* out, std::size_t n,
                    double inv_eps);
void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out);
void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out);
double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch);
void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out);

// vectorized exp on 4 doubles, exposed for accuracy tests
void exp4(const double* x, double* out);
}  // namespace avx2
#endif

}  // namespace wassret::kernels
