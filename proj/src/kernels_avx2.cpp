#include "wassret/kernels.hpp"

#if defined(WASSRET_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace wassret::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// exp on 4 doubles, Cephes-style: x = n*ln2 + r, e^r from a rational
// approximation in r^2, then scale by 2^n through the exponent bits.
// Accurate to ~2 ulp on [-708, 709]; saturates to 0 / +inf outside.
inline __m256d exp_pd(__m256d x) {
  const __m256d exp_hi = _mm256_set1_pd(709.0);
  const __m256d exp_lo = _mm256_set1_pd(-708.0);
  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
  const __m256d ln2_c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_c2 = _mm256_set1_pd(1.42860682030941723212e-6);

  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d xin = x;
  x = _mm256_min_pd(x, exp_hi);
  x = _mm256_max_pd(x, exp_lo);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_c1, x);
  r = _mm256_fnmadd_pd(n, ln2_c2, r);
  __m256d r2 = _mm256_mul_pd(r, r);

  __m256d px = _mm256_fmadd_pd(p0, r2, p1);
  px = _mm256_fmadd_pd(px, r2, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, r2, q1);
  qx = _mm256_fmadd_pd(qx, r2, q2);
  qx = _mm256_fmadd_pd(qx, r2, q3);

  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  // 2^n via the exponent field; |n| <= 1023 after the clamps above
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_slli_epi64(_mm256_cvtepi32_epi64(n32), 52);
  e = _mm256_castsi256_pd(_mm256_add_epi64(_mm256_castpd_si256(e), n64));

  const __m256d under = _mm256_cmp_pd(xin, exp_lo, _CMP_LT_OQ);
  e = _mm256_andnot_pd(under, e);
  const __m256d over = _mm256_cmp_pd(xin, exp_hi, _CMP_GT_OQ);
  e = _mm256_blendv_pd(e,
                       _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                       over);
  return e;
}

}  // namespace

void exp4(const double* x, double* out) {
  _mm256_storeu_pd(out, exp_pd(_mm256_loadu_pd(x)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
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
  const __m256d s = _mm256_set1_pd(-inv_eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     exp_pd(_mm256_mul_pd(_mm256_loadu_pd(x + i), s)));
  }
  if (i < n) {
    double tail[4] = {0, 0, 0, 0};
    double res[4];
    for (std::size_t k = i; k < n; ++k) tail[k - i] = -x[k] * inv_eps;
    exp4(tail, res);
    for (std::size_t k = i; k < n; ++k) out[k] = res[k - i];
  }
}

void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out) {
  const __m256d s = _mm256_set1_pd(inv_eps);
  const __m256d sh = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_add_pd(
        sh, _mm256_sub_pd(_mm256_loadu_pd(dual + i), _mm256_loadu_pd(cost + i)));
    _mm256_storeu_pd(out + i, exp_pd(_mm256_mul_pd(t, s)));
  }
  if (i < n) {
    double tail[4] = {0, 0, 0, 0};
    double res[4];
    for (std::size_t k = i; k < n; ++k) {
      tail[k - i] = (shift + (dual[k] - cost[k])) * inv_eps;
    }
    exp4(tail, res);
    for (std::size_t k = i; k < n; ++k) out[k] = res[k - i];
  }
}

void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out) {
  for (std::size_t i = 0; i < rows; ++i) out[i] = dot(mat + i * cols, v, cols);
}

double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch) {
  const __m256d s = _mm256_set1_pd(inv_eps);
  __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(dual + i), _mm256_loadu_pd(cost + i)), s);
    _mm256_storeu_pd(scratch + i, t);
    vmax = _mm256_max_pd(vmax, t);
  }
  double hi = hmax(vmax);
  for (; i < n; ++i) {
    scratch[i] = (dual[i] - cost[i]) * inv_eps;
    if (scratch[i] > hi) hi = scratch[i];
  }

  const __m256d vhi = _mm256_set1_pd(hi);
  __m256d vsum = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4) {
    vsum = _mm256_add_pd(
        vsum, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(scratch + i), vhi)));
  }
  double acc = hsum(vsum);
  for (; i < n; ++i) acc += std::exp(scratch[i] - hi);
  return hi + std::log(acc);
}

void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out) {
  for (std::size_t d = 0; d < dim; ++d) out[d] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d wi = _mm256_set1_pd(w[i]);
    const double* row = rows + i * dim;
    std::size_t d = 0;
    for (; d + 4 <= dim; d += 4) {
      _mm256_storeu_pd(out + d, _mm256_fmadd_pd(wi, _mm256_loadu_pd(row + d),
                                                _mm256_loadu_pd(out + d)));
    }
    for (; d < dim; ++d) out[d] += w[i] * row[d];
  }
}

}  // namespace wassret::kernels::avx2

#endif  // WASSRET_HAVE_AVX2_KERNELS
