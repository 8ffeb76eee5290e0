#include "wassret/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace wassret::kernels {

namespace {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_l2)(const double*, const double*, std::size_t);
  void (*pairwise_euclidean)(const double*, std::size_t, const double*,
                             std::size_t, std::size_t, double*);
  void (*exp_neg_scaled)(const double*, double*, std::size_t, double);
  void (*exp_scaled_shift)(const double*, const double*, double, std::size_t,
                           double, double*);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*,
                 double*);
  double (*logsumexp_scaled_diff)(const double*, const double*, std::size_t,
                                  double, double*);
  void (*weighted_row_sum)(const double*, std::size_t, std::size_t,
                           const double*, double*);
  Backend backend;
};

constexpr KernelTable kScalar = {
    scalar::dot,
    scalar::squared_l2,
    scalar::pairwise_euclidean,
    scalar::exp_neg_scaled,
    scalar::exp_scaled_shift,
    scalar::matvec,
    scalar::logsumexp_scaled_diff,
    scalar::weighted_row_sum,
    Backend::Scalar,
};

#if defined(WASSRET_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2 = {
    avx2::dot,
    avx2::squared_l2,
    avx2::pairwise_euclidean,
    avx2::exp_neg_scaled,
    avx2::exp_scaled_shift,
    avx2::matvec,
    avx2::logsumexp_scaled_diff,
    avx2::weighted_row_sum,
    Backend::Avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(WASSRET_HAVE_AVX2_KERNELS) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* env = std::getenv("WASSRET_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &kScalar;
#if defined(WASSRET_HAVE_AVX2_KERNELS)
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return &kAvx2;
#endif
  }
#if defined(WASSRET_HAVE_AVX2_KERNELS)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*> g_table{nullptr};

const KernelTable& table() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = select_default();
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

Backend active_backend() { return table().backend; }

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

bool set_backend(Backend b) {
  if (!backend_supported(b)) return false;
  switch (b) {
    case Backend::Scalar:
      g_table.store(&kScalar, std::memory_order_release);
      return true;
    case Backend::Avx2:
#if defined(WASSRET_HAVE_AVX2_KERNELS)
      g_table.store(&kAvx2, std::memory_order_release);
      return true;
#else
      return false;
#endif
  }
  return false;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  return table().squared_l2(a, b, n);
}

void pairwise_euclidean(const double* src, std::size_t n, const double* tgt,
                        std::size_t m, std::size_t dim, double* out) {
  table().pairwise_euclidean(src, n, tgt, m, dim, out);
}

void exp_neg_scaled(const double* x, double* out, std::size_t n,
                    double inv_eps) {
  table().exp_neg_scaled(x, out, n, inv_eps);
}

void exp_scaled_shift(const double* cost, const double* dual, double shift,
                      std::size_t n, double inv_eps, double* out) {
  table().exp_scaled_shift(cost, dual, shift, n, inv_eps, out);
}

void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* v, double* out) {
  table().matvec(mat, rows, cols, v, out);
}

double logsumexp_scaled_diff(const double* cost, const double* dual,
                             std::size_t n, double inv_eps, double* scratch) {
  return table().logsumexp_scaled_diff(cost, dual, n, inv_eps, scratch);
}

void weighted_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      const double* w, double* out) {
  table().weighted_row_sum(rows, n, dim, w, out);
}

}  // namespace wassret::kernels
