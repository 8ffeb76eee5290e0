#include "wassret/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>

using namespace wassret;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo,
                               double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

bool close_rel(double a, double b, double rel, double abs_floor = 1e-300) {
  if (a == b) return true;  // covers saturation to the same infinity
  // exp is only contracted on [-708, 709]; beyond that both backends
  // saturate, one possibly a step earlier than the other
  if (std::min(a, b) > 8.2e307) return true;
  const double diff = std::abs(a - b);
  return diff <= abs_floor || diff <= rel * std::max(std::abs(a), std::abs(b));
}

const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 13, 16, 33, 67, 128, 300};

}  // namespace

#if defined(WASSRET_HAVE_AVX2_KERNELS)

TEST_CASE("avx2 backend is available on this machine") {
  // The equivalence suite below is vacuous without it; fail loudly instead
  // of silently skipping on the CI box.
  REQUIRE(kernels::backend_supported(kernels::Backend::Avx2));
}

TEST_CASE("dot and squared_l2: scalar vs avx2") {
  if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
  std::mt19937_64 rng(42);
  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng, n, -3.0, 3.0);
    const auto b = random_vec(rng, n, -3.0, 3.0);
    CHECK(close_rel(kernels::scalar::dot(a.data(), b.data(), n),
                    kernels::avx2::dot(a.data(), b.data(), n), 1e-13, 1e-13));
    CHECK(close_rel(kernels::scalar::squared_l2(a.data(), b.data(), n),
                    kernels::avx2::squared_l2(a.data(), b.data(), n), 1e-13,
                    1e-13));
  }
}

TEST_CASE("pairwise_euclidean: scalar vs avx2") {
  if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
  std::mt19937_64 rng(43);
  for (std::size_t dim : {1ul, 3ul, 8ul, 50ul, 300ul}) {
    const std::size_t n = 5, m = 7;
    const auto src = random_vec(rng, n * dim, -2.0, 2.0);
    const auto tgt = random_vec(rng, m * dim, -2.0, 2.0);
    std::vector<double> a(n * m), b(n * m);
    kernels::scalar::pairwise_euclidean(src.data(), n, tgt.data(), m, dim,
                                        a.data());
    kernels::avx2::pairwise_euclidean(src.data(), n, tgt.data(), m, dim,
                                      b.data());
    for (std::size_t i = 0; i < n * m; ++i) {
      CHECK(close_rel(a[i], b[i], 1e-13, 1e-14));
    }
  }
}

TEST_CASE("vectorized exp matches std::exp to a few ulp") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> dist(-700.0, 700.0);
  double worst = 0.0;
  for (int block = 0; block < 2500; ++block) {
    double x[4], y[4];
    for (double& v : x) v = dist(rng);
    kernels::avx2::exp4(x, y);
    for (int k = 0; k < 4; ++k) {
      const double ref = std::exp(x[k]);
      const double rel = std::abs(y[k] - ref) / ref;
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 4e-15);

  // saturation behavior outside the supported window
  double x[4] = {-750.0, 0.0, 750.0, 1.0};
  double y[4];
  kernels::avx2::exp4(x, y);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 1.0);
  CHECK(std::isinf(y[2]));
  CHECK(close_rel(y[3], std::exp(1.0), 1e-15));
}

TEST_CASE("exp_neg_scaled and exp_scaled_shift: scalar vs avx2") {
  if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
  std::mt19937_64 rng(45);
  for (std::size_t n : kSizes) {
    const auto cost = random_vec(rng, n, 0.0, 2.0);
    const auto dual = random_vec(rng, n, -1.0, 1.0);
    for (double inv_eps : {0.5, 10.0, 1000.0}) {
      std::vector<double> a(n), b(n);
      kernels::scalar::exp_neg_scaled(cost.data(), a.data(), n, inv_eps);
      kernels::avx2::exp_neg_scaled(cost.data(), b.data(), n, inv_eps);
      for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(a[i], b[i], 1e-13));

      kernels::scalar::exp_scaled_shift(cost.data(), dual.data(), 0.3, n,
                                        inv_eps, a.data());
      kernels::avx2::exp_scaled_shift(cost.data(), dual.data(), 0.3, n,
                                      inv_eps, b.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(a[i], b[i], 1e-13));
    }
  }
}

TEST_CASE("matvec and weighted_row_sum: scalar vs avx2") {
  if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
  std::mt19937_64 rng(46);
  for (std::size_t rows : {1ul, 3ul, 17ul}) {
    for (std::size_t cols : {1ul, 5ul, 64ul, 301ul}) {
      const auto mat = random_vec(rng, rows * cols, -1.0, 1.0);
      const auto v = random_vec(rng, cols, -1.0, 1.0);
      const auto w = random_vec(rng, rows, 0.0, 1.0);
      std::vector<double> a(rows), b(rows);
      kernels::scalar::matvec(mat.data(), rows, cols, v.data(), a.data());
      kernels::avx2::matvec(mat.data(), rows, cols, v.data(), b.data());
      for (std::size_t i = 0; i < rows; ++i) {
        CHECK(close_rel(a[i], b[i], 1e-12, 1e-13));
      }

      std::vector<double> sa(cols), sb(cols);
      kernels::scalar::weighted_row_sum(mat.data(), rows, cols, w.data(),
                                        sa.data());
      kernels::avx2::weighted_row_sum(mat.data(), rows, cols, w.data(),
                                      sb.data());
      for (std::size_t d = 0; d < cols; ++d) {
        CHECK(close_rel(sa[d], sb[d], 1e-12, 1e-13));
      }
    }
  }
}

TEST_CASE("logsumexp_scaled_diff: scalar vs avx2, extreme scaling") {
  if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
  std::mt19937_64 rng(47);
  for (std::size_t n : kSizes) {
    const auto cost = random_vec(rng, n, 0.0, 2.0);
    const auto dual = random_vec(rng, n, -1.0, 1.0);
    std::vector<double> scratch(n);
    for (double inv_eps : {1.0, 10.0, 1000.0}) {  // epsilon down to 1e-3
      const double a = kernels::scalar::logsumexp_scaled_diff(
          cost.data(), dual.data(), n, inv_eps, scratch.data());
      const double b = kernels::avx2::logsumexp_scaled_diff(
          cost.data(), dual.data(), n, inv_eps, scratch.data());
      CHECK(std::isfinite(a));
      CHECK(std::isfinite(b));
      CHECK(close_rel(a, b, 1e-12, 1e-12));
    }
  }
}

#endif  // WASSRET_HAVE_AVX2_KERNELS

TEST_CASE("logsumexp agrees with a naive shifted reference") {
  std::mt19937_64 rng(48);
  const std::size_t n = 23;
  const auto cost = random_vec(rng, n, 0.0, 2.0);
  const auto dual = random_vec(rng, n, -1.0, 1.0);
  std::vector<double> scratch(n);
  for (double inv_eps : {1.0, 250.0}) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      hi = std::max(hi, (dual[i] - cost[i]) * inv_eps);
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::exp(static_cast<long double>((dual[i] - cost[i]) * inv_eps -
                                               hi));
    }
    const double want = hi + static_cast<double>(std::log(acc));
    const double got = kernels::logsumexp_scaled_diff(cost.data(), dual.data(),
                                                      n, inv_eps,
                                                      scratch.data());
    CHECK(close_rel(want, got, 1e-12));
  }
}

TEST_CASE("backend selection and override") {
  const kernels::Backend original = kernels::active_backend();
  CHECK(kernels::backend_supported(kernels::Backend::Scalar));
  CHECK(kernels::set_backend(kernels::Backend::Scalar));
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);

  const double a[3] = {1.0, 2.0, 3.0};
  const double b[3] = {4.0, 5.0, 6.0};
  CHECK(kernels::dot(a, b, 3) == doctest::Approx(32.0));

  if (kernels::backend_supported(kernels::Backend::Avx2)) {
    CHECK(kernels::set_backend(kernels::Backend::Avx2));
    CHECK(kernels::active_backend() == kernels::Backend::Avx2);
    CHECK(kernels::dot(a, b, 3) == doctest::Approx(32.0));
  }
  kernels::set_backend(original);
}
