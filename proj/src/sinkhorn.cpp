#include <algorithm>
#include <cmath>
#include <vector>

#include "transport_detail.hpp"
#include "wassret/error.hpp"
#include "wassret/kernels.hpp"
#include "wassret/transport.hpp"

namespace wassret {

namespace {

TransportResult finish(std::vector<double>&& plan, const CostMatrix& A,
                       std::span<const double> p, std::span<const double> q,
                       const SinkhornConfig& cfg, int iterations,
                       bool converged) {
  TransportResult r;
  r.rows = A.rows;
  r.cols = A.cols;
  r.plan = std::move(plan);
  r.transport_cost =
      kernels::dot(A.values.data(), r.plan.data(), r.plan.size());
  r.entropy = plan_entropy(r.plan);
  r.objective = r.transport_cost - cfg.epsilon * r.entropy;
  r.iterations = iterations;
  r.converged = converged;
  r.marginal_violation =
      detail::max_marginal_violation(r.plan, A.rows, A.cols, p, q);
  if (!std::isfinite(r.transport_cost)) {
    throw NumericalError("sinkhorn produced a non-finite transport cost");
  }
  return r;
}

TransportResult solve_scaling(std::span<const double> p,
                              std::span<const double> q, const CostMatrix& A,
                              const SinkhornConfig& cfg) {
  const std::size_t n = A.rows;
  const std::size_t m = A.cols;
  const double inv_eps = 1.0 / cfg.epsilon;

  std::vector<double> K(n * m);
  kernels::exp_neg_scaled(A.values.data(), K.data(), n * m, inv_eps);
  const std::vector<double> Kt = detail::transpose(K, n, m);

  std::vector<double> u(n, 1.0), v(m, 1.0), Kv(n), Ktu(m);
  std::vector<double> plan(n * m);

  auto guard = [&](const std::vector<double>& x, const char* what) {
    for (double t : x) {
      if (!std::isfinite(t) || t == 0.0) {
        throw NumericalError(
            std::string("sinkhorn kernel ") + what +
            " under/overflowed; epsilon too small without stabilization");
      }
    }
  };

  int it = 0;
  bool converged = false;
  while (it < cfg.max_iter) {
    ++it;
    kernels::matvec(K.data(), n, m, v.data(), Kv.data());
    guard(Kv, "row scaling");
    for (std::size_t i = 0; i < n; ++i) u[i] = p[i] / Kv[i];
    kernels::matvec(Kt.data(), m, n, u.data(), Ktu.data());
    guard(Ktu, "column scaling");
    for (std::size_t j = 0; j < m; ++j) v[j] = q[j] / Ktu[j];

    for (std::size_t i = 0; i < n; ++i) {
      const double ui = u[i];
      const double* krow = K.data() + i * m;
      double* prow = plan.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) prow[j] = ui * krow[j] * v[j];
    }
    if (detail::max_marginal_violation(plan, n, m, p, q) < cfg.tolerance) {
      converged = true;
      break;
    }
  }
  return finish(std::move(plan), A, p, q, cfg, it, converged);
}

TransportResult solve_log_domain(std::span<const double> p,
                                 std::span<const double> q,
                                 const CostMatrix& A,
                                 const SinkhornConfig& cfg) {
  const std::size_t n = A.rows;
  const std::size_t m = A.cols;
  const double eps = cfg.epsilon;
  const double inv_eps = 1.0 / eps;

  // Column pass and plan assembly want contiguous columns of A.
  const std::vector<double> At = detail::transpose(A.values, n, m);

  std::vector<double> f(n, 0.0), g(m, 0.0);
  std::vector<double> log_p(n), log_q(m);
  for (std::size_t i = 0; i < n; ++i) log_p[i] = std::log(p[i]);
  for (std::size_t j = 0; j < m; ++j) log_q[j] = std::log(q[j]);

  std::vector<double> scratch(std::max(n, m));
  std::vector<double> plan(n * m);

  int it = 0;
  bool converged = false;
  while (it < cfg.max_iter) {
    ++it;
    // f_i = eps log p_i - eps lse_j((g_j - A_ij)/eps); scalings absorbed in
    // the potentials keep every exponent max-shifted, so no overflow.
    for (std::size_t i = 0; i < n; ++i) {
      const double lse = kernels::logsumexp_scaled_diff(A.row(i), g.data(), m,
                                                        inv_eps, scratch.data());
      f[i] = eps * log_p[i] - eps * lse;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double lse = kernels::logsumexp_scaled_diff(
          At.data() + j * n, f.data(), n, inv_eps, scratch.data());
      g[j] = eps * log_q[j] - eps * lse;
    }

    for (std::size_t i = 0; i < n; ++i) {
      kernels::exp_scaled_shift(A.row(i), g.data(), f[i], m, inv_eps,
                                plan.data() + i * m);
    }
    if (detail::max_marginal_violation(plan, n, m, p, q) < cfg.tolerance) {
      converged = true;
      break;
    }
  }
  return finish(std::move(plan), A, p, q, cfg, it, converged);
}

}  // namespace

TransportResult solve_sinkhorn(std::span<const double> p,
                               std::span<const double> q, const CostMatrix& A,
                               const SinkhornConfig& cfg) {
  detail::validate_instance(p, q, A);
  if (!(cfg.epsilon > 0.0)) throw DataError("epsilon must be positive");
  if (cfg.max_iter <= 0) throw DataError("max_iter must be positive");
  if (!(cfg.tolerance > 0.0)) throw DataError("tolerance must be positive");
  return cfg.stabilized ? solve_log_domain(p, q, A, cfg)
                        : solve_scaling(p, q, A, cfg);
}

}  // namespace wassret
