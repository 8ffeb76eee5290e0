#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "transport_detail.hpp"
#include "wassret/error.hpp"
#include "wassret/kernels.hpp"
#include "wassret/transport.hpp"

namespace wassret {

namespace {

// Reduced costs below -kOptTol trigger a pivot; anything closer to zero is
// dual-recomputation noise. Optimality is then within ~1e-11 of the true
// vertex minimum, well inside the 1e-9 contract.
constexpr double kOptTol = 1e-11;

constexpr std::size_t kNoCell = static_cast<std::size_t>(-1);

// Transportation simplex state: a spanning-tree basis over the bipartite
// graph of row nodes [0,n) and column nodes [n,n+m).
struct Simplex {
  std::size_t n, m;
  const CostMatrix& A;
  std::vector<double> flow;
  std::vector<char> basic;
  std::vector<std::vector<std::size_t>> row_adj;  // basic columns per row
  std::vector<std::vector<std::size_t>> col_adj;  // basic rows per column
  std::vector<double> u, v;                       // duals

  Simplex(std::span<const double> p, std::span<const double> q,
          const CostMatrix& a)
      : n(a.rows),
        m(a.cols),
        A(a),
        flow(n * m, 0.0),
        basic(n * m, 0),
        row_adj(n),
        col_adj(m),
        u(n),
        v(m) {
    northwest_corner(p, q);
    recompute_duals();
  }

  void add_basic(std::size_t i, std::size_t j) {
    basic[i * m + j] = 1;
    row_adj[i].push_back(j);
    col_adj[j].push_back(i);
  }

  void remove_basic(std::size_t i, std::size_t j) {
    basic[i * m + j] = 0;
    auto& r = row_adj[i];
    r.erase(std::find(r.begin(), r.end(), j));
    auto& c = col_adj[j];
    c.erase(std::find(c.begin(), c.end(), i));
  }

  // Initial basis with exactly n+m-1 cells; equal supply/demand exhaustion
  // produces zero-flow (degenerate) basic cells, which is fine.
  void northwest_corner(std::span<const double> p, std::span<const double> q) {
    std::vector<double> a(p.begin(), p.end());
    std::vector<double> b(q.begin(), q.end());
    std::size_t i = 0, j = 0;
    while (true) {
      const double t = std::min(a[i], b[j]);
      flow[i * m + j] = t;
      add_basic(i, j);
      a[i] -= t;
      b[j] -= t;
      if (i + 1 == n && j + 1 == m) break;
      if (i + 1 == n) {
        ++j;
      } else if (j + 1 == m) {
        ++i;
      } else if (a[i] <= b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // u_i + v_j = c_ij on basic cells, anchored at u_0 = 0; the basis tree is
  // connected so one sweep reaches every node.
  void recompute_duals() {
    std::vector<char> seen_row(n, 0), seen_col(m, 0);
    std::vector<std::size_t> stack;
    stack.reserve(n + m);
    u[0] = 0.0;
    seen_row[0] = 1;
    stack.push_back(0);
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      if (node < n) {
        for (std::size_t j : row_adj[node]) {
          if (!seen_col[j]) {
            v[j] = A.values[node * m + j] - u[node];
            seen_col[j] = 1;
            stack.push_back(n + j);
          }
        }
      } else {
        const std::size_t j = node - n;
        for (std::size_t i : col_adj[j]) {
          if (!seen_row[i]) {
            u[i] = A.values[i * m + j] - v[j];
            seen_row[i] = 1;
            stack.push_back(i);
          }
        }
      }
    }
  }

  // Dantzig: most negative reduced cost. Bland: first negative in cell
  // order (anti-cycling fallback under degenerate stalls).
  std::size_t find_entering(bool bland) const {
    std::size_t best = kNoCell;
    double best_red = -kOptTol;
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = u[i];
      const double* arow = A.values.data() + i * m;
      const char* brow = basic.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) {
        if (brow[j]) continue;
        const double red = arow[j] - ui - v[j];
        if (red < best_red) {
          if (bland) return i * m + j;
          best_red = red;
          best = i * m + j;
        }
      }
    }
    return best;
  }

  // Unique tree path from row node i0 to column node j0, as basis cells.
  void find_path(std::size_t i0, std::size_t j0,
                 std::vector<std::size_t>& cells) const {
    std::vector<int> parent_node(n + m, -2);
    std::vector<std::size_t> parent_cell(n + m, kNoCell);
    std::vector<std::size_t> queue;
    queue.reserve(n + m);
    queue.push_back(i0);
    parent_node[i0] = -1;
    const std::size_t target = n + j0;
    for (std::size_t qh = 0; qh < queue.size(); ++qh) {
      const std::size_t node = queue[qh];
      if (node == target) break;
      if (node < n) {
        for (std::size_t j : row_adj[node]) {
          if (parent_node[n + j] == -2) {
            parent_node[n + j] = static_cast<int>(node);
            parent_cell[n + j] = node * m + j;
            queue.push_back(n + j);
          }
        }
      } else {
        const std::size_t j = node - n;
        for (std::size_t i : col_adj[j]) {
          if (parent_node[i] == -2) {
            parent_node[i] = static_cast<int>(node);
            parent_cell[i] = i * m + j;
            queue.push_back(i);
          }
        }
      }
    }
    cells.clear();
    std::size_t node = target;
    while (parent_node[node] != -1) {
      cells.push_back(parent_cell[node]);
      node = static_cast<std::size_t>(parent_node[node]);
    }
    std::reverse(cells.begin(), cells.end());
  }
};

}  // namespace

TransportResult solve_exact(std::span<const double> p,
                            std::span<const double> q, const CostMatrix& A) {
  detail::validate_instance(p, q, A);
  const std::size_t n = A.rows;
  const std::size_t m = A.cols;

  Simplex s(p, q, A);

  const long max_pivots = 1000 + 50L * static_cast<long>(n) * static_cast<long>(m);
  long pivots = 0;
  long stall = 0;
  bool bland = false;
  std::vector<std::size_t> path;

  while (true) {
    const std::size_t entering = s.find_entering(bland);
    if (entering == kNoCell) break;
    if (++pivots > max_pivots) {
      throw NumericalError("transportation simplex exceeded its pivot budget");
    }
    const std::size_t ei = entering / m;
    const std::size_t ej = entering % m;

    // Cycle: entering cell (+) plus the tree path; path cells alternate
    // starting with (-) at the entering row.
    s.find_path(ei, ej, path);
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNoCell;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const double f = s.flow[path[k]];
      if (f < theta || (f == theta && path[k] < leaving)) {
        theta = f;
        leaving = path[k];
      }
    }

    s.flow[entering] = theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0) {
        s.flow[path[k]] = std::max(0.0, s.flow[path[k]] - theta);
      } else {
        s.flow[path[k]] += theta;
      }
    }
    s.flow[leaving] = 0.0;
    s.remove_basic(leaving / m, leaving % m);
    s.add_basic(ei, ej);
    s.recompute_duals();

    if (theta <= 1e-15) {
      if (++stall > 2L * static_cast<long>(n + m)) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
  }

  TransportResult result;
  result.rows = n;
  result.cols = m;
  result.plan = std::move(s.flow);
  result.transport_cost =
      kernels::dot(A.values.data(), result.plan.data(), result.plan.size());
  result.entropy = plan_entropy(result.plan);
  result.objective = result.transport_cost;
  result.iterations = static_cast<int>(pivots);
  result.converged = true;
  result.marginal_violation =
      detail::max_marginal_violation(result.plan, n, m, p, q);
  return result;
}

}  // namespace wassret
