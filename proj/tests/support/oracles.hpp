#pragma once

// Independent oracles for the solver tests. These deliberately share no code
// with the library: the transport oracle enumerates basic feasible solutions
// of the transportation polytope directly, and the edit-distance oracle is a
// plain recursive definition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

namespace detail {

// Advances pick to the next strictly-increasing combination over [0, cells).
inline bool next_combination(std::vector<std::size_t>& pick,
                             std::size_t cells) {
  const std::size_t k = pick.size();
  for (std::size_t idx = k; idx-- > 0;) {
    if (pick[idx] != cells - k + idx) {
      ++pick[idx];
      for (std::size_t r = idx + 1; r < k; ++r) pick[r] = pick[r - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Enumerates every spanning-tree cell subset (|S| = n+m-1), solves the
// triangular allocation system by peeling leaves, and keeps the best
// feasible cost. The vertices of the transportation polytope are exactly
// these basic solutions, so the minimum over them is the exact optimum.
// Practical for n, m <= 4; exponential beyond that.
inline double min_transport_cost(const std::vector<double>& p,
                                 const std::vector<double>& q,
                                 const std::vector<double>& cost) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  const std::size_t cells = n * m;
  const std::size_t basis_size = n + m - 1;
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> pick(basis_size);
  for (std::size_t k = 0; k < basis_size; ++k) pick[k] = k;

  do {
    // spanning-tree check via union-find over n+m nodes
    std::vector<std::size_t> parent(n + m);
    for (std::size_t v = 0; v < n + m; ++v) parent[v] = v;
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    bool is_tree = true;
    for (std::size_t cell : pick) {
      const std::size_t a = find(cell / m);
      const std::size_t b = find(n + cell % m);
      if (a == b) {
        is_tree = false;
        break;
      }
      parent[a] = b;
    }
    if (!is_tree) continue;

    // peel leaves of the tree to solve for the allocations
    std::vector<double> supply(p);
    std::vector<double> demand(q);
    std::vector<double> alloc(basis_size, 0.0);
    std::vector<char> used(basis_size, 0);
    std::vector<int> row_deg(n, 0), col_deg(m, 0);
    for (std::size_t cell : pick) {
      ++row_deg[cell / m];
      ++col_deg[cell % m];
    }
    for (std::size_t step = 0; step < basis_size; ++step) {
      std::size_t at = basis_size;
      for (std::size_t k = 0; k < basis_size; ++k) {
        if (!used[k] &&
            (row_deg[pick[k] / m] == 1 || col_deg[pick[k] % m] == 1)) {
          at = k;
          break;
        }
      }
      const std::size_t i = pick[at] / m;
      const std::size_t j = pick[at] % m;
      const double amount = row_deg[i] == 1 ? supply[i] : demand[j];
      alloc[at] = amount;
      used[at] = 1;
      supply[i] -= amount;
      demand[j] -= amount;
      --row_deg[i];
      --col_deg[j];
    }

    bool feasible = true;
    double total = 0.0;
    for (std::size_t k = 0; k < basis_size; ++k) {
      if (alloc[k] < -1e-12) {
        feasible = false;
        break;
      }
      total += std::max(0.0, alloc[k]) * cost[pick[k]];
    }
    if (feasible && total < best) best = total;
  } while (detail::next_combination(pick, cells));

  return best;
}

// Textbook recursive edit distance with memoization, over bytes (the tests
// feed it ASCII only).
inline int levenshtein_ref(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    const auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = std::min(self(self, i + 1, j), self(self, i, j + 1)) + 1;
    best = std::min(best, self(self, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1));
    memo[key] = best;
    return best;
  };
  return rec(rec, 0, 0);
}

}  // namespace oracle
