#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nestedvrp/core.hpp"

namespace nvrp {

struct Tour {
  std::vector<int> order;  // 0 ... 0
  double length = 0.0;     // seconds
};

inline double path_length(const std::vector<int>& order, const TimeMatrix& tau) {
  double len = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) len += tau(order[k - 1], order[k]);
  return len;
}

inline constexpr int kTspExactMax = 14;

// Held-Karp over subsets of the non-depot locations.
inline Tour solve_tsp_exact(const TimeMatrix& tau) {
  const int n = tau.size() - 1;
  if (n < 0) throw StructuralError("empty travel matrix");
  if (n > kTspExactMax)
    throw SizeError("exact TSP supports at most " + std::to_string(kTspExactMax) + " locations (got " +
                    std::to_string(n) + "); use solve_tsp_heuristic");
  if (n == 0) return {{0, 0}, 0.0};

  const std::size_t full = std::size_t{1} << n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full * static_cast<std::size_t>(n), inf);
  std::vector<signed char> parent(full * static_cast<std::size_t>(n), -1);
  auto at = [n](std::size_t mask, int j) { return mask * static_cast<std::size_t>(n) + static_cast<std::size_t>(j); };

  for (int j = 0; j < n; ++j) dp[at(std::size_t{1} << j, j)] = tau(0, j + 1);
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1U)) continue;
      const double base = dp[at(mask, j)];
      if (base == inf) continue;
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1U) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = base + tau(j + 1, k + 1);
        if (cand < dp[at(next, k)]) {
          dp[at(next, k)] = cand;
          parent[at(next, k)] = static_cast<signed char>(j);
        }
      }
    }
  }

  double best = inf;
  int last = 0;
  for (int j = 0; j < n; ++j) {
    const double cand = dp[at(full - 1, j)] + tau(j + 1, 0);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }

  std::vector<int> rev;
  std::size_t mask = full - 1;
  int j = last;
  while (j >= 0) {
    rev.push_back(j + 1);
    const int p = parent[at(mask, j)];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  Tour t;
  t.order.push_back(0);
  t.order.insert(t.order.end(), rev.rbegin(), rev.rend());
  t.order.push_back(0);
  t.length = path_length(t.order, tau);
  return t;
}

namespace detail {

// Nearest neighbor from `start` over `pool`; lowest id wins ties.
inline std::vector<int> nearest_neighbor(const TimeMatrix& tau, int start, std::vector<int> pool) {
  std::vector<int> out;
  out.reserve(pool.size());
  int cur = start;
  while (!pool.empty()) {
    std::size_t pick = 0;
    for (std::size_t k = 1; k < pool.size(); ++k) {
      const double dk = tau(cur, pool[k]);
      const double dp = tau(cur, pool[pick]);
      if (dk < dp || (dk == dp && pool[k] < pool[pick])) pick = k;
    }
    cur = pool[pick];
    out.push_back(cur);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace detail

// First-improvement 2-opt on a path whose first and last entries stay fixed.
// `rotate` shifts where each sweep starts.
inline void two_opt_path(std::vector<int>& seq, const TimeMatrix& tau, std::uint64_t rotate = 0) {
  const int m = static_cast<int>(seq.size());
  if (m < 4) return;
  const int inner = m - 2;  // movable positions 1..m-2
  const int shift = static_cast<int>(rotate % static_cast<std::uint64_t>(inner));
  bool improved = true;
  while (improved) {
    improved = false;
    for (int s = 0; s < inner; ++s) {
      const int i = 1 + (s + shift) % inner;
      for (int j = i + 1; j <= m - 2; ++j) {
        const int a = seq[static_cast<std::size_t>(i - 1)];
        const int b = seq[static_cast<std::size_t>(i)];
        const int c = seq[static_cast<std::size_t>(j)];
        const int d = seq[static_cast<std::size_t>(j + 1)];
        const double delta = tau(a, c) + tau(b, d) - tau(a, b) - tau(c, d);
        if (delta < -kTimeEps) {
          std::reverse(seq.begin() + i, seq.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
}

inline Tour solve_tsp_heuristic(const TimeMatrix& tau, std::uint64_t seed = 0) {
  const int n = tau.size() - 1;
  if (n < 0) throw StructuralError("empty travel matrix");
  std::vector<int> pool;
  for (int i = 1; i <= n; ++i) pool.push_back(i);
  Tour t;
  t.order.push_back(0);
  const auto nn = detail::nearest_neighbor(tau, 0, pool);
  t.order.insert(t.order.end(), nn.begin(), nn.end());
  t.order.push_back(0);
  two_opt_path(t.order, tau, seed);
  t.length = path_length(t.order, tau);
  return t;
}

// Order of `interior` for a path fixed at `start` and `end`.
inline std::vector<int> solve_path_heuristic(const TimeMatrix& tau, int start, const std::vector<int>& interior,
                                             int end, std::uint64_t seed = 0) {
  std::vector<int> seq;
  seq.push_back(start);
  const auto nn = detail::nearest_neighbor(tau, start, interior);
  seq.insert(seq.end(), nn.begin(), nn.end());
  seq.push_back(end);
  two_opt_path(seq, tau, seed);
  return {seq.begin() + 1, seq.end() - 1};
}

}  // namespace nvrp
