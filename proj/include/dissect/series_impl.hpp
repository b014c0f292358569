#pragma once

// Template part of series.hpp.

#include <map>
#include <vector>

namespace dissect {

namespace detail {

// Products of variables shared between terms: node k < nvars is variable k,
// later nodes multiply two earlier nodes.
struct ProductPlan {
  int nvars = 0;
  std::vector<std::pair<int, int>> prods;  // for node nvars + i
  std::vector<std::vector<std::pair<int, int>>> term_node;  // per equation: (term, node or -1)
  std::vector<int> order;  // variables, linear dependencies first
};

ProductPlan plan_products(const ClassSystem& sys);

}  // namespace detail

template <class C>
std::vector<TruncSeries<C>> solve_series(const ClassSystem& sys, int N,
                                         const std::function<C(const Term&)>& weight) {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "truncation order must be positive");
  validate(sys);
  const detail::ProductPlan plan = detail::plan_products(sys);
  const int nv = plan.nvars;
  const int nodes = nv + static_cast<int>(plan.prods.size());
  std::vector<std::vector<C>> val(nodes, std::vector<C>(N + 1, C(0)));

  struct Entry {
    C w;
    int z;
    int node;  // -1 for a pure power of z
  };
  std::vector<std::vector<Entry>> entries(nv);
  for (int v = 0; v < nv; ++v)
    for (const auto& [ti, node] : plan.term_node[v]) {
      const Term& t = sys.eqs[v].terms[ti];
      C w = weight(t);
      if (w == C(0)) continue;
      entries[v].push_back({std::move(w), t.z, node});
    }

  for (int n = 1; n <= N; ++n) {
    // Products only need coefficients below n since every factor has
    // valuation at least one.
    for (int k = 0; k < static_cast<int>(plan.prods.size()); ++k) {
      const auto& [a, b] = plan.prods[k];
      C acc(0);
      for (int j = 1; j < n; ++j) {
        const C& x = val[a][j];
        if (x == C(0)) continue;
        const C& y = val[b][n - j];
        if (y == C(0)) continue;
        acc += x * y;
      }
      val[nv + k][n] = std::move(acc);
    }
    for (int v : plan.order) {
      C acc(0);
      for (const auto& e : entries[v]) {
        int m = n - e.z;
        if (e.node < 0) {
          if (m == 0) acc += e.w;
          continue;
        }
        if (m < 1) continue;
        const C& x = val[e.node][m];
        if (x == C(0)) continue;
        acc += e.w * x;
      }
      val[v][n] = std::move(acc);
    }
  }
  std::vector<TruncSeries<C>> out;
  out.reserve(nv);
  for (int v = 0; v < nv; ++v) out.emplace_back(N, std::move(val[v]));
  return out;
}

}  // namespace dissect
