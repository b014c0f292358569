#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dissect/series.hpp"

using namespace dissect;

namespace {

const char* kDataDir = DISSECT_DATA_DIR;

// Labelled graphs on n vertices that are outerplanar, by trying every
// cyclic vertex order for a crossing-free convex drawing.
struct SmallGraphCounts {
  long two_connected = 0;
  long connected = 0;
};

SmallGraphCounts count_outerplanar(int n) {
  std::vector<std::pair<int, int>> all;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
  SmallGraphCounts out;
  const int E = static_cast<int>(all.size());
  for (int mask = 0; mask < (1 << E); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < E; ++i)
      if (mask >> i & 1) edges.push_back(all[i]);
    auto connected_without = [&](int removed) {
      std::vector<int> comp(n);
      std::iota(comp.begin(), comp.end(), 0);
      std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
      for (auto [a, b] : edges)
        if (a != removed && b != removed) comp[find(a)] = find(b);
      int roots = 0;
      for (int v = 0; v < n; ++v)
        if (v != removed && find(v) == v) ++roots;
      return roots == 1;
    };
    if (!connected_without(-1)) continue;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    bool outer = false;
    do {
      std::vector<int> pos(n);
      for (int i = 0; i < n; ++i) pos[perm[i]] = i;
      bool ok = true;
      for (std::size_t i = 0; i < edges.size() && ok; ++i)
        for (std::size_t j = i + 1; j < edges.size() && ok; ++j) {
          int a = pos[edges[i].first], b = pos[edges[i].second];
          int c = pos[edges[j].first], d = pos[edges[j].second];
          if (a > b) std::swap(a, b);
          if (c > d) std::swap(c, d);
          if ((a < c && c < b && b < d) || (c < a && a < d && d < b)) ok = false;
        }
      outer = ok;
    } while (!outer && std::next_permutation(perm.begin() + 1, perm.end()));
    if (!outer) continue;
    ++out.connected;
    bool two = n >= 2;
    if (n >= 3)
      for (int v = 0; v < n && two; ++v) two = connected_without(v);
    if (two) ++out.two_connected;
  }
  return out;
}

mpq_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return mpq_class(f);
}

}  // namespace

TEST_CASE("truncated series arithmetic") {
  RatSeries f(6), g(6);
  f[1] = 1;  // z
  auto e = f.exp();
  for (int n = 0; n <= 6; ++n) CHECK(e[n] == 1 / factorial(n));
  g[1] = 1;
  g[2] = 1;
  auto h = g.compose(f);  // g(z)
  CHECK(h == g);
  auto sq = g * g;
  CHECK(sq[2] == 1);
  CHECK(sq[3] == 2);
  CHECK(sq[4] == 1);
  CHECK(g.pow(2) == sq);
  CHECK(g.integrate()[3] == mpq_class(1, 3));
  CHECK(g.integrate().derivative() == g);
  CHECK(g.multiply_by_z().divide_by_z() == g);
  CHECK_THROWS(g.exp().exp());
}

TEST_CASE("unrestricted dissections") {
  auto sol = solve_exact(unrestricted_system(), 10, 1);
  auto d = dbar_to_d(sol[ClassSystem::kMain]);
  CHECK(d.order() == 11);
  std::vector<long> expect = {1, 1, 3, 11, 45, 197, 903, 4279, 20793, 103049};
  for (int n = 2; n <= 11; ++n) CHECK(d[n] == expect[n - 2]);
  CHECK(d[0] == 0);
  CHECK(d[1] == 0);
}

TEST_CASE("solved series satisfy every equation") {
  for (const char* spec : {"C4", "C5", "patternII"}) {
    auto sys = build_system(parse_pattern_set(spec), Mode::Avoiding);
    const int N = 16;
    auto sol = solve_exact(sys, N, 0);
    IntSeries z(N);
    z[1] = 1;
    for (const auto& eq : sys.eqs) {
      IntSeries rhs(N);
      for (const auto& t : eq.terms) {
        IntSeries term(N);
        term[0] = static_cast<long>(t.coeff);
        for (int k = 0; k < t.z; ++k) term = term * z;
        for (auto [v, e] : t.vars)
          for (int k = 0; k < e; ++k) term = term * sol[v];
        rhs += term;
      }
      CHECK_MESSAGE(rhs == sol[eq.lhs], sys.vars[eq.lhs].name);
    }
  }
}

TEST_CASE("fixed-point iteration fixes one more coefficient per step") {
  auto sys = build_system(parse_pattern_set("C4"), Mode::Full);
  const int N = 10;
  auto hist = fixed_point_history(sys, N, 1, N + 6);
  auto online = solve_exact(sys, N, 1);
  for (std::size_t k = 1; k < hist.size(); ++k)
    for (std::size_t v = 0; v < sys.vars.size(); ++v)
      for (int n = 0; n < static_cast<int>(k) && n <= N; ++n)
        CHECK(hist[k][v][n] == hist[k - 1][v][n]);
  for (std::size_t v = 0; v < sys.vars.size(); ++v) CHECK(hist.back()[v] == online[v]);
}

TEST_CASE("triangle-marked series satisfies the eliminated equation") {
  // y = y^3 (1-u) + y^2 (1+u) - y z + z
  auto sys = build_system(parse_pattern_set("C3"), Mode::Full);
  const int N = 20;
  auto y = solve_marked(sys, N)[ClassSystem::kMain];
  MarkedSeries z(N), one_minus_u(N), one_plus_u(N);
  z[1] = UPoly(1);
  one_minus_u[0] = UPoly(1) - UPoly::monomial(1, {1});
  one_plus_u[0] = UPoly(1) + UPoly::monomial(1, {1});
  auto rhs = one_minus_u * y.pow(3) + one_plus_u * y.pow(2) - y * z + z;
  CHECK(rhs == y);
}

TEST_CASE("census agreement") {
  CHECK(census_crosscheck(parse_pattern_set("C3"), 9).ok);
  CHECK(census_crosscheck(parse_pattern_set("C4"), 9).ok);
  CHECK(census_crosscheck(parse_pattern_set("C3,C4"), 8).ok);
  CHECK(census_crosscheck(parse_pattern_set("patternI"), 8).ok);
  CHECK_THROWS(census_crosscheck(parse_pattern_set("C3"), 15));
}

TEST_CASE("polynomial fixtures") {
  auto p3 = load_fixture(std::string(kDataDir) + "/p3.json");
  auto p4 = load_fixture(std::string(kDataDir) + "/p4.json");
  auto d3 = dbar_to_d(solve_marked(build_system(parse_pattern_set("C3"), Mode::Full), 30)[0]);
  auto d4 = dbar_to_d(solve_marked(build_system(parse_pattern_set("C4"), Mode::Full), 20)[0]);
  CHECK(residual_check(p3, d3, 30));
  CHECK(residual_check(p4, d4, 20));
  int bad = -1;
  CHECK_FALSE(residual_check(p4, d3, 30, &bad));
  CHECK(bad > 0);
}

TEST_CASE("outerplanar transfer matches small labelled graphs") {
  auto d = dbar_to_d(solve_exact(unrestricted_system(), 8, 1)[0]);
  auto op = outerplanar_series(d, 6);
  CHECK(op.c_prime[0] == 1);
  for (int n = 2; n <= 5; ++n) {
    auto counts = count_outerplanar(n);
    CHECK(op.b[n] * factorial(n) == counts.two_connected);
    CHECK(op.c[n] * factorial(n) == counts.connected);
    // n! [z^n] B = (n-1)!/2 [z^n] D, except for the single edge
    if (n >= 3) CHECK(op.b[n] * factorial(n) == factorial(n - 1) / 2 * mpq_class(d[n]));
  }
  CHECK(op.c[1] == 1);
}

TEST_CASE("class series count dissections by composite root") {
  for (const char* name : {"C3", "C4"})
    for (Mode mode : {Mode::Full, Mode::Avoiding}) {
      auto rep = partition_crosscheck(parse_pattern_set(name), mode, 10);
      INFO(name, " ", to_string(mode), " ", rep.detail);
      CHECK(rep.ok);
    }
}
