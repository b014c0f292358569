#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dissect/error.hpp"
#include "dissect/pattern.hpp"

using namespace dissect;

namespace {

// Copies of p in d by brute force: injective vertex maps preserving edges,
// divided by the automorphism count of p.
long long brute_force_copies(const Dissection& d, const Dissection& p) {
  const int n = d.size(), k = p.size();
  auto edges_of = [](const Dissection& g) {
    std::vector<std::vector<bool>> e(g.size() + 1, std::vector<bool>(g.size() + 1, false));
    for (int i = 1; i <= g.size(); ++i) {
      int j = i % g.size() + 1;
      e[i][j] = e[j][i] = true;
    }
    for (const auto& c : g.chords()) e[c.a][c.b] = e[c.b][c.a] = true;
    return e;
  };
  auto ed = edges_of(d), ep = edges_of(p);
  auto count_maps = [&](const std::vector<std::vector<bool>>& host, int hn) {
    long long maps = 0;
    std::vector<int> img(k + 1, 0);
    std::vector<bool> used(hn + 1, false);
    auto rec = [&](auto&& self, int v) -> void {
      if (v > k) {
        ++maps;
        return;
      }
      for (int w = 1; w <= hn; ++w) {
        if (used[w]) continue;
        bool ok = true;
        for (int u = 1; u < v && ok; ++u)
          if (ep[u][v] && !host[img[u]][w]) ok = false;
        if (!ok) continue;
        used[w] = true;
        img[v] = w;
        self(self, v + 1);
        used[w] = false;
      }
    };
    rec(rec, 1);
    return maps;
  };
  long long aut = 0;
  {
    // automorphisms: maps of p into itself that preserve edges and non-edges
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      bool ok = true;
      for (int a = 1; a <= k && ok; ++a)
        for (int b = 1; b <= k && ok; ++b)
          if (ep[a][b] != ep[perm[a - 1]][perm[b - 1]]) ok = false;
      if (ok) ++aut;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return count_maps(ed, n) / aut;
}

}  // namespace

TEST_CASE("named patterns") {
  CHECK(named_pattern("C3").size() == 3);
  CHECK(named_pattern("C4").automorphisms() == 8);
  CHECK(named_pattern("patternI").automorphisms() == 4);
  CHECK(named_pattern("patternII").automorphisms() == 2);
  CHECK(h_delta(parse_pattern_set("C3,C6,patternI")) == 6);
  CHECK_THROWS_AS(named_pattern("C2"), Error);
  CHECK_THROWS_AS(parse_pattern_set("C4,C4"), Error);
  CHECK_THROWS_AS(make_pattern("x", Dissection{}), Error);
}

TEST_CASE("occurrence counts agree with brute-force subgraph counting") {
  std::vector<Pattern> pats = {named_pattern("C3"), named_pattern("C4"), named_pattern("C5"),
                               named_pattern("patternI"), named_pattern("patternII"),
                               make_pattern("fan5", make_dissection(5, {{1, 3}, {1, 4}}))};
  for (int n = 3; n <= 8; ++n)
    for (const auto& d : enumerate_dissections(n))
      for (const auto& p : pats) {
        if (p.size() > n) continue;
        CHECK_MESSAGE(count_occurrences(d, p) == brute_force_copies(d, p.graph),
                      to_string(d) << " " << p.name);
      }
}

TEST_CASE("cycle counts equal face-region counts") {
  for (int n = 3; n <= 9; ++n)
    for (const auto& d : enumerate_dissections(n))
      for (int k = 3; k <= 7; ++k)
        CHECK(count_occurrences(d, cycle_pattern(k)) == count_cycles_via_faces(d.shape(), k));
}

TEST_CASE("census totals and limit") {
  auto census = occurrence_census(parse_pattern_set("C3"), 8);
  std::uint64_t total = 0;
  for (const auto& [v, c] : census) total += c;
  CHECK(total == 903);
  CHECK_THROWS_AS(occurrence_census(parse_pattern_set("C3"), 15), Error);
}
