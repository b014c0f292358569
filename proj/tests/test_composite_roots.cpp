#include <doctest.h>

#include <algorithm>
#include <random>

#include "dissect/composite_roots.hpp"
#include "dissect/error.hpp"

using namespace dissect;

namespace {

int count_maximal(const std::vector<CompositeRoot>& roots) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                        [](const CompositeRoot& r) { return r.maximal; }));
}

std::vector<std::string> names(const std::vector<CompositeRoot>& roots) {
  std::vector<std::string> out;
  for (const auto& r : roots) out.push_back(r.name());
  return out;
}

}  // namespace

TEST_CASE("catalog sizes for small pattern sets") {
  auto c3 = generate_composite_roots(parse_pattern_set("C3"), Mode::Full);
  REQUIRE(c3.size() == 1);
  CHECK(c3[0].name() == "3[1]");
  CHECK(c3[0].free_edges().size() == 2);
  CHECK(c3[0].occurrences == std::vector<int>{1});

  auto c4 = generate_composite_roots(parse_pattern_set("C4"), Mode::Full);
  CHECK(c4.size() == 10);
  CHECK(std::count_if(c4.begin(), c4.end(), [](auto& r) { return r.root_polygon == 3; }) == 9);
  CHECK(count_maximal(c4) == 5);
  CHECK(c4.back().name() == "4[1]");

  CHECK(generate_composite_roots(parse_pattern_set("C3"), Mode::Avoiding).empty());
  auto a4 = generate_composite_roots(parse_pattern_set("C4"), Mode::Avoiding);
  CHECK(names(a4) == std::vector<std::string>{"3[1]"});

  auto a5 = generate_composite_roots(parse_pattern_set("C5"), Mode::Avoiding);
  CHECK(a5.size() == 11);
  CHECK(count_maximal(a5) == 1);
  CHECK(a5.back().name() == "4[8]");
  CHECK(a5.back().maximal);

  auto ai = generate_composite_roots(parse_pattern_set("patternI"), Mode::Avoiding);
  CHECK(ai.size() == 5);

  CHECK(generate_composite_roots(parse_pattern_set("C5"), Mode::Full).size() == 426);
  CHECK_THROWS_AS(generate_composite_roots(parse_pattern_set("C6"), Mode::Full, {1000}), Error);
}

TEST_CASE("edge classes agree with the glue test and maximality with extensions") {
  for (const char* spec : {"C4", "C5", "patternI", "C3,C4"}) {
    auto set = parse_pattern_set(spec);
    const int h = h_delta(set);
    auto roots = generate_composite_roots(set, Mode::Full);
    for (const auto& r : roots) {
      CHECK(is_composite_root(r.shape, h));
      CHECK(classify_edges(r.shape, h) == r.edge_class);
      bool extended = std::any_of(roots.begin(), roots.end(), [&](const CompositeRoot& o) {
        return !(o.shape == r.shape) && is_extension(o.shape, r.shape);
      });
      CHECK(r.maximal == !extended);
    }
  }
}

TEST_CASE("composite root membership") {
  CHECK(is_composite_root(make_dissection(5, {{1, 3}}), 4));
  CHECK_FALSE(is_composite_root(make_dissection(5, {}), 4));
  // triangle, triangle, triangle chain: third face hangs off a face spanning 4 vertices
  CHECK_FALSE(is_composite_root(make_dissection(5, {{1, 3}, {1, 4}}), 4));
  CHECK(is_composite_root(make_dissection(5, {{1, 3}, {1, 4}}), 5));
  CHECK_FALSE(is_composite_root(Dissection{}, 4));
}

TEST_CASE("interaction exponents of a bare root equal its occurrences") {
  auto set = parse_pattern_set("C4");
  auto roots = generate_composite_roots(set, Mode::Full);
  for (const auto& r : roots) {
    std::vector<int> circ(r.free_edges().size(), kCirc);
    CHECK(interaction_exponents(r, circ, roots, set) == r.occurrences);
  }
}

TEST_CASE("interactions truncated at H - 3 attachments equal the direct count") {
  // A copy of a pattern on at most H vertices meets the root polygon in at
  // least three vertices, so it reaches at most H - 3 attachments.
  std::mt19937 rng(11);
  for (const char* name : {"C3", "C4", "C5"}) {
    auto set = parse_pattern_set(name);
    const int h = h_delta(set);
    auto roots = generate_composite_roots(set, Mode::Full);
    std::uniform_int_distribution<int> pick(-1, static_cast<int>(roots.size()) - 1);
    for (int trial = 0; trial < 60; ++trial) {
      const auto& nu = roots[trial % roots.size()];
      std::vector<int> a(nu.free_edges().size());
      for (int& x : a) x = pick(rng);
      auto direct = interaction_exponents(nu, a, roots, set);
      std::vector<int> sum(set.size(), 0);
      for (const auto& t : interaction_decomposition(nu, a, roots, set, h - 3))
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += t.q[j];
      CHECK(sum == direct);
    }
  }
}
