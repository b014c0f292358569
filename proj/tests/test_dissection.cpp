#include <doctest.h>

#include <set>

#include "dissect/dissection.hpp"
#include "dissect/error.hpp"

using namespace dissect;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

// Dissections of the n-gon with j diagonals: C(n-3,j) C(n+j-1,j) / (j+1).
unsigned long long dissection_count(int n) {
  auto binom = [](long long a, long long b) {
    if (b < 0 || b > a) return 0ULL;
    unsigned long long r = 1;
    for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  if (n == 2) return 1;
  unsigned long long total = 0;
  for (int j = 0; j <= n - 3; ++j) total += binom(n - 3, j) * binom(n + j - 1, j) / (j + 1);
  return total;
}

}  // namespace

TEST_CASE("make_dissection rejects malformed chord sets") {
  CHECK(kind_of([] { make_dissection(5, {{1, 3}, {2, 4}}); }) == ErrorKind::CrossingChords);
  CHECK(kind_of([] { make_dissection(5, {{1, 3}, {3, 1}}); }) == ErrorKind::DuplicateChord);
  CHECK(kind_of([] { make_dissection(5, {{1, 5}}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { make_dissection(5, {{2, 3}}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { make_dissection(5, {{0, 3}}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { make_dissection(5, {{2, 6}}); }) == ErrorKind::OutOfRange);
}

TEST_CASE("fan faces and dual tree") {
  auto d = make_dissection(5, {{1, 3}, {1, 4}});
  auto faces = d.faces();
  REQUIRE(faces.size() == 3);
  CHECK(faces[0].vertices == std::vector<int>{1, 2, 3});
  CHECK(faces[1].vertices == std::vector<int>{1, 3, 4});
  CHECK(faces[2].vertices == std::vector<int>{1, 4, 5});
  CHECK(d.dual_edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(d.outer_edges() == std::vector<Chord>{{2, 3}, {3, 4}, {4, 5}, {5, 1}});
}

TEST_CASE("face count is chords plus one") {
  for (int n = 3; n <= 9; ++n)
    for (const auto& d : enumerate_dissections(n)) {
      CHECK(d.faces().size() == d.chords().size() + 1);
      int sum = 0;
      for (const auto& f : d.faces()) sum += static_cast<int>(f.vertices.size());
      // every chord is shared by two faces, every side lies on one
      CHECK(sum == n + 2 * static_cast<int>(d.chords().size()));
    }
}

TEST_CASE("enumeration matches the closed-form dissection count") {
  for (int n = 2; n <= 11; ++n) {
    auto all = enumerate_dissections(n);
    CHECK(all.size() == dissection_count(n));
    std::set<std::vector<Chord>> distinct;
    for (const auto& d : all) distinct.insert(d.chords());
    CHECK(distinct.size() == all.size());
  }
  unsigned long long count = 0;
  for_each_shape(12, [&](const Shape&) { ++count; });
  CHECK(count == dissection_count(12));
  CHECK(count == 518859ULL);
}

TEST_CASE("chord form and recursive form round trip") {
  for (int n = 2; n <= 9; ++n)
    for (const auto& d : enumerate_dissections(n)) {
      auto again = make_dissection(n, d.chords());
      CHECK(again == d);
      CHECK(again.shape() == d.shape());
      CHECK(d.shape().vertex_count() == n);
    }
}

TEST_CASE("glue places the attachment on the chosen side") {
  auto tri = make_dissection(3, {});
  CHECK(glue(tri, {2, 3}, tri) == make_dissection(4, {{2, 4}}));
  CHECK(glue(tri, {3, 1}, tri) == make_dissection(4, {{1, 3}}));
  auto sq = make_dissection(4, {});
  auto g = glue(make_dissection(5, {{1, 3}}), {4, 5}, sq);
  CHECK(g == make_dissection(7, {{1, 3}, {4, 7}}));
  CHECK(glue(sq, {3, 4}, Dissection{}) == sq);
  CHECK(kind_of([&] { glue(tri, {1, 2}, tri); }) == ErrorKind::RootEdgeGlue);
  CHECK(kind_of([&] { glue(sq, {1, 3}, tri); }) == ErrorKind::NotOuterEdge);
  CHECK(kind_of([&] { glue(Dissection{}, {1, 2}, tri); }) == ErrorKind::RootEdgeGlue);
}

TEST_CASE("path counts and truncation") {
  // square root, triangle child on its middle side, triangle grandchild
  auto d = make_dissection(6, {{3, 6}, {4, 6}});
  const Shape& s = d.shape();
  REQUIRE(s.face_count() == 3);
  CHECK(s.path_count(0) == 4);
  CHECK(s.path_count(1) == 5);
  CHECK(s.path_count(2) == 6);
  CHECK(s.truncated(5).face_count() == 2);
  CHECK(s.truncated(3).empty());
  CHECK(s.truncated(6) == s);
}
