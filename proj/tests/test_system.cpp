#include <doctest.h>

#include "dissect/class_system.hpp"
#include "dissect/error.hpp"
#include "dissect/series.hpp"

using namespace dissect;

namespace {

std::string equation_text(const ClassSystem& sys, const std::string& lhs) {
  std::string text = to_text(sys);
  auto pos = text.find("\n" + lhs + " = ");
  REQUIRE(pos != std::string::npos);
  auto end = text.find('\n', pos + 1);
  return text.substr(pos + 1, end - pos - 1);
}

}  // namespace

TEST_CASE("triangle system in full mode") {
  auto sys = build_system(parse_pattern_set("C3"), Mode::Full);
  CHECK(equation_text(sys, "y") == "y = y_circ + y_3[1]");
  CHECK(equation_text(sys, "y_circ") == "y_circ = y*y_circ + y^3 + z - z*y");
  CHECK(equation_text(sys, "y_3[1]") == "y_3[1] = u*S0^2");
  CHECK(equation_text(sys, "S0") == "S0 = y_circ + y_3[1]");
  CHECK(strongly_connected(sys));
}

TEST_CASE("avoidance systems have the expected shape") {
  auto c4 = build_system(parse_pattern_set("C4"), Mode::Avoiding);
  CHECK(c4.vars.size() == 3);
  CHECK(equation_text(c4, "y_3[1]") == "y_3[1] = y_circ^2");
  CHECK(equation_text(c4, "y_circ") == "y_circ = y*y_circ + y^4 + z - z*y");

  auto c5 = build_system(parse_pattern_set("C5"), Mode::Avoiding);
  CHECK(equation_text(c5, "y_4[8]") == "y_4[8] = W1^9");
  CHECK(equation_text(c5, "W1") == "W1 = y_circ + S4");
  CHECK(equation_text(c5, "y_4[2-4]") == "y_4[2-4] = 3*y_circ^2*W1^3");
  CHECK(equation_text(c5, "y_3[2,3]") == "y_3[2,3] = 2*y_circ^3");
}

TEST_CASE("every generated system is strongly connected") {
  for (const char* spec : {"C3", "C4", "C5", "patternI", "patternII", "C3,C4"})
    for (Mode mode : {Mode::Full, Mode::Avoiding}) {
      auto sys = build_system(parse_pattern_set(spec), mode);
      if (sys.vars.size() > 1) CHECK_MESSAGE(strongly_connected(sys), spec);
    }
  CHECK(strongly_connected(build_system(parse_pattern_set("C6"), Mode::Avoiding)));
}

TEST_CASE("grouping preserves the solution") {
  for (const char* spec : {"C4", "C3,C4", "patternI"}) {
    auto set = parse_pattern_set(spec);
    BuildOptions raw;
    raw.group = false;
    auto a = solve_marked(build_system(set, Mode::Full, raw), 14);
    auto b = solve_marked(build_system(set, Mode::Full), 14);
    CHECK(a[ClassSystem::kMain] == b[ClassSystem::kMain]);
  }
  auto trivial = build_system(parse_pattern_set("C3"), Mode::Full);
  CHECK(to_json(group_classes(trivial)) == to_json(trivial));
}

TEST_CASE("specialization at u=0 and u=1") {
  for (const char* spec : {"C3", "C4", "patternI"}) {
    auto set = parse_pattern_set(spec);
    auto full = build_system(set, Mode::Full);
    std::vector<std::optional<int>> zero(set.size(), 0), one(set.size(), 1);
    auto at0 = solve_exact(specialize(full, zero), 18, 0);
    auto avoid = solve_exact(build_system(set, Mode::Avoiding), 18, 0);
    CHECK(at0[ClassSystem::kMain] == avoid[ClassSystem::kMain]);
    auto at1 = solve_exact(specialize(full, one), 18, 1);
    auto plain = solve_exact(unrestricted_system(), 18, 1);
    CHECK(at1[ClassSystem::kMain] == plain[ClassSystem::kMain]);
  }
}

TEST_CASE("json round trip and validation") {
  auto sys = build_system(parse_pattern_set("C4"), Mode::Full);
  auto back = system_from_json(to_json(sys));
  CHECK(to_json(back) == to_json(sys));
  CHECK(to_text(back) == to_text(sys));

  ClassSystem bad = unrestricted_system();
  bad.eqs[1].terms.push_back(bad.eqs[0].terms[0]);  // y_circ = ... + y_circ
  bad.eqs[1].terms.back().vars = {{0, 1}};
  CHECK_THROWS_AS(validate(bad), Error);
  ClassSystem neg = unrestricted_system();
  neg.eqs[0].terms[0].coeff = -1;
  CHECK_THROWS_AS(validate(neg), Error);
}
