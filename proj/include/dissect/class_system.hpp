#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dissect/composite_roots.hpp"
#include "dissect/pattern.hpp"

namespace dissect {

enum class VarKind {
  Main,   // y, the whole class
  Circ,   // y_circ, big root polygon or a single edge
  Root,   // one composite-root class, or a merged group of them
  Group,  // sum of the classes sharing one interface near the attachment edge
  Block,  // attachment polynomial for a block of interacting Free edges
};

const char* to_string(VarKind k);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Root;
  std::vector<std::string> members;  // root names merged into this variable
};

struct Term {
  std::int64_t coeff = 1;
  int z = 0;
  std::vector<int> u;                     // one exponent per pattern
  std::vector<std::pair<int, int>> vars;  // (variable, power), sorted by variable

  int degree() const;
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

struct Equation {
  int lhs = 0;
  std::vector<Term> terms;
  bool operator==(const Equation&) const = default;
};

struct ClassSystem {
  std::vector<std::string> patterns;
  int h = 0;
  Mode mode = Mode::Full;
  std::vector<Variable> vars;
  std::vector<Equation> eqs;  // eqs[i].lhs == i

  int num_u() const { return static_cast<int>(patterns.size()); }
  int index_of(const std::string& name) const;  // -1 when absent
  static constexpr int kMain = 0;
  static constexpr int kCirc = 1;
};

struct BuildOptions {
  RootOptions roots;
  bool group = true;
};

// Polynomial system for the classes of the decomposition.  Interactions on
// Free edges are grouped into blocks of edges that can share a pattern copy;
// each block contributes one factor.  In Avoiding mode terms carrying a
// positive u-exponent are dropped.
ClassSystem build_system(const PatternSet& set, Mode mode, const BuildOptions& opt = {});
ClassSystem build_system(const PatternSet& set, Mode mode, const std::vector<CompositeRoot>& roots,
                         const BuildOptions& opt = {});

// Unrestricted dissections alone: y = y^2/(1-y) + z in signed polynomial form.
ClassSystem unrestricted_system();

// Merges Root variables with identical equations and identical usage.
ClassSystem group_classes(const ClassSystem& sys);

// Per pattern: nullopt keeps u_i symbolic, 0 or 1 substitutes.
ClassSystem specialize(const ClassSystem& sys, const std::vector<std::optional<int>>& u);

// Checks every equation is consistent and that the system can be solved
// coefficient by coefficient; throws MalformedSystem otherwise.
void validate(const ClassSystem& sys);
bool strongly_connected(const ClassSystem& sys);

std::string to_text(const ClassSystem& sys);
nlohmann::json to_json(const ClassSystem& sys);
ClassSystem system_from_json(const nlohmann::json& j);

}  // namespace dissect
