#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dissect/dissection.hpp"

namespace dissect {

// A forbidden or marked subgraph: a 2-connected outerplanar graph, given by
// one of its dissections.  Its Hamilton cycle is unique, so copies in a host
// are determined by a host cycle plus a chord set inside it.
struct Pattern {
  std::string name;
  Dissection graph;
  // Distinct images of the chord set under the dihedral group of the
  // Hamilton cycle, as sorted lists of cycle position pairs.
  std::vector<std::vector<std::pair<int, int>>> chord_orbit;

  int size() const { return graph.size(); }
  int automorphisms() const { return 2 * size() / static_cast<int>(chord_orbit.size()); }
};

using PatternSet = std::vector<Pattern>;

Pattern make_pattern(const std::string& name, const Dissection& graph);
Pattern cycle_pattern(int k);
// "C<k>", "patternI" (4-cycle with a chord), "patternII" (5-cycle with a chord).
Pattern named_pattern(const std::string& name);
// Comma separated names, or a JSON file path when the argument ends in .json.
PatternSet parse_pattern_set(const std::string& spec);
PatternSet load_pattern_file(const std::string& path);
std::string pattern_set_name(const PatternSet& set);

bool isomorphic(const Pattern& p, const Pattern& q);

// Largest pattern size.
int h_delta(const PatternSet& set);

int count_occurrences(const Shape& host, const Pattern& p);
int count_occurrences(const Dissection& host, const Pattern& p);
std::vector<int> occurrence_vector(const Shape& host, const PatternSet& set);

// Number of connected sets of faces whose union is bounded by a k-cycle.
int count_cycles_via_faces(const Shape& host, int k);

// Joint distribution of occurrence vectors over all dissections of the
// n-gon.  Refuses n above `limit`.
std::map<std::vector<int>, std::uint64_t> occurrence_census(const PatternSet& set, int n,
                                                            int limit = 14);

}  // namespace dissect
