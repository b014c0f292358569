#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dissect/dissection.hpp"
#include "dissect/pattern.hpp"

namespace dissect {

enum class Mode { Full, Avoiding };
enum class EdgeClass { Free, Restricted };

const char* to_string(Mode m);
const char* to_string(EdgeClass c);

struct CompositeRoot {
  Shape shape;
  int root_polygon = 0;
  int ordinal = 0;  // 1-based among roots with the same root polygon
  std::vector<Slot> outer_slots;  // boundary order, (2,3) first
  std::vector<EdgeClass> edge_class;
  bool maximal = false;
  std::vector<int> occurrences;

  std::string name() const { return std::to_string(root_polygon) + "[" + std::to_string(ordinal) + "]"; }
  Dissection dissection() const { return Dissection::from_shape(shape); }
  std::vector<Chord> outer_edges() const { return dissection().outer_edges(); }
  std::vector<int> free_edges() const;  // indices into outer_slots
  int restricted_count() const;
};

struct RootOptions {
  std::size_t max_roots = 200000;
};

// Every face has at most h vertices, and only faces whose dual path from the
// root face spans fewer than h vertices carry children.
bool is_composite_root(const Shape& s, int h);
bool is_composite_root(const Dissection& d, int h);

// An outer edge is Restricted when gluing some polygon of size 3..h onto it
// still gives a composite root.
std::vector<EdgeClass> classify_edges(const Shape& s, int h);

// True when `bigger` arises from `smaller` by gluing polygons onto bare sides.
bool is_extension(const Shape& bigger, const Shape& smaller);

// Breadth-first gluing of polygons of size 3..h, deduplicated by shape.  In
// Avoiding mode roots containing a pattern are pruned.  Ordered by root
// polygon size, then by discovery.
std::vector<CompositeRoot> generate_composite_roots(const PatternSet& set, Mode mode,
                                                    const RootOptions& opt = {});

// Composite root of a dissection: the faces reachable from the root face
// through parents of path count below h, all of size at most h.  Empty when
// the root face itself is larger than h (the big-root class).
Shape root_part(const Shape& s, int h);

// Attachment choice for a Free edge: kCirc for the big-root class, otherwise
// an index into the catalog.
inline constexpr int kCirc = -1;

// Occurrence vector of nu with catalog representatives glued on its Free
// edges, minus the occurrences inside the representatives.
std::vector<int> interaction_exponents(const CompositeRoot& nu, const std::vector<int>& assignment,
                                       const std::vector<CompositeRoot>& catalog,
                                       const PatternSet& set);

struct InteractionTerm {
  std::vector<int> edges;  // positions in the Free edge list
  std::vector<int> q;
};

// Moebius decomposition of interaction_exponents over subsets of the edges
// that carry a non-circ attachment, limited to subsets of size <= max_size.
std::vector<InteractionTerm> interaction_decomposition(const CompositeRoot& nu,
                                                       const std::vector<int>& assignment,
                                                       const std::vector<CompositeRoot>& catalog,
                                                       const PatternSet& set, int max_size);

}  // namespace dissect
