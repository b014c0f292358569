#include "dissect/composite_roots.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "dissect/error.hpp"

namespace dissect {

const char* to_string(Mode m) { return m == Mode::Full ? "full" : "avoid"; }
const char* to_string(EdgeClass c) { return c == EdgeClass::Free ? "Free" : "Restricted"; }

std::vector<int> CompositeRoot::free_edges() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edge_class.size(); ++i)
    if (edge_class[i] == EdgeClass::Free) out.push_back(static_cast<int>(i));
  return out;
}

int CompositeRoot::restricted_count() const {
  return static_cast<int>(std::count(edge_class.begin(), edge_class.end(), EdgeClass::Restricted));
}

bool is_composite_root(const Shape& s, int h) {
  if (s.empty()) return false;
  for (int v = 0; v < s.face_count(); ++v) {
    const auto& f = s.node(v);
    if (f.size > h) return false;
    if (f.parent >= 0 && s.path_count(f.parent) >= h) return false;
  }
  return true;
}

bool is_composite_root(const Dissection& d, int h) { return is_composite_root(d.shape(), h); }

std::vector<EdgeClass> classify_edges(const Shape& s, int h) {
  std::vector<EdgeClass> out;
  for (const Slot& slot : s.bare_slots()) {
    bool extendable = false;
    for (int k = 3; k <= h && !extendable; ++k)
      extendable = is_composite_root(s.glued(slot, Shape::polygon(k)), h);
    out.push_back(extendable ? EdgeClass::Restricted : EdgeClass::Free);
  }
  return out;
}

Shape root_part(const Shape& s, int h) {
  if (s.empty() || s.node(0).size > h) return Shape{};
  std::vector<FaceNode> nodes = s.nodes();
  for (int v = 0; v < s.face_count(); ++v)
    for (int& c : nodes[v].child)
      if (c >= 0 && (s.path_count(v) >= h || s.node(c).size > h)) c = -1;
  return Shape::from_nodes(std::move(nodes));
}

bool is_extension(const Shape& bigger, const Shape& smaller) {
  if (smaller.empty()) return true;
  if (bigger.empty()) return false;
  auto match = [&](auto&& self, int b, int s) -> bool {
    const auto& fb = bigger.node(b);
    const auto& fs = smaller.node(s);
    if (fb.size != fs.size) return false;
    for (std::size_t i = 0; i < fs.child.size(); ++i) {
      if (fs.child[i] < 0) continue;
      if (fb.child[i] < 0 || !self(self, fb.child[i], fs.child[i])) return false;
    }
    return true;
  };
  return match(match, 0, 0);
}

std::vector<CompositeRoot> generate_composite_roots(const PatternSet& set, Mode mode,
                                                    const RootOptions& opt) {
  const int h = h_delta(set);
  if (h < 3) throw Error(ErrorKind::InvalidPattern, "empty pattern set");
  std::vector<Shape> found;
  std::unordered_set<std::string> seen;
  std::deque<Shape> queue;
  auto admit = [&](Shape s) {
    if (mode == Mode::Avoiding) {
      for (const auto& p : set)
        if (count_occurrences(s, p) > 0) return;
    }
    if (!seen.insert(s.key()).second) return;
    if (found.size() >= opt.max_roots)
      throw Error(ErrorKind::CapExceeded,
                  "more than " + std::to_string(opt.max_roots) + " composite roots");
    found.push_back(s);
    queue.push_back(std::move(s));
  };
  for (int k = 3; k <= h; ++k) admit(Shape::polygon(k));
  while (!queue.empty()) {
    Shape s = std::move(queue.front());
    queue.pop_front();
    for (const Slot& slot : s.bare_slots()) {
      if (s.path_count(slot.node) >= h) continue;
      for (int k = 3; k <= h; ++k) admit(s.glued(slot, Shape::polygon(k)));
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Shape& a, const Shape& b) {
    return a.node(0).size < b.node(0).size;
  });
  std::vector<CompositeRoot> out;
  out.reserve(found.size());
  int prev = 0, ordinal = 0;
  for (auto& s : found) {
    CompositeRoot r;
    r.root_polygon = s.node(0).size;
    ordinal = r.root_polygon == prev ? ordinal + 1 : 1;
    prev = r.root_polygon;
    r.ordinal = ordinal;
    r.outer_slots = s.bare_slots();
    r.edge_class.reserve(r.outer_slots.size());
    for (const Slot& slot : r.outer_slots)
      r.edge_class.push_back(s.path_count(slot.node) < h ? EdgeClass::Restricted : EdgeClass::Free);
    r.maximal = std::all_of(r.edge_class.begin(), r.edge_class.end(),
                            [](EdgeClass c) { return c == EdgeClass::Free; });
    r.occurrences = occurrence_vector(s, set);
    r.shape = std::move(s);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

Shape assemble(const CompositeRoot& nu, const std::vector<int>& assignment,
               const std::vector<CompositeRoot>& catalog, std::vector<int>* inner) {
  auto free = nu.free_edges();
  if (assignment.size() != free.size())
    throw Error(ErrorKind::InvalidInput, "assignment length differs from the Free edge count");
  Shape s = nu.shape;
  // Glue from the last slot backwards so the remaining slots keep their meaning.
  for (int i = static_cast<int>(free.size()) - 1; i >= 0; --i) {
    int c = assignment[i];
    if (c == kCirc) continue;
    if (c < 0 || c >= static_cast<int>(catalog.size()))
      throw Error(ErrorKind::InvalidInput, "class index out of range");
    const Slot slot = s.bare_slots()[free[i]];
    s = s.glued(slot, catalog[c].shape);
    if (inner) inner->push_back(c);
  }
  return s;
}

}  // namespace

std::vector<int> interaction_exponents(const CompositeRoot& nu, const std::vector<int>& assignment,
                                       const std::vector<CompositeRoot>& catalog,
                                       const PatternSet& set) {
  std::vector<int> used;
  Shape s = assemble(nu, assignment, catalog, &used);
  std::vector<int> p = occurrence_vector(s, set);
  for (int c : used)
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= catalog[c].occurrences[j];
  return p;
}

std::vector<InteractionTerm> interaction_decomposition(const CompositeRoot& nu,
                                                       const std::vector<int>& assignment,
                                                       const std::vector<CompositeRoot>& catalog,
                                                       const PatternSet& set, int max_size) {
  std::vector<int> support;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != kCirc) support.push_back(static_cast<int>(i));
  const int m = static_cast<int>(support.size());
  if (m > 20) throw Error(ErrorKind::InvalidInput, "too many attachments for a full decomposition");
  const std::size_t full = std::size_t{1} << m;
  // p on every restriction of the assignment, indexed by subset mask.
  std::vector<std::vector<int>> p(full);
  std::vector<bool> needed(full, false);
  for (std::size_t mask = 0; mask < full; ++mask)
    needed[mask] = __builtin_popcountll(mask) <= max_size;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!needed[mask]) continue;
    std::vector<int> a(assignment.size(), kCirc);
    for (int b = 0; b < m; ++b)
      if (mask >> b & 1) a[support[b]] = assignment[support[b]];
    p[mask] = interaction_exponents(nu, a, catalog, set);
  }
  std::vector<InteractionTerm> out;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!needed[mask]) continue;
    std::vector<int> q(set.size(), 0);
    // sum over submasks t of mask with sign (-1)^{|mask \ t|}
    for (std::size_t t = mask;; t = (t - 1) & mask) {
      int sign = (__builtin_popcountll(mask ^ t) & 1) ? -1 : 1;
      for (std::size_t j = 0; j < q.size(); ++j) q[j] += sign * p[t][j];
      if (t == 0) break;
    }
    InteractionTerm term;
    for (int b = 0; b < m; ++b)
      if (mask >> b & 1) term.edges.push_back(support[b]);
    term.q = std::move(q);
    out.push_back(std::move(term));
  }
  return out;
}

}  // namespace dissect
