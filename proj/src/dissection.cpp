#include "dissect/dissection.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "dissect/error.hpp"

namespace dissect {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CrossingChords: return "CrossingChords";
    case ErrorKind::DuplicateChord: return "DuplicateChord";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotOuterEdge: return "NotOuterEdge";
    case ErrorKind::RootEdgeGlue: return "RootEdgeGlue";
    case ErrorKind::InvalidPattern: return "InvalidPattern";
    case ErrorKind::OracleLimitExceeded: return "OracleLimitExceeded";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::MalformedSystem: return "MalformedSystem";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::NoSingularityInRange: return "NoSingularityInRange";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::DerivativeUnstable: return "DerivativeUnstable";
    case ErrorKind::SubcriticalityViolated: return "SubcriticalityViolated";
    case ErrorKind::MismatchAt: return "MismatchAt";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

// ---- Shape ---------------------------------------------------------------

Shape Shape::polygon(int k) {
  if (k < 3) throw Error(ErrorKind::OutOfRange, "polygon needs at least 3 vertices");
  Shape s;
  FaceNode root;
  root.size = k;
  root.child.assign(k - 1, -1);
  s.nodes_.push_back(std::move(root));
  return s;
}

int Shape::vertex_count() const {
  int n = 2;
  for (const auto& f : nodes_) n += f.size - 2;
  return n;
}

void Shape::canonicalize() {
  if (nodes_.empty()) return;
  std::vector<FaceNode> out;
  out.reserve(nodes_.size());
  auto visit = [&](auto&& self, int old, int parent, int slot) -> int {
    int idx = static_cast<int>(out.size());
    out.push_back(FaceNode{nodes_[old].size, parent, slot, {}});
    out[idx].child.assign(nodes_[old].child.size(), -1);
    for (std::size_t i = 0; i < nodes_[old].child.size(); ++i) {
      int c = nodes_[old].child[i];
      if (c >= 0) {
        int ni = self(self, c, idx, static_cast<int>(i));
        out[idx].child[i] = ni;
      }
    }
    return idx;
  };
  visit(visit, 0, -1, -1);
  nodes_ = std::move(out);
}

Shape Shape::from_nodes(std::vector<FaceNode> nodes) {
  Shape s;
  if (nodes.empty()) return s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& f = nodes[i];
    if (f.size < 3 || static_cast<int>(f.child.size()) != f.size - 1)
      throw Error(ErrorKind::InvalidInput, "face node with inconsistent size");
    for (std::size_t j = 0; j < f.child.size(); ++j) {
      int c = f.child[j];
      if (c < 0) continue;
      if (c >= static_cast<int>(nodes.size()) || c == 0)
        throw Error(ErrorKind::InvalidInput, "child index out of range");
      nodes[c].parent = static_cast<int>(i);
      nodes[c].parent_slot = static_cast<int>(j);
    }
  }
  s.nodes_ = std::move(nodes);
  s.nodes_[0].parent = -1;
  s.nodes_[0].parent_slot = -1;
  s.canonicalize();
  return s;
}

std::vector<Slot> Shape::bare_slots() const {
  std::vector<Slot> out;
  if (nodes_.empty()) return out;
  auto visit = [&](auto&& self, int v) -> void {
    for (std::size_t i = 0; i < nodes_[v].child.size(); ++i) {
      int c = nodes_[v].child[i];
      if (c < 0)
        out.push_back(Slot{v, static_cast<int>(i)});
      else
        self(self, c);
    }
  };
  visit(visit, 0);
  return out;
}

Shape Shape::glued(Slot at, const Shape& attachment) const {
  if (attachment.empty()) return *this;
  if (at.node < 0 || at.node >= face_count() || at.index < 0 ||
      at.index >= static_cast<int>(nodes_[at.node].child.size()) ||
      nodes_[at.node].child[at.index] >= 0)
    throw Error(ErrorKind::NotOuterEdge, "slot is not a bare side");
  Shape s = *this;
  int offset = face_count();
  for (const auto& f : attachment.nodes_) {
    FaceNode g = f;
    if (g.parent >= 0) g.parent += offset;
    for (int& c : g.child)
      if (c >= 0) c += offset;
    s.nodes_.push_back(std::move(g));
  }
  s.nodes_[offset].parent = at.node;
  s.nodes_[offset].parent_slot = at.index;
  s.nodes_[at.node].child[at.index] = offset;
  s.canonicalize();
  return s;
}

int Shape::depth(int node) const {
  int d = 0;
  for (int v = node; nodes_[v].parent >= 0; v = nodes_[v].parent) ++d;
  return d;
}

int Shape::path_count(int node) const {
  int total = 0;
  int faces = 0;
  for (int v = node; v >= 0; v = nodes_[v].parent) {
    total += nodes_[v].size;
    ++faces;
  }
  return total - 2 * (faces - 1);
}

Shape Shape::truncated(int max_path_count) const {
  Shape s;
  if (nodes_.empty() || nodes_[0].size > max_path_count) return s;
  s.nodes_ = nodes_;
  // Drop children beyond the bound; preorder rebuild discards orphans.
  for (std::size_t v = 0; v < s.nodes_.size(); ++v)
    for (int& c : s.nodes_[v].child)
      if (c >= 0 && path_count(c) > max_path_count) c = -1;
  s.canonicalize();
  return s;
}

FaceLayout Shape::layout() const {
  FaceLayout out;
  if (nodes_.empty()) return out;
  out.vertices.resize(nodes_.size());
  auto place = [&](auto&& self, int v, int start) -> int {
    int pos = start;
    out.vertices[v].push_back(start);
    for (int c : nodes_[v].child) {
      pos = c < 0 ? pos + 1 : self(self, c, pos);
      out.vertices[v].push_back(pos);
    }
    return pos;
  };
  out.n = place(place, 0, 0) + 1;
  return out;
}

std::string Shape::key() const {
  std::string out;
  if (nodes_.empty()) return out;
  auto visit = [&](auto&& self, int v) -> void {
    out.push_back('(');
    for (int c : nodes_[v].child) {
      if (c < 0)
        out.push_back('.');
      else
        self(self, c);
    }
    out.push_back(')');
  };
  visit(visit, 0);
  return out;
}

// ---- Dissection ----------------------------------------------------------

namespace {

Shape shape_from_chords(int n, const std::vector<Chord>& chords) {
  if (n == 2) return Shape{};
  // Positions along the boundary; the root edge joins 0 and n-1.
  std::vector<std::vector<int>> adj(n);
  for (int p = 0; p + 1 < n; ++p) {
    adj[p].push_back(p + 1);
    adj[p + 1].push_back(p);
  }
  for (const auto& c : chords) {
    int x = Dissection::position_of(c.a, n), y = Dissection::position_of(c.b, n);
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<FaceNode> nodes;
  auto build = [&](auto&& self, int x, int y) -> int {
    int idx = static_cast<int>(nodes.size());
    nodes.push_back(FaceNode{});
    std::vector<int> verts{x};
    int cur = x;
    while (cur != y) {
      int best = -1;
      for (int w : adj[cur]) {
        if (w <= cur || w > y) continue;
        if (cur == x && w == y) continue;
        best = std::max(best, w);
      }
      verts.push_back(best);
      cur = best;
    }
    nodes[idx].size = static_cast<int>(verts.size());
    nodes[idx].child.assign(verts.size() - 1, -1);
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
      if (verts[i + 1] > verts[i] + 1) {
        int c = self(self, verts[i], verts[i + 1]);
        nodes[idx].child[i] = c;
        nodes[c].parent = idx;
        nodes[c].parent_slot = static_cast<int>(i);
      }
    }
    return idx;
  };
  build(build, 0, n - 1);
  return Shape::from_nodes(std::move(nodes));
}

}  // namespace

Dissection Dissection::make(int n, std::vector<Chord> chords) {
  if (n < 2) throw Error(ErrorKind::OutOfRange, "polygon size must be at least 2");
  for (auto& c : chords) {
    c = Chord(c.a, c.b);
    if (c.a < 1 || c.b > n)
      throw Error(ErrorKind::OutOfRange, "chord endpoint outside 1.." + std::to_string(n));
    if (c.b - c.a < 2 || (c.a == 1 && c.b == n))
      throw Error(ErrorKind::OutOfRange, "(" + std::to_string(c.a) + "," + std::to_string(c.b) +
                                             ") is a side, not a diagonal");
  }
  std::sort(chords.begin(), chords.end());
  for (std::size_t i = 1; i < chords.size(); ++i)
    if (chords[i] == chords[i - 1])
      throw Error(ErrorKind::DuplicateChord, "(" + std::to_string(chords[i].a) + "," +
                                                 std::to_string(chords[i].b) + ")");
  for (std::size_t i = 0; i < chords.size(); ++i)
    for (std::size_t j = i + 1; j < chords.size(); ++j) {
      const auto& p = chords[i];
      const auto& q = chords[j];
      bool cross = (p.a < q.a && q.a < p.b && p.b < q.b) || (q.a < p.a && p.a < q.b && q.b < p.b);
      if (cross)
        throw Error(ErrorKind::CrossingChords,
                    "(" + std::to_string(p.a) + "," + std::to_string(p.b) + ") and (" +
                        std::to_string(q.a) + "," + std::to_string(q.b) + ")");
    }
  Dissection d;
  d.n_ = n;
  d.chords_ = std::move(chords);
  d.shape_ = shape_from_chords(n, d.chords_);
  return d;
}

Dissection Dissection::from_shape(const Shape& shape) {
  Dissection d;
  FaceLayout lay = shape.layout();
  d.n_ = lay.n;
  d.shape_ = shape;
  for (int v = 1; v < shape.face_count(); ++v) {
    const auto& vs = lay.vertices[v];
    d.chords_.emplace_back(label_of(vs.front(), lay.n), label_of(vs.back(), lay.n));
  }
  std::sort(d.chords_.begin(), d.chords_.end());
  return d;
}

std::vector<Face> Dissection::faces() const {
  std::vector<Face> out;
  FaceLayout lay = shape_.layout();
  for (const auto& vs : lay.vertices) {
    Face f;
    for (int p : vs) f.vertices.push_back(label_of(p, n_));
    auto m = std::min_element(f.vertices.begin(), f.vertices.end());
    std::rotate(f.vertices.begin(), m, f.vertices.end());
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::pair<int, int>> Dissection::dual_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 1; v < shape_.face_count(); ++v) out.emplace_back(shape_.node(v).parent, v);
  return out;
}

std::vector<Chord> Dissection::outer_edges() const {
  std::vector<Chord> out;
  for (int p = 0; p + 1 < n_; ++p) out.emplace_back(label_of(p, n_), label_of(p + 1, n_));
  return out;
}

Dissection make_dissection(int n, std::vector<Chord> chords) {
  return Dissection::make(n, std::move(chords));
}

Dissection glue(const Dissection& host, Chord edge, const Dissection& attachment) {
  int n = host.size();
  if (edge == Chord(1, 2)) throw Error(ErrorKind::RootEdgeGlue, "cannot glue on the root edge");
  int pa = Dissection::position_of(edge.a, n), pb = Dissection::position_of(edge.b, n);
  if (edge.a < 1 || edge.b > n || std::abs(pa - pb) != 1)
    throw Error(ErrorKind::NotOuterEdge, "(" + std::to_string(edge.a) + "," +
                                             std::to_string(edge.b) + ") is not an outer edge");
  int k = std::min(pa, pb);
  auto slots = host.shape().bare_slots();
  return Dissection::from_shape(host.shape().glued(slots[k], attachment.shape()));
}

namespace {

Shape compose(int k, const std::vector<Shape>& parts) {
  Shape s = Shape::polygon(k);
  // Glue right to left so earlier slot indices stay valid.
  for (int i = k - 2; i >= 0; --i)
    if (!parts[i].empty()) s = s.glued(Slot{0, i}, parts[i]);
  return s;
}

void generate(int m, const std::function<void(const Shape&)>& cont) {
  if (m == 2) {
    cont(Shape{});
    return;
  }
  for (int k = 3; k <= m; ++k) {
    std::vector<Shape> parts(k - 1);
    auto slots = [&](auto&& self, int i, int rem) -> void {
      if (i == k - 2) {
        generate(2 + rem, [&](const Shape& sub) {
          parts[i] = sub;
          cont(compose(k, parts));
        });
        return;
      }
      for (int extra = 0; extra <= rem; ++extra)
        generate(2 + extra, [&](const Shape& sub) {
          parts[i] = sub;
          self(self, i + 1, rem - extra);
        });
    };
    slots(slots, 0, m - k);
  }
}

}  // namespace

void for_each_shape(int n, const std::function<void(const Shape&)>& visit) {
  if (n < 2) throw Error(ErrorKind::OutOfRange, "polygon size must be at least 2");
  generate(n, visit);
}

std::vector<Dissection> enumerate_dissections(int n) {
  std::vector<Dissection> out;
  for_each_shape(n, [&](const Shape& s) { out.push_back(Dissection::from_shape(s)); });
  return out;
}

std::string to_string(const Dissection& d) {
  std::ostringstream os;
  os << "n=" << d.size() << " chords=[";
  for (std::size_t i = 0; i < d.chords().size(); ++i)
    os << (i ? "," : "") << "(" << d.chords()[i].a << "," << d.chords()[i].b << ")";
  os << "]";
  return os.str();
}

}  // namespace dissect
