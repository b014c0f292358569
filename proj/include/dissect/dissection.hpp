#pragma once

#include <compare>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace dissect {

// Unordered vertex pair, stored with a < b.
struct Chord {
  int a = 0;
  int b = 0;
  Chord() = default;
  Chord(int x, int y) : a(x < y ? x : y), b(x < y ? y : x) {}
  auto operator<=>(const Chord&) const = default;
};

// A face of a rooted dissection, seen as a node of the dual tree.
// child[i] is the node attached to the i-th non-parent side (-1 if bare);
// sides are listed in counterclockwise order starting after the parent side.
struct FaceNode {
  int size = 0;
  int parent = -1;
  int parent_slot = -1;
  std::vector<int> child;
  bool operator==(const FaceNode&) const = default;
};

struct Slot {
  int node = -1;
  int index = -1;
  auto operator<=>(const Slot&) const = default;
};

// Faces of a shape with vertices given by boundary position.  Position 0 is
// the vertex after the root edge, position n-1 the vertex before it.
struct FaceLayout {
  int n = 2;
  std::vector<std::vector<int>> vertices;  // per node, increasing positions
};

// Recursive form of a rooted dissection: a tree of polygons, each side of a
// polygon either bare or carrying a child polygon.  Nodes are kept in
// preorder, which makes the representation canonical.
class Shape {
 public:
  Shape() = default;
  static Shape polygon(int k);

  bool empty() const { return nodes_.empty(); }
  int vertex_count() const;
  int face_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<FaceNode>& nodes() const { return nodes_; }
  const FaceNode& node(int i) const { return nodes_[i]; }

  // Bare sides in boundary order; the k-th one is the side (k, k+1).
  std::vector<Slot> bare_slots() const;
  Shape glued(Slot at, const Shape& attachment) const;

  // Number of vertices of the union of faces on the dual path root..node.
  int path_count(int node) const;
  int depth(int node) const;
  // Keeps the faces whose path count is at most max_path_count.
  Shape truncated(int max_path_count) const;

  FaceLayout layout() const;
  std::string key() const;

  bool operator==(const Shape& other) const { return nodes_ == other.nodes_; }
  bool operator<(const Shape& other) const { return key() < other.key(); }

  // Builds from a nested description; used by tests and pattern files.
  static Shape from_nodes(std::vector<FaceNode> nodes);

 private:
  std::vector<FaceNode> nodes_;
  void canonicalize();
};

struct Face {
  std::vector<int> vertices;  // cyclic order, starting at the smallest label
};

// Rooted dissection of a convex n-gon with vertices 1..n counterclockwise and
// root edge {1,2}.  Immutable once built.
class Dissection {
 public:
  Dissection() = default;  // the single edge, n = 2
  static Dissection make(int n, std::vector<Chord> chords);
  static Dissection from_shape(const Shape& shape);

  int size() const { return n_; }
  const std::vector<Chord>& chords() const { return chords_; }
  const Shape& shape() const { return shape_; }

  std::vector<Face> faces() const;
  // Pairs of face indices (parent, child) of the dual tree.
  std::vector<std::pair<int, int>> dual_edges() const;
  // Sides other than the root edge: (2,3), (3,4), ..., (n,1).
  std::vector<Chord> outer_edges() const;

  bool operator==(const Dissection& o) const { return n_ == o.n_ && chords_ == o.chords_; }

  static int label_of(int position, int n) { return position == n - 1 ? 1 : position + 2; }
  static int position_of(int label, int n) { return label == 1 ? n - 1 : label - 2; }

 private:
  int n_ = 2;
  std::vector<Chord> chords_;
  Shape shape_;
};

Dissection make_dissection(int n, std::vector<Chord> chords);

// Glues `attachment` onto the outer edge {a,b} of `host`, identifying the
// attachment's root edge with it.  The result keeps the host's root.
Dissection glue(const Dissection& host, Chord outer_edge, const Dissection& attachment);

// All rooted dissections of the n-gon, in a fixed order.
void for_each_shape(int n, const std::function<void(const Shape&)>& visit);
std::vector<Dissection> enumerate_dissections(int n);

std::string to_string(const Dissection& d);

}  // namespace dissect
