#include "dissect/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dissect/error.hpp"

namespace dissect {

Pattern make_pattern(const std::string& name, const Dissection& graph) {
  if (graph.size() < 3) throw Error(ErrorKind::InvalidPattern, "pattern needs at least 3 vertices");
  Pattern p;
  p.name = name;
  p.graph = graph;
  const int k = graph.size();
  std::set<std::vector<std::pair<int, int>>> images;
  for (int refl = 0; refl < 2; ++refl)
    for (int r = 0; r < k; ++r) {
      std::vector<std::pair<int, int>> img;
      for (const auto& c : graph.chords()) {
        auto map = [&](int label) {
          int i = label - 1;
          return refl ? ((r - i) % k + k) % k : (i + r) % k;
        };
        int x = map(c.a), y = map(c.b);
        img.emplace_back(std::min(x, y), std::max(x, y));
      }
      std::sort(img.begin(), img.end());
      images.insert(std::move(img));
    }
  p.chord_orbit.assign(images.begin(), images.end());
  return p;
}

Pattern cycle_pattern(int k) { return make_pattern("C" + std::to_string(k), make_dissection(k, {})); }

Pattern named_pattern(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'c') &&
      std::all_of(name.begin() + 1, name.end(), ::isdigit)) {
    int k = std::stoi(name.substr(1));
    if (k < 3 || k > 30) throw Error(ErrorKind::InvalidPattern, "cycle length out of range: " + name);
    return cycle_pattern(k);
  }
  if (name == "patternI" || name == "I") return make_pattern("patternI", make_dissection(4, {{1, 3}}));
  if (name == "patternII" || name == "II")
    return make_pattern("patternII", make_dissection(5, {{1, 3}}));
  throw Error(ErrorKind::InvalidPattern, "unknown pattern '" + name + "'");
}

bool isomorphic(const Pattern& p, const Pattern& q) {
  return p.size() == q.size() && p.chord_orbit.front() == q.chord_orbit.front();
}

PatternSet load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  if (j.is_object() && j.contains("patterns")) j = j["patterns"];
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, path + ": expected a list of patterns");
  PatternSet set;
  for (const auto& e : j) {
    if (e.is_string()) {
      set.push_back(named_pattern(e.get<std::string>()));
      continue;
    }
    std::vector<Chord> chords;
    for (const auto& c : e.value("chords", nlohmann::json::array()))
      chords.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    int n = e.at("n").get<int>();
    std::string name = e.value("name", "P" + std::to_string(set.size() + 1));
    set.push_back(make_pattern(name, make_dissection(n, chords)));
  }
  return set;
}

PatternSet parse_pattern_set(const std::string& spec) {
  PatternSet set;
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    set = load_pattern_file(spec);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) set.push_back(named_pattern(item));
  }
  if (set.empty()) throw Error(ErrorKind::InvalidPattern, "empty pattern set");
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (isomorphic(set[i], set[j]))
        throw Error(ErrorKind::InvalidPattern, "duplicate pattern " + set[i].name);
  return set;
}

std::string pattern_set_name(const PatternSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) out += (i ? "," : "") + set[i].name;
  return out;
}

int h_delta(const PatternSet& set) {
  int h = 0;
  for (const auto& p : set) h = std::max(h, p.size());
  return h;
}

namespace {

// Calls visit(faces) for every connected face set whose union has k vertices.
template <class Visit>
void for_each_k_region(const Shape& host, const FaceLayout& lay, int k, Visit&& visit) {
  const auto& nodes = host.nodes();
  std::vector<int> chosen;
  std::vector<int> frontier;
  auto grow = [&](auto&& self, std::size_t idx, int verts) -> void {
    if (verts == k) {
      visit(chosen);
      return;
    }
    if (idx == frontier.size()) return;
    self(self, idx + 1, verts);
    int f = frontier[idx];
    int add = nodes[f].size - 2;
    if (verts + add > k) return;
    chosen.push_back(f);
    std::size_t before = frontier.size();
    for (int c : nodes[f].child)
      if (c >= 0) frontier.push_back(c);
    self(self, idx + 1, verts + add);
    frontier.resize(before);
    chosen.pop_back();
  };
  (void)lay;
  for (int top = 0; top < host.face_count(); ++top) {
    if (nodes[top].size > k) continue;
    chosen.assign(1, top);
    frontier.clear();
    for (int c : nodes[top].child)
      if (c >= 0) frontier.push_back(c);
    grow(grow, 0, nodes[top].size);
  }
}

}  // namespace

int count_cycles_via_faces(const Shape& host, int k) {
  int count = 0;
  FaceLayout lay = host.layout();
  for_each_k_region(host, lay, k, [&](const std::vector<int>&) { ++count; });
  return count;
}

int count_occurrences(const Shape& host, const Pattern& p) {
  const int k = p.size();
  if (host.empty()) return 0;
  FaceLayout lay = host.layout();
  int count = 0;
  const bool plain = p.graph.chords().empty();
  std::vector<int> verts;
  std::vector<std::pair<int, int>> inner;
  for_each_k_region(host, lay, k, [&](const std::vector<int>& faces) {
    if (plain) {
      ++count;
      return;
    }
    if (static_cast<int>(faces.size()) < static_cast<int>(p.graph.chords().size()) + 1) return;
    verts.clear();
    for (int f : faces) verts.insert(verts.end(), lay.vertices[f].begin(), lay.vertices[f].end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto index = [&](int pos) {
      return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), pos) - verts.begin());
    };
    inner.clear();
    for (std::size_t i = 1; i < faces.size(); ++i) {
      const auto& vs = lay.vertices[faces[i]];
      inner.emplace_back(index(vs.front()), index(vs.back()));
    }
    std::sort(inner.begin(), inner.end());
    for (const auto& img : p.chord_orbit)
      if (std::includes(inner.begin(), inner.end(), img.begin(), img.end())) ++count;
  });
  return count;
}

int count_occurrences(const Dissection& host, const Pattern& p) {
  return count_occurrences(host.shape(), p);
}

std::vector<int> occurrence_vector(const Shape& host, const PatternSet& set) {
  std::vector<int> out;
  out.reserve(set.size());
  for (const auto& p : set) out.push_back(count_occurrences(host, p));
  return out;
}

std::map<std::vector<int>, std::uint64_t> occurrence_census(const PatternSet& set, int n,
                                                            int limit) {
  if (n > limit)
    throw Error(ErrorKind::OracleLimitExceeded,
                "census limited to n <= " + std::to_string(limit) + ", got " + std::to_string(n));
  std::map<std::vector<int>, std::uint64_t> out;
  for_each_shape(n, [&](const Shape& s) { ++out[occurrence_vector(s, set)]; });
  return out;
}

}  // namespace dissect
