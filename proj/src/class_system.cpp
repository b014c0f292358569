#include "dissect/class_system.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "dissect/error.hpp"

namespace dissect {

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Main: return "main";
    case VarKind::Circ: return "circ";
    case VarKind::Root: return "root";
    case VarKind::Group: return "group";
    case VarKind::Block: return "block";
  }
  return "root";
}

int Term::degree() const {
  int d = 0;
  for (const auto& [v, e] : vars) d += e;
  return d;
}

int ClassSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

Term make_term(std::int64_t coeff, int z, std::vector<int> u, std::vector<int> factors) {
  Term t;
  t.coeff = coeff;
  t.z = z;
  t.u = std::move(u);
  std::sort(factors.begin(), factors.end());
  for (int v : factors) {
    if (!t.vars.empty() && t.vars.back().first == v)
      ++t.vars.back().second;
    else
      t.vars.emplace_back(v, 1);
  }
  return t;
}

// Adds like terms and drops zeros; keeps a canonical order.
std::vector<Term> normalize(std::vector<Term> terms) {
  std::map<std::tuple<int, std::vector<int>, std::vector<std::pair<int, int>>>, std::int64_t> acc;
  for (auto& t : terms) acc[{t.z, t.u, t.vars}] += t.coeff;
  std::vector<Term> out;
  for (auto& [k, c] : acc) {
    if (c == 0) continue;
    Term t;
    t.coeff = c;
    std::tie(t.z, t.u, t.vars) = k;
    out.push_back(std::move(t));
  }
  return out;
}

// Removes variables not reachable from y and renumbers the rest.
ClassSystem prune_unreachable(const ClassSystem& sys) {
  const int n = static_cast<int>(sys.vars.size());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{ClassSystem::kMain};
  seen[ClassSystem::kMain] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& t : sys.eqs[v].terms)
      for (const auto& [w, e] : t.vars)
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
  }
  seen[ClassSystem::kCirc] = true;
  std::vector<int> remap(n, -1);
  ClassSystem out;
  out.patterns = sys.patterns;
  out.h = sys.h;
  out.mode = sys.mode;
  for (int v = 0; v < n; ++v)
    if (seen[v]) {
      remap[v] = static_cast<int>(out.vars.size());
      out.vars.push_back(sys.vars[v]);
    }
  for (int v = 0; v < n; ++v) {
    if (!seen[v]) continue;
    Equation e;
    e.lhs = remap[v];
    for (Term t : sys.eqs[v].terms) {
      for (auto& [w, p] : t.vars) w = remap[w];
      std::sort(t.vars.begin(), t.vars.end());
      e.terms.push_back(std::move(t));
    }
    e.terms = normalize(std::move(e.terms));
    out.eqs.push_back(std::move(e));
  }
  return out;
}

// Drops variables whose equation became empty (identically zero classes).
ClassSystem drop_zero_classes(ClassSystem sys) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<int> zero;
    for (std::size_t v = 0; v < sys.vars.size(); ++v)
      if (sys.eqs[v].terms.empty() && sys.vars[v].kind != VarKind::Main &&
          sys.vars[v].kind != VarKind::Circ)
        zero.insert(static_cast<int>(v));
    for (auto& eq : sys.eqs) {
      auto before = eq.terms.size();
      std::erase_if(eq.terms, [&](const Term& t) {
        return std::any_of(t.vars.begin(), t.vars.end(),
                           [&](const auto& f) { return zero.count(f.first) > 0; });
      });
      if (eq.terms.size() != before) changed = true;
    }
  }
  return prune_unreachable(sys);
}

int min_cycle_between(const Shape& s, int a, int b) {
  // Vertex count of the union of faces on the dual path from a to b.
  std::vector<int> up_a, up_b;
  for (int v = a; v >= 0; v = s.node(v).parent) up_a.push_back(v);
  for (int v = b; v >= 0; v = s.node(v).parent) up_b.push_back(v);
  std::set<int> path;
  std::set<int> in_a(up_a.begin(), up_a.end());
  int lca = -1;
  for (int v : up_b)
    if (in_a.count(v)) {
      lca = v;
      break;
    }
  for (int v : up_a) {
    path.insert(v);
    if (v == lca) break;
  }
  for (int v : up_b) {
    path.insert(v);
    if (v == lca) break;
  }
  int total = 0;
  for (int v : path) total += s.node(v).size;
  return total - 2 * (static_cast<int>(path.size()) - 1);
}

std::string range_name(const std::vector<std::string>& members) {
  // "3[2]", "3[3]" -> "3[2,3]"; consecutive runs of three or more -> "3[4-8]"
  std::map<std::string, std::vector<int>> by_poly;
  std::vector<std::string> order;
  for (const auto& m : members) {
    auto open = m.find('[');
    std::string poly = m.substr(0, open);
    if (!by_poly.count(poly)) order.push_back(poly);
    by_poly[poly].push_back(std::stoi(m.substr(open + 1)));
  }
  std::string out;
  for (const auto& poly : order) {
    auto& ids = by_poly[poly];
    std::sort(ids.begin(), ids.end());
    std::string inner;
    for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j + 1 < ids.size() && ids[j + 1] == ids[j] + 1) ++j;
      if (!inner.empty()) inner += ",";
      if (j >= i + 2)
        inner += std::to_string(ids[i]) + "-" + std::to_string(ids[j]);
      else {
        inner += std::to_string(ids[i]);
        if (j == i + 1) inner += "," + std::to_string(ids[j]);
      }
      i = j + 1;
    }
    if (!out.empty()) out += "+";
    out += poly + "[" + inner + "]";
  }
  return out;
}

}  // namespace

ClassSystem unrestricted_system() {
  ClassSystem sys;
  sys.h = 2;
  sys.vars = {{"y", VarKind::Main, {}}, {"y_circ", VarKind::Circ, {}}};
  sys.eqs.resize(2);
  sys.eqs[0] = {0, {make_term(1, 0, {}, {1})}};
  sys.eqs[1] = {1,
                normalize({make_term(1, 1, {}, {}), make_term(1, 0, {}, {0, 1}),
                           make_term(-1, 1, {}, {0}), make_term(1, 0, {}, {0, 0})})};
  return sys;
}

ClassSystem build_system(const PatternSet& set, Mode mode, const BuildOptions& opt) {
  return build_system(set, mode, generate_composite_roots(set, mode, opt.roots), opt);
}

ClassSystem build_system(const PatternSet& set, Mode mode, const std::vector<CompositeRoot>& roots,
                         const BuildOptions& opt) {
  const int h = h_delta(set);
  const int m = static_cast<int>(set.size());
  const std::vector<int> zero_u(m, 0);
  ClassSystem sys;
  for (const auto& p : set) sys.patterns.push_back(p.name);
  sys.h = h;
  sys.mode = mode;
  sys.vars.push_back({"y", VarKind::Main, {}});
  sys.vars.push_back({"y_circ", VarKind::Circ, {}});
  const int first_root = 2;
  for (const auto& r : roots) sys.vars.push_back({"y_" + r.name(), VarKind::Root, {r.name()}});
  sys.eqs.resize(sys.vars.size());

  // Interfaces: what of a class is visible within h-1 vertices of its root.
  std::map<std::string, int> group_of_key;
  std::vector<Shape> group_shape;
  std::vector<std::vector<int>> group_occ;
  std::vector<std::vector<int>> group_members;  // variable indices
  group_of_key[""] = 0;
  group_shape.emplace_back();
  group_occ.push_back(zero_u);
  group_members.push_back({ClassSystem::kCirc});
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Shape sig = roots[i].shape.truncated(h - 1);
    auto [it, fresh] = group_of_key.try_emplace(sig.key(), static_cast<int>(group_shape.size()));
    if (fresh) {
      group_occ.push_back(occurrence_vector(sig, set));
      group_shape.push_back(std::move(sig));
      group_members.emplace_back();
    }
    group_members[it->second].push_back(first_root + static_cast<int>(i));
  }
  const int num_groups = static_cast<int>(group_shape.size());
  std::vector<int> group_var(num_groups, -1);
  std::vector<Variable> extra_vars;
  std::vector<Equation> extra_eqs;
  auto new_var = [&](Variable v, std::vector<Term> terms) {
    int idx = static_cast<int>(sys.vars.size() + extra_vars.size());
    extra_vars.push_back(std::move(v));
    extra_eqs.push_back({idx, std::move(terms)});
    return idx;
  };
  auto group_variable = [&](int g) {
    if (group_var[g] >= 0) return group_var[g];
    std::vector<Term> terms;
    for (int v : group_members[g]) terms.push_back(make_term(1, 0, zero_u, {v}));
    if (terms.size() == 1) return group_var[g] = group_members[g][0];
    return group_var[g] = new_var({"S" + std::to_string(g), VarKind::Group, {}}, normalize(terms));
  };
  std::map<std::vector<Term>, int> block_var;
  int block_count = 0;

  for (std::size_t ri = 0; ri < roots.size(); ++ri) {
    const CompositeRoot& nu = roots[ri];
    const auto free = nu.free_edges();
    const int t = static_cast<int>(free.size());
    const FaceLayout lay = nu.shape.layout();
    // Blocks: Free edges that a single copy of size <= h could pass through.
    std::vector<int> parent(t);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int a = 0; a < t; ++a)
      for (int b = a + 1; b < t; ++b) {
        int fa = nu.outer_slots[free[a]].node, fb = nu.outer_slots[free[b]].node;
        if (min_cycle_between(nu.shape, fa, fb) + 2 <= h) parent[find(a)] = find(b);
      }
    if (h >= 7 && t >= 3) {
      // Larger subsets: a copy through |S| attachments has at least
      // |S| + |endpoints of S| vertices.
      auto endpoints = [&](int e) {
        const Slot& s = nu.outer_slots[free[e]];
        return std::pair{lay.vertices[s.node][s.index], lay.vertices[s.node][s.index + 1]};
      };
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int start) {
        if (pick.size() >= 3) {
          std::set<int> vs;
          for (int e : pick) {
            auto [x, y] = endpoints(e);
            vs.insert(x);
            vs.insert(y);
          }
          if (static_cast<int>(pick.size() + vs.size()) > h) return;
          for (std::size_t i = 1; i < pick.size(); ++i) parent[find(pick[i])] = find(pick[0]);
        }
        if (static_cast<int>(pick.size()) >= h - 2) return;
        for (int e = start; e < t; ++e) {
          pick.push_back(e);
          rec(e + 1);
          pick.pop_back();
        }
      };
      rec(0);
    }
    std::map<int, std::vector<int>> blocks;
    for (int a = 0; a < t; ++a) blocks[find(a)].push_back(a);

    auto crossing = [&](const std::vector<int>& edges, const std::vector<int>& groups) {
      Shape s = nu.shape;
      std::vector<int> p(m, 0);
      for (int i = static_cast<int>(edges.size()) - 1; i >= 0; --i) {
        int g = groups[i];
        if (group_shape[g].empty()) continue;
        s = s.glued(s.bare_slots()[free[edges[i]]], group_shape[g]);
        for (int j = 0; j < m; ++j) p[j] -= group_occ[g][j];
      }
      auto occ = occurrence_vector(s, set);
      for (int j = 0; j < m; ++j) p[j] += occ[j] - nu.occurrences[j];
      return p;
    };

    std::vector<int> factors(nu.restricted_count(), ClassSystem::kCirc);
    for (const auto& [rep, edges] : blocks) {
      const int k = static_cast<int>(edges.size());
      // Allowed groups per edge; in Avoiding mode a group that already
      // creates a copy on its own edge can never appear.
      std::vector<std::vector<int>> allowed(k);
      for (int i = 0; i < k; ++i)
        for (int g = 0; g < num_groups; ++g) {
          if (mode == Mode::Avoiding && g > 0) {
            auto p = crossing({edges[i]}, {g});
            if (std::any_of(p.begin(), p.end(), [](int x) { return x > 0; })) continue;
          }
          allowed[i].push_back(g);
        }
      double combos = 1;
      for (auto& a : allowed) combos *= static_cast<double>(a.size());
      if (combos > 5e6)
        throw Error(ErrorKind::CapExceeded, "interaction block of root " + nu.name() + " too large");
      std::vector<Term> terms;
      std::vector<int> pick(k);
      std::function<void(int)> rec = [&](int i) {
        if (i == k) {
          std::vector<int> groups(k);
          bool all_inert = true;
          for (int j = 0; j < k; ++j) {
            groups[j] = allowed[j][pick[j]];
            all_inert = all_inert && groups[j] == 0;
          }
          auto p = all_inert ? zero_u : crossing(edges, groups);
          if (mode == Mode::Avoiding && std::any_of(p.begin(), p.end(), [](int x) { return x > 0; }))
            return;
          std::vector<int> vs;
          for (int g : groups) vs.push_back(group_variable(g));
          terms.push_back(make_term(1, 0, p, vs));
          return;
        }
        for (pick[i] = 0; pick[i] < static_cast<int>(allowed[i].size()); ++pick[i]) rec(i + 1);
      };
      rec(0);
      terms = normalize(std::move(terms));
      if (terms.size() == 1 && terms[0].coeff == 1 && terms[0].z == 0 && terms[0].u == zero_u &&
          terms[0].vars.size() == 1 && terms[0].vars[0].second == 1) {
        factors.push_back(terms[0].vars[0].first);
        continue;
      }
      auto it = block_var.find(terms);
      if (it == block_var.end()) {
        int v = new_var({"W" + std::to_string(++block_count), VarKind::Block, {}}, terms);
        it = block_var.emplace(terms, v).first;
      }
      factors.push_back(it->second);
    }
    sys.eqs[first_root + ri] = {first_root + static_cast<int>(ri),
                                {make_term(1, 0, mode == Mode::Avoiding ? zero_u : nu.occurrences,
                                           factors)}};
  }
  for (auto& v : extra_vars) sys.vars.push_back(std::move(v));
  for (auto& e : extra_eqs) sys.eqs.push_back(std::move(e));

  std::vector<Term> main_terms{make_term(1, 0, zero_u, {ClassSystem::kCirc})};
  for (std::size_t ri = 0; ri < roots.size(); ++ri)
    main_terms.push_back(make_term(1, 0, zero_u, {first_root + static_cast<int>(ri)}));
  sys.eqs[ClassSystem::kMain] = {ClassSystem::kMain, normalize(main_terms)};
  std::vector<int> y_pow(h, ClassSystem::kMain);
  sys.eqs[ClassSystem::kCirc] = {
      ClassSystem::kCirc,
      normalize({make_term(1, 1, zero_u, {}), make_term(1, 0, zero_u, {0, 1}),
                 make_term(-1, 1, zero_u, {0}), make_term(1, 0, zero_u, y_pow)})};

  sys = drop_zero_classes(std::move(sys));
  if (opt.group) sys = group_classes(sys);
  validate(sys);
  return sys;
}

ClassSystem group_classes(const ClassSystem& sys) {
  const int n = static_cast<int>(sys.vars.size());
  // Usage profile: every term mentioning v, with v blanked out.
  auto usage = [&](int v) {
    std::vector<std::pair<int, Term>> out;
    for (const auto& eq : sys.eqs)
      for (Term t : eq.terms) {
        bool hit = false;
        for (auto& [w, e] : t.vars)
          if (w == v) {
            w = -1;
            hit = true;
          }
        if (hit) {
          std::sort(t.vars.begin(), t.vars.end());
          out.emplace_back(eq.lhs, std::move(t));
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::map<std::pair<std::vector<Term>, std::vector<std::pair<int, Term>>>, std::vector<int>> classes;
  for (int v = 0; v < n; ++v)
    if (sys.vars[v].kind == VarKind::Root) classes[{sys.eqs[v].terms, usage(v)}].push_back(v);
  std::vector<int> merged_into(n);
  std::iota(merged_into.begin(), merged_into.end(), 0);
  std::vector<int> multiplicity(n, 1);
  bool any = false;
  for (auto& [key, vs] : classes) {
    if (vs.size() < 2) continue;
    any = true;
    for (int v : vs) merged_into[v] = vs.front();
    multiplicity[vs.front()] = static_cast<int>(vs.size());
  }
  if (!any) return sys;
  ClassSystem out = sys;
  for (int v = 0; v < n; ++v) {
    if (merged_into[v] != v) {
      out.eqs[v].terms.clear();
      continue;
    }
    if (multiplicity[v] > 1) {
      std::vector<std::string> members;
      for (int w = 0; w < n; ++w)
        if (merged_into[w] == v)
          members.insert(members.end(), sys.vars[w].members.begin(), sys.vars[w].members.end());
      out.vars[v].members = members;
      out.vars[v].name = "y_" + range_name(members);
      for (auto& t : out.eqs[v].terms) t.coeff *= multiplicity[v];
    }
  }
  for (auto& eq : out.eqs) {
    if (eq.terms.empty()) continue;
    std::vector<Term> terms;
    for (const auto& t : eq.terms) {
      bool dropped = false;
      for (const auto& [w, e] : t.vars)
        if (merged_into[w] != w) dropped = true;
      if (!dropped) terms.push_back(t);
    }
    eq.terms = std::move(terms);
  }
  // Merged-away variables now have empty equations and no uses.
  for (int v = 0; v < n; ++v)
    if (merged_into[v] != v) out.vars[v].kind = VarKind::Block;
  return prune_unreachable(out);
}

ClassSystem specialize(const ClassSystem& sys, const std::vector<std::optional<int>>& u) {
  if (static_cast<int>(u.size()) != sys.num_u())
    throw Error(ErrorKind::InvalidInput, "u assignment has wrong length");
  for (const auto& x : u)
    if (x && *x != 0 && *x != 1) throw Error(ErrorKind::InvalidInput, "u may only be fixed to 0 or 1");
  ClassSystem out = sys;
  for (auto& eq : out.eqs) {
    std::vector<Term> terms;
    for (Term t : eq.terms) {
      bool vanish = false;
      for (int i = 0; i < sys.num_u(); ++i) {
        if (!u[i]) continue;
        if (*u[i] == 0 && t.u[i] > 0) vanish = true;
        t.u[i] = 0;
      }
      if (!vanish) terms.push_back(std::move(t));
    }
    eq.terms = normalize(std::move(terms));
  }
  bool all_zero = std::all_of(u.begin(), u.end(), [](const auto& x) { return x && *x == 0; });
  if (all_zero) out.mode = Mode::Avoiding;
  return drop_zero_classes(std::move(out));
}

void validate(const ClassSystem& sys) {
  const int n = static_cast<int>(sys.vars.size());
  if (n < 2 || sys.eqs.size() != sys.vars.size())
    throw Error(ErrorKind::MalformedSystem, "variable and equation counts differ");
  std::vector<std::vector<int>> linear(n);
  for (int i = 0; i < n; ++i) {
    const auto& eq = sys.eqs[i];
    if (eq.lhs != i) throw Error(ErrorKind::MalformedSystem, "equation order mismatch");
    for (const auto& t : eq.terms) {
      if (static_cast<int>(t.u.size()) != sys.num_u())
        throw Error(ErrorKind::MalformedSystem, "u-exponent vector of wrong length");
      if (t.coeff < 0 && sys.vars[i].kind != VarKind::Circ)
        throw Error(ErrorKind::MalformedSystem, "negative coefficient in " + sys.vars[i].name);
      if (t.z < 0 || std::any_of(t.u.begin(), t.u.end(), [](int x) { return x < 0; }))
        throw Error(ErrorKind::MalformedSystem, "negative exponent in " + sys.vars[i].name);
      for (const auto& [w, e] : t.vars)
        if (w < 0 || w >= n || e <= 0)
          throw Error(ErrorKind::MalformedSystem, "bad factor in " + sys.vars[i].name);
      if (t.degree() == 0 && t.z == 0)
        throw Error(ErrorKind::MalformedSystem, "constant term in " + sys.vars[i].name);
      if (t.degree() == 1 && t.z == 0) linear[i].push_back(t.vars[0].first);
    }
  }
  // Linear dependencies must be acyclic for coefficient-wise solving.
  std::vector<int> state(n, 0);
  std::function<void(int)> dfs = [&](int v) {
    state[v] = 1;
    for (int w : linear[v]) {
      if (state[w] == 1)
        throw Error(ErrorKind::MalformedSystem, "cyclic linear dependency through " + sys.vars[w].name);
      if (state[w] == 0) dfs(w);
    }
    state[v] = 2;
  };
  for (int v = 0; v < n; ++v)
    if (state[v] == 0) dfs(v);
}

bool strongly_connected(const ClassSystem& sys) {
  const int n = static_cast<int>(sys.vars.size());
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (int i = 0; i < n; ++i)
    for (const auto& t : sys.eqs[i].terms)
      for (const auto& [w, e] : t.vars) {
        fwd[i].push_back(w);
        bwd[w].push_back(i);
      }
  auto reach_all = [&](const std::vector<std::vector<int>>& g) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  };
  return reach_all(fwd) && reach_all(bwd);
}

namespace {

std::string term_text(const ClassSystem& sys, const Term& t, bool first) {
  std::vector<std::string> parts;
  std::int64_t c = t.coeff < 0 ? -t.coeff : t.coeff;
  if (c != 1) parts.push_back(std::to_string(c));
  if (t.z == 1) parts.push_back("z");
  if (t.z > 1) parts.push_back("z^" + std::to_string(t.z));
  for (int i = 0; i < static_cast<int>(t.u.size()); ++i) {
    if (t.u[i] == 0) continue;
    std::string u = t.u.size() == 1 ? "u" : "u" + std::to_string(i + 1);
    parts.push_back(t.u[i] == 1 ? u : u + "^" + std::to_string(t.u[i]));
  }
  for (const auto& [v, e] : t.vars)
    parts.push_back(e == 1 ? sys.vars[v].name : sys.vars[v].name + "^" + std::to_string(e));
  std::string body;
  for (std::size_t i = 0; i < parts.size(); ++i) body += (i ? "*" : "") + parts[i];
  if (body.empty()) body = "1";
  if (first) return (t.coeff < 0 ? "-" : "") + body;
  return (t.coeff < 0 ? " - " : " + ") + body;
}

}  // namespace

std::string to_text(const ClassSystem& sys) {
  std::ostringstream os;
  os << "# patterns:";
  for (const auto& p : sys.patterns) os << " " << p;
  os << "  H=" << sys.h << "  mode=" << to_string(sys.mode) << "  variables=" << sys.vars.size()
     << "\n";
  for (const auto& eq : sys.eqs) {
    os << sys.vars[eq.lhs].name << " = ";
    if (eq.terms.empty()) os << "0";
    for (std::size_t i = 0; i < eq.terms.size(); ++i) os << term_text(sys, eq.terms[i], i == 0);
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const ClassSystem& sys) {
  using nlohmann::json;
  json j;
  j["patterns"] = sys.patterns;
  j["h"] = sys.h;
  j["mode"] = to_string(sys.mode);
  j["variables"] = json::array();
  for (const auto& v : sys.vars)
    j["variables"].push_back({{"name", v.name}, {"kind", to_string(v.kind)}, {"members", v.members}});
  j["equations"] = json::array();
  for (const auto& eq : sys.eqs) {
    json terms = json::array();
    for (const auto& t : eq.terms) {
      json vars = json::object();
      for (const auto& [v, e] : t.vars) vars[sys.vars[v].name] = e;
      terms.push_back({{"coeff", t.coeff}, {"z", t.z}, {"u", t.u}, {"vars", vars}});
    }
    j["equations"].push_back({{"lhs", sys.vars[eq.lhs].name}, {"terms", terms}});
  }
  return j;
}

ClassSystem system_from_json(const nlohmann::json& j) {
  ClassSystem sys;
  try {
    sys.patterns = j.at("patterns").get<std::vector<std::string>>();
    sys.h = j.at("h").get<int>();
    sys.mode = j.at("mode").get<std::string>() == "avoid" ? Mode::Avoiding : Mode::Full;
    std::map<std::string, int> index;
    static const std::map<std::string, VarKind> kinds = {{"main", VarKind::Main},
                                                         {"circ", VarKind::Circ},
                                                         {"root", VarKind::Root},
                                                         {"group", VarKind::Group},
                                                         {"block", VarKind::Block}};
    for (const auto& v : j.at("variables")) {
      Variable var;
      var.name = v.at("name").get<std::string>();
      auto k = kinds.find(v.at("kind").get<std::string>());
      if (k == kinds.end()) throw Error(ErrorKind::MalformedSystem, "unknown variable kind");
      var.kind = k->second;
      var.members = v.value("members", std::vector<std::string>{});
      if (!index.emplace(var.name, static_cast<int>(sys.vars.size())).second)
        throw Error(ErrorKind::MalformedSystem, "duplicate variable " + var.name);
      sys.vars.push_back(std::move(var));
    }
    for (const auto& e : j.at("equations")) {
      Equation eq;
      auto it = index.find(e.at("lhs").get<std::string>());
      if (it == index.end()) throw Error(ErrorKind::MalformedSystem, "unknown lhs");
      eq.lhs = it->second;
      for (const auto& tj : e.at("terms")) {
        Term t;
        t.coeff = tj.at("coeff").get<std::int64_t>();
        t.z = tj.at("z").get<int>();
        t.u = tj.at("u").get<std::vector<int>>();
        for (const auto& [name, p] : tj.at("vars").items()) {
          auto w = index.find(name);
          if (w == index.end()) throw Error(ErrorKind::MalformedSystem, "unknown variable " + name);
          t.vars.emplace_back(w->second, p.get<int>());
        }
        std::sort(t.vars.begin(), t.vars.end());
        eq.terms.push_back(std::move(t));
      }
      sys.eqs.push_back(std::move(eq));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedSystem, e.what());
  }
  std::sort(sys.eqs.begin(), sys.eqs.end(),
            [](const Equation& a, const Equation& b) { return a.lhs < b.lhs; });
  validate(sys);
  return sys;
}

}  // namespace dissect
