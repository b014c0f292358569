#include "dissect/series.hpp"

#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

namespace dissect {

namespace detail {

ProductPlan plan_products(const ClassSystem& sys) {
  ProductPlan plan;
  plan.nvars = static_cast<int>(sys.vars.size());
  std::map<std::vector<int>, int> memo;
  std::function<int(const std::vector<int>&)> node_of = [&](const std::vector<int>& f) -> int {
    if (f.size() == 1) return f[0];
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    std::vector<int> prefix(f.begin(), f.end() - 1);
    int a = node_of(prefix);
    int id = plan.nvars + static_cast<int>(plan.prods.size());
    plan.prods.emplace_back(a, f.back());
    memo.emplace(f, id);
    return id;
  };
  plan.term_node.resize(plan.nvars);
  std::vector<std::vector<int>> linear(plan.nvars);
  for (int v = 0; v < plan.nvars; ++v) {
    const auto& terms = sys.eqs[v].terms;
    for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
      std::vector<int> f;
      for (const auto& [w, e] : terms[i].vars) f.insert(f.end(), e, w);
      int node = f.empty() ? -1 : node_of(f);
      plan.term_node[v].emplace_back(i, node);
      if (f.size() == 1 && terms[i].z == 0) linear[v].push_back(f[0]);
    }
  }
  std::vector<bool> done(plan.nvars, false);
  std::function<void(int)> visit = [&](int v) {
    if (done[v]) return;
    done[v] = true;
    for (int w : linear[v]) visit(w);
    plan.order.push_back(v);
  };
  for (int v = 0; v < plan.nvars; ++v) visit(v);
  return plan;
}

}  // namespace detail

namespace {

bool vanishes_at(const Term& t, int u_value) {
  return u_value == 0 && std::any_of(t.u.begin(), t.u.end(), [](int x) { return x > 0; });
}

}  // namespace

std::vector<IntSeries> solve_exact(const ClassSystem& sys, int N, int u_value) {
  if (u_value != 0 && u_value != 1) throw Error(ErrorKind::InvalidInput, "u must be 0 or 1");
  return solve_series<mpz_class>(sys, N, [&](const Term& t) {
    return vanishes_at(t, u_value) ? mpz_class(0) : mpz_class(static_cast<long>(t.coeff));
  });
}

std::vector<MarkedSeries> solve_marked(const ClassSystem& sys, int N) {
  return solve_series<UPoly>(sys, N, [](const Term& t) {
    return UPoly::monomial(mpz_class(static_cast<long>(t.coeff)), t.u);
  });
}

std::vector<std::vector<IntSeries>> fixed_point_history(const ClassSystem& sys, int N, int u_value,
                                                        int steps) {
  validate(sys);
  const auto plan = detail::plan_products(sys);
  const int nv = static_cast<int>(sys.vars.size());
  std::vector<IntSeries> x(nv, IntSeries(N));
  std::vector<std::vector<IntSeries>> history;
  IntSeries zser(N);
  if (N >= 1) zser[1] = 1;
  for (int step = 0; step < steps; ++step) {
    // One sweep in dependency order, so linear chains do not stall the
    // valuation gain.
    for (int v : plan.order) {
      IntSeries next(N);
      for (const auto& t : sys.eqs[v].terms) {
        if (vanishes_at(t, u_value)) continue;
        IntSeries term(N);
        term[0] = static_cast<long>(t.coeff);
        for (int k = 0; k < t.z; ++k) term = term * zser;
        for (const auto& [w, e] : t.vars)
          for (int k = 0; k < e; ++k) term = term * x[w];
        next += term;
      }
      x[v] = std::move(next);
    }
    history.push_back(x);
  }
  return history;
}

OuterplanarSeries outerplanar_series(const IntSeries& d, int N) {
  if (d.order() < N + 1) throw Error(ErrorKind::InvalidInput, "D must be known to order N+1");
  OuterplanarSeries out;
  out.b_prime = RatSeries(N);
  for (int n = 0; n <= N; ++n) out.b_prime[n] = mpq_class(d[n + 1]) / 2;
  if (N >= 1) out.b_prime[1] += mpq_class(1, 2);
  RatSeries b = out.b_prime.integrate();
  out.b = RatSeries(N, std::vector<mpq_class>(b.coefficients().begin(), b.coefficients().begin() + N + 1));
  // y = z C'(z) solves y = z exp(B'(y)); each pass fixes one more coefficient.
  RatSeries y(N);
  for (int it = 0; it < N; ++it) {
    RatSeries next = out.b_prime.compose(y).exp().multiply_by_z();
    y = RatSeries(N, std::vector<mpq_class>(next.coefficients().begin(),
                                            next.coefficients().begin() + N + 1));
  }
  out.c_prime = RatSeries(N - 1, y.divide_by_z().coefficients());
  out.c = out.c_prime.integrate();
  return out;
}

CensusReport census_crosscheck(const PatternSet& set, int n_max, int limit) {
  CensusReport rep;
  if (n_max > limit)
    throw Error(ErrorKind::OracleLimitExceeded,
                "census limited to n <= " + std::to_string(limit) + ", got " + std::to_string(n_max));
  ClassSystem sys = build_system(set, Mode::Full);
  auto sol = solve_marked(sys, std::max(n_max - 1, 1));
  MarkedSeries d = dbar_to_d(sol[ClassSystem::kMain]);
  const int m = static_cast<int>(set.size());
  for (int n = 2; n <= n_max; ++n) {
    auto census = occurrence_census(set, n, limit);
    UPoly expected;
    for (const auto& [vec, count] : census)
      expected += UPoly::monomial(mpz_class(static_cast<unsigned long>(count)), vec);
    if (!(expected == d[n])) {
      rep.ok = false;
      rep.mismatch_n = n;
      for (const auto& [vec, count] : census)
        if (d[n].coefficient(vec) != mpz_class(static_cast<unsigned long>(count))) {
          rep.mismatch_vector = vec;
          break;
        }
      rep.detail = "system: " + d[n].to_string(m) + "  census: " + expected.to_string(m);
      return rep;
    }
  }
  return rep;
}

CensusReport partition_crosscheck(const PatternSet& set, Mode mode, int n_max, int limit) {
  CensusReport rep;
  if (n_max > limit)
    throw Error(ErrorKind::OracleLimitExceeded,
                "census limited to n <= " + std::to_string(limit) + ", got " + std::to_string(n_max));
  const int h = h_delta(set);
  auto roots = generate_composite_roots(set, mode);
  std::map<std::string, std::string> name_of;  // shape key -> root name
  for (const auto& r : roots) name_of[r.shape.key()] = r.name();
  ClassSystem sys = build_system(set, mode, roots);
  auto sol = solve_exact(sys, std::max(n_max - 1, 1), mode == Mode::Full ? 1 : 0);

  for (int n = 2; n <= n_max; ++n) {
    std::map<std::string, long> count;  // root name, "" for the big-root class
    bool unknown = false;
    for_each_shape(n, [&](const Shape& s) {
      if (mode == Mode::Avoiding)
        for (const auto& p : set)
          if (count_occurrences(s, p) > 0) return;
      Shape r = root_part(s, h);
      if (r.empty()) {
        ++count[""];
        return;
      }
      auto it = name_of.find(r.key());
      if (it == name_of.end()) {
        unknown = true;
        return;
      }
      ++count[it->second];
    });
    if (unknown) {
      rep.ok = false;
      rep.mismatch_n = n;
      rep.detail = "a dissection has a composite root missing from the catalog";
      return rep;
    }
    for (std::size_t v = 0; v < sys.vars.size(); ++v) {
      const Variable& var = sys.vars[v];
      long expected = 0;
      if (var.kind == VarKind::Circ) {
        expected = count[""];
      } else if (var.kind == VarKind::Root) {
        for (const auto& m : var.members) expected += count[m];
      } else {
        continue;
      }
      if (sol[v][n - 1] != expected) {
        rep.ok = false;
        rep.mismatch_n = n;
        rep.detail = var.name + ": series " + sol[v][n - 1].get_str() + ", census " + std::to_string(expected);
        return rep;
      }
    }
  }
  return rep;
}

PolyFixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open fixture " + path);
  nlohmann::json j;
  try {
    in >> j;
    PolyFixture p;
    p.name = j.value("name", path);
    for (const auto& m : j.at("monomials")) {
      PolyFixture::Mono mono;
      mono.coeff = m.at("coeff").get<long>();
      mono.d = m.at("D").get<int>();
      mono.z = m.at("z").get<int>();
      mono.u = m.at("u").get<std::vector<int>>();
      p.monos.push_back(std::move(mono));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

std::vector<UPoly> fixture_residual(const PolyFixture& p, const MarkedSeries& d, int N) {
  if (d.order() < N) throw Error(ErrorKind::InvalidInput, "series shorter than the check order");
  MarkedSeries dn(N, std::vector<UPoly>(d.coefficients().begin(), d.coefficients().begin() + N + 1));
  std::vector<MarkedSeries> powers{MarkedSeries(N)};
  powers[0][0] = UPoly(1);
  MarkedSeries total(N);
  for (const auto& mono : p.monos) {
    while (static_cast<int>(powers.size()) <= mono.d) powers.push_back(powers.back() * dn);
    UPoly w = UPoly::monomial(mpz_class(mono.coeff), mono.u);
    for (int n = 0; n + mono.z <= N; ++n)
      if (!powers[mono.d][n].is_zero()) total[n + mono.z] += w * powers[mono.d][n];
  }
  return total.coefficients();
}

bool residual_check(const PolyFixture& p, const MarkedSeries& d, int N, int* first_bad) {
  auto r = fixture_residual(p, d, N);
  for (int n = 0; n <= N; ++n)
    if (!r[n].is_zero()) {
      if (first_bad) *first_bad = n;
      return false;
    }
  return true;
}

std::string coefficient_string(const mpz_class& c) { return c.get_str(); }
std::string coefficient_string(const mpq_class& c) { return c.get_str(); }

}  // namespace dissect
