// Command-line front end: roots, system, series, check, constants,
// limitlaw, outerplanar.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dissect/acceptance.hpp"
#include "dissect/analytic.hpp"
#include "dissect/class_system.hpp"
#include "dissect/composite_roots.hpp"
#include "dissect/series.hpp"

#ifndef DISSECT_DATA_DIR
#define DISSECT_DATA_DIR "data"
#endif

using namespace dissect;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string patterns;
  std::string mode = "full";
  int terms = 20;
  bool mark = false;
  int oracle_max = 0;
  int precision = 15;
  std::string format = "text";
  std::string out;
  std::string fixture;
  std::string system_file;
  std::string data = DISSECT_DATA_DIR;
  bool force = false;
  bool all = false;
};

// Exit status 1: the computation ran but a check or tolerance failed.
struct CheckFailed {};

// A result rendered as text, csv or json.  Rows are key/value pairs for
// reports and a header plus cells for tables.
struct Output {
  json doc = json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string text;  // preformatted text, used instead of the table when set
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const Output& o, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << o.doc.dump(2) << "\n";
  } else if (format == "csv") {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
      os << "\n";
    };
    line(o.header);
    for (const auto& r : o.rows) line(r);
  } else if (!o.text.empty()) {
    os << o.text;
  } else {
    std::vector<std::size_t> w(o.header.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = o.header[i].size();
    for (const auto& r : o.rows)
      for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r[i];
        if (i + 1 < r.size()) s += std::string(w[i] - r[i].size() + 2, ' ');
      }
      os << s << "\n";
    };
    line(o.header);
    for (const auto& r : o.rows) line(r);
  }
  return os.str();
}

std::string fmt(long double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string fmt(const Extended& x, int digits) { return x.str(digits); }

Mode parse_mode(const std::string& s) {
  if (s == "full") return Mode::Full;
  if (s == "avoid") return Mode::Avoiding;
  throw Error(ErrorKind::InvalidInput, "mode must be full or avoid, got " + s);
}

PatternSet patterns_of(const RunConfig& c) {
  if (c.patterns.empty()) throw Error(ErrorKind::InvalidInput, "--patterns is required");
  return parse_pattern_set(c.patterns);
}

ClassSystem system_of(const RunConfig& c) { return build_system(patterns_of(c), parse_mode(c.mode)); }

// Report rows are (key, value); the json document mirrors them.
void add(Output& o, const std::string& key, const std::string& value) {
  if (o.header.empty()) o.header = {"key", "value"};
  o.rows.push_back({key, value});
}

Output cmd_roots(const RunConfig& c) {
  auto set = patterns_of(c);
  auto roots = generate_composite_roots(set, parse_mode(c.mode));
  Output o;
  o.header = {"name", "vertices", "chords", "edges", "maximal", "occurrences"};
  o.doc["patterns"] = pattern_set_name(set);
  o.doc["mode"] = c.mode;
  o.doc["roots"] = json::array();
  for (const auto& r : roots) {
    auto d = r.dissection();
    std::string edges;
    json ej = json::array();
    for (std::size_t i = 0; i < r.edge_class.size(); ++i) {
      edges += r.edge_class[i] == EdgeClass::Free ? 'F' : 'R';
      ej.push_back(to_string(r.edge_class[i]));
    }
    std::string occ;
    for (std::size_t i = 0; i < r.occurrences.size(); ++i) occ += (i ? " " : "") + std::to_string(r.occurrences[i]);
    o.rows.push_back({r.name(), std::to_string(d.size()), to_string(d), edges, r.maximal ? "yes" : "no", occ});
    json chords = json::array();
    for (const auto& ch : d.chords()) chords.push_back({ch.a, ch.b});
    o.doc["roots"].push_back({{"name", r.name()},
                              {"vertices", d.size()},
                              {"chords", chords},
                              {"edge_classes", ej},
                              {"maximal", r.maximal},
                              {"occurrences", r.occurrences}});
  }
  o.doc["count"] = roots.size();
  return o;
}

Output cmd_system(const RunConfig& c) {
  auto sys = system_of(c);
  validate(sys);
  Output o;
  o.doc = to_json(sys);
  o.text = to_text(sys);
  o.header = {"variable", "kind", "terms"};
  for (std::size_t i = 0; i < sys.vars.size(); ++i)
    o.rows.push_back({sys.vars[i].name, to_string(sys.vars[i].kind), std::to_string(sys.eqs[i].terms.size())});
  return o;
}

Output cmd_series(const RunConfig& c) {
  if (c.terms < 2) throw Error(ErrorKind::InvalidInput, "--terms must be at least 2");
  ClassSystem sys = c.patterns.empty() ? unrestricted_system() : system_of(c);
  Output o;
  o.doc["patterns"] = c.patterns.empty() ? "none" : c.patterns;
  o.doc["mode"] = c.mode;
  json coeffs = json::object();
  if (c.mark) {
    if (sys.num_u() == 0) throw Error(ErrorKind::InvalidInput, "--mark needs patterns");
    auto d = dbar_to_d(solve_marked(sys, c.terms - 1)[ClassSystem::kMain]);
    o.header = {"n", "D_n(u)"};
    for (int n = 2; n <= c.terms; ++n) {
      std::string s = d[n].to_string(sys.num_u());
      o.rows.push_back({std::to_string(n), s});
      coeffs[std::to_string(n)] = s;
    }
  } else {
    int u = sys.num_u() > 0 && parse_mode(c.mode) == Mode::Avoiding ? 0 : 1;
    auto d = dbar_to_d(solve_exact(sys, c.terms - 1, u)[ClassSystem::kMain]);
    o.header = {"n", "D_n"};
    for (int n = 2; n <= c.terms; ++n) {
      o.rows.push_back({std::to_string(n), d[n].get_str()});
      coeffs[std::to_string(n)] = d[n].get_str();
    }
  }
  o.doc["coefficients"] = coeffs;
  return o;
}

// Any failing check turns the exit status to 1 after the report is written.
struct Status {
  bool failed = false;
};

void report_check(Output& o, Status& st, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) st.failed = true;
  o.rows.push_back({name, ok ? "PASS" : "FAIL", detail});
  o.doc["checks"].push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
}

Output cmd_check(const RunConfig& c, Status& st) {
  Output o;
  o.header = {"check", "result", "detail"};
  o.doc["checks"] = json::array();
  if (c.all) {
    for (const auto& r : run_acceptance(c.data)) {
      std::string detail;
      for (const auto& d : r.details) detail += (detail.empty() ? "" : "; ") + d;
      report_check(o, st, std::to_string(r.id) + " " + r.title, r.pass, detail);
      o.text += format_result(r, false) + "\n";
    }
    return o;
  }
  auto set = patterns_of(c);
  Mode mode = parse_mode(c.mode);
  const int limit = c.force ? 1000 : 14;
  if (c.oracle_max > 0) {
    if (mode == Mode::Full) {
      auto rep = census_crosscheck(set, c.oracle_max, limit);
      report_check(o, st, "census", rep.ok,
                   rep.ok ? "marked series = census, n <= " + std::to_string(c.oracle_max) : rep.detail);
    }
    auto part = partition_crosscheck(set, mode, c.oracle_max, limit);
    report_check(o, st, "partition", part.ok,
                 part.ok ? "class series = census by composite root, n <= " + std::to_string(c.oracle_max) : part.detail);
  }
  if (!c.fixture.empty()) {
    std::string path = c.fixture;
    if (path.find('/') == std::string::npos && path.find(".json") == std::string::npos)
      path = c.data + "/" + path + ".json";
    auto fx = load_fixture(path);
    const int N = c.terms;
    auto d = dbar_to_d(solve_marked(build_system(set, Mode::Full), N)[ClassSystem::kMain]);
    int bad = -1;
    bool ok = residual_check(fx, d, N, &bad);
    report_check(o, st, "fixture " + fx.name, ok,
                 ok ? "P(D, z, u) = O(z^" + std::to_string(N + 1) + ")" : "first nonzero coefficient at z^" + std::to_string(bad));
  }
  if (!c.system_file.empty()) {
    std::ifstream in(c.system_file);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + c.system_file);
    ClassSystem given = system_from_json(json::parse(in));
    ClassSystem built = build_system(set, mode);
    int u = mode == Mode::Avoiding ? 0 : 1;
    auto a = dbar_to_d(solve_exact(given, c.terms - 1, u)[ClassSystem::kMain]);
    auto b = dbar_to_d(solve_exact(built, c.terms - 1, u)[ClassSystem::kMain]);
    int bad = -1;
    for (int n = 0; n <= c.terms && bad < 0; ++n)
      if (a[n] != b[n]) bad = n;
    report_check(o, st, "system file", bad < 0,
                 bad < 0 ? "series agree through n = " + std::to_string(c.terms)
                         : std::string(to_string(ErrorKind::MismatchAt)) + " n = " + std::to_string(bad) + ": file " +
                               a[bad].get_str() + ", built " + b[bad].get_str());
  }
  if (o.rows.empty()) throw Error(ErrorKind::InvalidInput, "nothing to check: give --oracle-max, --fixture, --system or --all");
  return o;
}

template <class Real>
void constants_into(Output& o, const ClassSystem& sys, int digits) {
  auto g = growth_constants<Real>(sys);
  add(o, "r", fmt(g.r, digits));
  add(o, "alpha", fmt(g.alpha, digits));
  add(o, "sqrt_coef", fmt(g.sqrt_coef, digits));
  add(o, "newton_steps", std::to_string(g.expansion.newton_steps));
  for (const auto& r : o.rows) o.doc[r[0]] = r[1];
}

Output cmd_constants(const RunConfig& c) {
  ClassSystem sys = c.patterns.empty() ? unrestricted_system() : system_of(c);
  if (sys.num_u() > 0 && parse_mode(c.mode) == Mode::Full)
    throw Error(ErrorKind::InvalidInput, "constants are for avoiding classes; use --mode avoid");
  Output o;
  if (c.precision > 18) {
    Extended::default_precision(c.precision + 10);
    constants_into<Extended>(o, sys, c.precision);
  } else {
    constants_into<long double>(o, sys, c.precision);
  }
  return o;
}

Output cmd_limitlaw(const RunConfig& c) {
  if (parse_mode(c.mode) != Mode::Full) throw Error(ErrorKind::InvalidInput, "limitlaw needs --mode full");
  auto set = patterns_of(c);
  auto sys = build_system(set, Mode::Full);
  const int d = std::min(c.precision, 15);
  Output o;
  o.header = {"pattern", "rho", "mu", "sigma2"};
  o.doc["patterns"] = json::array();
  for (int i = 0; i < sys.num_u(); ++i) {
    auto L = limit_law_constants<long double>(sys, i);
    o.rows.push_back({sys.patterns[i], fmt(L.rho, d), fmt(L.mu, d), fmt(L.sigma2, d)});
    o.doc["patterns"].push_back({{"pattern", sys.patterns[i]}, {"rho", L.rho}, {"mu", L.mu}, {"sigma2", L.sigma2}});
  }
  if (sys.num_u() > 1 && sys.num_u() <= 3) {
    auto cov = covariance_matrix<long double>(sys);
    o.doc["covariance"] = cov.sigma;
    std::ostringstream os;
    os << render(o, "text") << "covariance\n";
    for (const auto& row : cov.sigma) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "  " : "") << fmt(row[j], d);
      os << "\n";
    }
    o.text = os.str();
  }
  return o;
}

Output cmd_outerplanar(const RunConfig& c) {
  auto set = patterns_of(c);
  Mode mode = parse_mode(c.mode);
  auto sys = build_system(set, mode);
  const int d = std::min(c.precision, 15);
  Output o;
  if (mode == Mode::Avoiding) {
    auto G = outerplanar_g<long double>(sys);
    add(o, "tau", fmt(G.tau, d));
    add(o, "rho", fmt(G.rho, d));
    add(o, "g", fmt(G.connected_trunc, d));
    add(o, "g_limit", fmt(G.connected, d));
    add(o, "C_rho", fmt(G.C_rho_trunc, d));
    add(o, "g_general", fmt(G.general_trunc, d));
    add(o, "terms", std::to_string(G.terms));
    for (const auto& r : o.rows) o.doc[r[0]] = r[1];
    return o;
  }
  o.header = {"pattern", "tau", "rho", "D_tau", "tau_u", "rho_u", "rho_uu", "mu", "sigma2"};
  o.doc["patterns"] = json::array();
  for (int i = 0; i < sys.num_u(); ++i) {
    auto L = outerplanar_limit_law<long double>(sys, i);
    o.rows.push_back({sys.patterns[i], fmt(L.tau, d), fmt(L.rho, d), fmt(L.D, d), fmt(L.tau_u, d), fmt(L.rho_u, d),
                      fmt(L.rho_uu, d), fmt(L.mu, d), fmt(L.sigma2, d)});
    json j;
    for (std::size_t k = 0; k < o.header.size(); ++k) j[o.header[k]] = o.rows.back()[k];
    o.doc["patterns"].push_back(j);
  }
  return o;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence:
    case ErrorKind::NewtonDiverged:
    case ErrorKind::NoSingularityInRange:
    case ErrorKind::DegenerateKernel:
    case ErrorKind::DerivativeUnstable:
    case ErrorKind::SubcriticalityViolated:
    case ErrorKind::MismatchAt:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern-restricted polygon dissections: classes, series and asymptotics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--patterns", cfg.patterns, "comma separated names (C3..C8, patternI, patternII) or a .json file");
    s->add_option("--mode", cfg.mode, "full or avoid")->check(CLI::IsMember({"full", "avoid"}));
    s->add_option("--terms", cfg.terms, "truncation order N");
    s->add_option("--precision", cfg.precision, "significant digits")->check(CLI::Range(15, 1000));
    s->add_option("--format", cfg.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    s->add_option("--out", cfg.out, "write to this file instead of stdout");
  };
  auto* roots = app.add_subcommand("roots", "composite roots with edge classes");
  auto* system = app.add_subcommand("system", "equation system of the classes");
  auto* series = app.add_subcommand("series", "coefficients of D(z)");
  series->add_flag("--mark", cfg.mark, "keep the u-marking");
  auto* check = app.add_subcommand("check", "cross-checks against the census and fixtures");
  check->add_option("--oracle-max", cfg.oracle_max, "largest n for the brute-force census");
  check->add_option("--fixture", cfg.fixture, "p3, p4 or a polynomial fixture file");
  check->add_option("--system", cfg.system_file, "system JSON to compare with the built one");
  check->add_flag("--force", cfg.force, "allow --oracle-max above 14");
  check->add_flag("--all", cfg.all, "replay every acceptance criterion");
  check->add_option("--data", cfg.data, "directory with tables and fixtures");
  auto* constants = app.add_subcommand("constants", "r and alpha of an avoiding class");
  auto* limitlaw = app.add_subcommand("limitlaw", "mean and variance constants of pattern counts");
  auto* outer = app.add_subcommand("outerplanar", "outerplanar graph constants");
  for (auto* s : {roots, system, series, check, constants, limitlaw, outer}) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (check->parsed() && !cfg.all && cfg.terms == 20 && !cfg.fixture.empty()) cfg.terms = 30;

  Status st;
  try {
    Output o;
    if (roots->parsed()) o = cmd_roots(cfg);
    else if (system->parsed()) o = cmd_system(cfg);
    else if (series->parsed()) o = cmd_series(cfg);
    else if (check->parsed()) o = cmd_check(cfg, st);
    else if (constants->parsed()) o = cmd_constants(cfg);
    else if (limitlaw->parsed()) o = cmd_limitlaw(cfg);
    else o = cmd_outerplanar(cfg);
    std::string text = render(o, cfg.format);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + cfg.out);
      f << text;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return st.failed ? 1 : 0;
}
