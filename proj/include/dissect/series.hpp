#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dissect/class_system.hpp"
#include "dissect/error.hpp"
#include "dissect/upoly.hpp"

namespace dissect {

// Power series truncated after z^N.
template <class C>
class TruncSeries {
 public:
  TruncSeries() = default;
  explicit TruncSeries(int order) : c_(order + 1, C(0)) {}
  TruncSeries(int order, std::vector<C> coeffs) : c_(std::move(coeffs)) { c_.resize(order + 1, C(0)); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const C& operator[](int n) const { return c_[n]; }
  C& operator[](int n) { return c_[n]; }
  const std::vector<C>& coefficients() const { return c_; }

  TruncSeries& operator+=(const TruncSeries& o) {
    for (int n = 0; n <= std::min(order(), o.order()); ++n) c_[n] += o.c_[n];
    return *this;
  }
  TruncSeries& operator-=(const TruncSeries& o) {
    for (int n = 0; n <= std::min(order(), o.order()); ++n) c_[n] -= o.c_[n];
    return *this;
  }
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    int N = std::min(a.order(), b.order());
    TruncSeries out(N);
    for (int i = 0; i <= N; ++i) {
      if (a.c_[i] == C(0)) continue;
      for (int j = 0; i + j <= N; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }
  friend TruncSeries operator*(const C& s, TruncSeries a) {
    for (auto& x : a.c_) x = s * x;
    return a;
  }
  bool operator==(const TruncSeries& o) const { return c_ == o.c_; }

  TruncSeries pow(int k) const {
    TruncSeries out(order());
    out.c_[0] = C(1);
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
  }
  TruncSeries multiply_by_z() const {
    TruncSeries out(order() + 1);
    for (int n = 0; n <= order(); ++n) out.c_[n + 1] = c_[n];
    return out;
  }
  TruncSeries divide_by_z() const {
    if (!(c_[0] == C(0))) throw Error(ErrorKind::InvalidInput, "divide_by_z needs a zero constant term");
    TruncSeries out(order() - 1);
    for (int n = 1; n <= order(); ++n) out.c_[n - 1] = c_[n];
    return out;
  }
  TruncSeries derivative() const {
    TruncSeries out(std::max(order() - 1, 0));
    for (int n = 1; n <= order(); ++n) out.c_[n - 1] = C(n) * c_[n];
    return out;
  }
  // Antiderivative with zero constant; needs division in C.
  TruncSeries integrate() const {
    TruncSeries out(order() + 1);
    for (int n = 0; n <= order(); ++n) out.c_[n + 1] = c_[n] / C(n + 1);
    return out;
  }
  // exp of a series without constant term, from g' = f' g.
  TruncSeries exp() const {
    if (!(c_[0] == C(0))) throw Error(ErrorKind::InvalidInput, "exp needs a zero constant term");
    TruncSeries g(order());
    g.c_[0] = C(1);
    for (int n = 1; n <= order(); ++n) {
      C acc(0);
      for (int k = 1; k <= n; ++k) acc += C(k) * c_[k] * g.c_[n - k];
      g.c_[n] = acc / C(n);
    }
    return g;
  }
  // f(g(z)) for g without constant term, by Horner's rule.
  TruncSeries compose(const TruncSeries& g) const {
    if (!(g.c_[0] == C(0))) throw Error(ErrorKind::InvalidInput, "compose needs g(0) = 0");
    int N = std::min(order(), g.order());
    TruncSeries out(N);
    for (int n = N; n >= 0; --n) {
      out = out * g;
      out.c_[0] += c_[n];
    }
    return out;
  }

 private:
  std::vector<C> c_;
};

using IntSeries = TruncSeries<mpz_class>;
using RatSeries = TruncSeries<mpq_class>;
using MarkedSeries = TruncSeries<UPoly>;

// Online coefficient-by-coefficient solver: each coefficient of every
// variable is computed once, from lower-order coefficients and from
// variables earlier in the order of linear dependencies.  Equivalent to the
// fixed-point iteration but with every coefficient final when written.
template <class C>
std::vector<TruncSeries<C>> solve_series(const ClassSystem& sys, int N,
                                         const std::function<C(const Term&)>& weight);

// u fixed to 0 or 1 for every pattern.
std::vector<IntSeries> solve_exact(const ClassSystem& sys, int N, int u_value);
std::vector<MarkedSeries> solve_marked(const ClassSystem& sys, int N);

// Fixed-point iteration x <- F(x) started at 0 and truncated at N, sweeping
// the variables in dependency order.
// history[k] holds the iterate after k+1 steps; used to check that step k
// never changes coefficients below order k.
std::vector<std::vector<IntSeries>> fixed_point_history(const ClassSystem& sys, int N, int u_value,
                                                        int steps);

template <class C>
TruncSeries<C> dbar_to_d(const TruncSeries<C>& s) {
  return s.multiply_by_z();
}

struct OuterplanarSeries {
  RatSeries b_prime;  // B'
  RatSeries b;        // B
  RatSeries c_prime;  // C'
  RatSeries c;        // C
};

// From the dissection series D (order N+1) of a class closed under the
// outerplanar transfer: 2-connected, connected and general exponential series.
OuterplanarSeries outerplanar_series(const IntSeries& d, int N);

struct CensusReport {
  bool ok = true;
  int mismatch_n = -1;
  std::vector<int> mismatch_vector;
  std::string detail;
};

// Compares the u-marked D(z,u) of the Full system with the brute-force census.
CensusReport census_crosscheck(const PatternSet& set, int n_max, int limit = 14);

// Counts the dissections of each n-gon, n <= n_max, by composite root and
// compares with the class series (u = 1 for Full, u = 0 for Avoiding).
CensusReport partition_crosscheck(const PatternSet& set, Mode mode, int n_max, int limit = 14);

// Polynomial P(D, z, u) as a list of monomials.
struct PolyFixture {
  struct Mono {
    long coeff;
    int d, z;
    std::vector<int> u;
  };
  std::string name;
  std::vector<Mono> monos;
};

PolyFixture load_fixture(const std::string& path);
// Coefficient of z^n of P(D(z,u), z, u) for n <= N, where d has order >= N.
std::vector<UPoly> fixture_residual(const PolyFixture& p, const MarkedSeries& d, int N);
bool residual_check(const PolyFixture& p, const MarkedSeries& d, int N, int* first_bad = nullptr);

std::string coefficient_string(const mpz_class& c);
std::string coefficient_string(const mpq_class& c);

}  // namespace dissect

#include "dissect/series_impl.hpp"
