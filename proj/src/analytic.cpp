#include "dissect/analytic.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dissect/series.hpp"

namespace dissect {

namespace {

constexpr int kSeedTerms = 200;

template <class Real>
Real ipow(const Real& x, int k) {
  Real r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

long double falling(int p, int k) {
  long double r = 1;
  for (int i = 0; i < k; ++i) r *= p - i;
  return r;
}

template <class Real>
Real eps() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
Real max_abs(const Vec<Real>& v) {
  Real m(0);
  for (int i = 0; i < v.size(); ++i) {
    using std::abs;
    Real a = abs(v[i]);
    if (a > m) m = a;
  }
  return m;
}

template <class Real>
bool finite(const Vec<Real>& v) {
  for (int i = 0; i < v.size(); ++i) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    if (!isfinite(v[i])) return false;
  }
  return true;
}

template <class Real>
Mat<Real> jacobian_a(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y) {
  Mat<Real> a = -ns.Fy(z, y);
  for (int i = 0; i < ns.size(); ++i) a(i, i) += Real(1);
  return a;
}

template <class Real>
Real residual_tol(const Vec<Real>& y) {
  return Real(64) * eps<Real>() * (Real(1) + max_abs(y));
}

// Plain Newton on y - F(z, y) = 0; y is updated in place.
template <class Real>
bool newton(const NumericSystem<Real>& ns, const Real& z, Vec<Real>& y, NewtonStats& st,
            int max_iter = 100) {
  for (st.iterations = 0; st.iterations < max_iter; ++st.iterations) {
    Vec<Real> r = y - ns.F(z, y);
    if (!finite(r)) return false;
    Real res = max_abs(r);
    st.residual = static_cast<double>(res);
    if (res <= residual_tol(y)) return true;
    Vec<Real> dy = jacobian_a(ns, z, y).partialPivLu().solve(r);
    y -= dy;
    if (!finite(y)) return false;
  }
  return false;
}

// The branch continues from `below` (a valid point at smaller z) to z.
template <class Real>
bool continue_branch(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& below, Vec<Real>& y,
                     NewtonStats& st) {
  y = below;
  if (!newton(ns, z, y, st)) return false;
  Real tol = Real(1e3) * residual_tol(y);
  for (int i = 0; i < y.size(); ++i)
    if (y[i] < below[i] - tol) return false;
  return branch_det(ns, z, y) > 0;
}

// Solves [A b; c^T 0] [x; s] = [rhs; 0] with b = c = ones.
template <class Real>
Vec<Real> bordered_solve(const Mat<Real>& a, const Vec<Real>& rhs, Real rhs_last) {
  const int n = static_cast<int>(a.rows());
  Mat<Real> m = Mat<Real>::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = a;
  for (int i = 0; i < n; ++i) {
    m(i, n) = Real(1);
    m(n, i) = Real(1);
  }
  Vec<Real> r(n + 1);
  r.head(n) = rhs;
  r[n] = rhs_last;
  Vec<Real> x = m.partialPivLu().solve(r);
  return x.head(n);
}

}  // namespace

template <class Real>
NumericSystem<Real>::NumericSystem(const ClassSystem& sys, const std::vector<Real>& u)
    : sys_(sys), u_(u), n_(static_cast<int>(sys.vars.size())) {
  if (static_cast<int>(u.size()) != sys.num_u())
    throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(sys.num_u()) + " marker values");
  validate(sys_);
  eqs_.resize(n_);
  auto weight = [&](const Term& t) {
    Real w(static_cast<long double>(t.coeff));
    for (std::size_t i = 0; i < t.u.size(); ++i) w *= ipow(u_[i], t.u[i]);
    return w;
  };
  for (int e = 0; e < n_; ++e)
    for (const Term& t : sys_.eqs[e].terms) {
      NTerm nt;
      nt.w = weight(t);
      nt.z = t.z;
      nt.vars = t.vars;
      nt.dw.assign(u_.size(), Real(0));
      for (std::size_t i = 0; i < t.u.size(); ++i) {
        if (t.u[i] == 0) continue;
        Real d(static_cast<long double>(t.coeff * t.u[i]));
        for (std::size_t k = 0; k < t.u.size(); ++k) d *= ipow(u_[k], k == i ? t.u[k] - 1 : t.u[k]);
        nt.dw[i] = d;
      }
      eqs_[e].push_back(std::move(nt));
    }
  series_n_ = kSeedTerms;
  auto s = solve_series<Real>(sys_, series_n_, weight);
  series_.resize(n_);
  for (int v = 0; v < n_; ++v) series_[v] = s[v].coefficients();
}

template <class Real>
Real NumericSystem<Real>::monomial(const NTerm& t, const Real& z, const Vec<Real>& y, int kz, int d1,
                                   int d2) const {
  if (kz > t.z) return Real(0);
  Real r = t.w * Real(falling(t.z, kz)) * ipow(z, t.z - kz);
  int used = 0;
  for (const auto& [v, p] : t.vars) {
    int c = (v == d1) + (v == d2);
    if (c > p) return Real(0);
    used += c;
    if (c) r *= Real(falling(p, c));
    r *= ipow(y[v], p - c);
  }
  if (used != (d1 >= 0) + (d2 >= 0)) return Real(0);
  return r;
}

template <class Real>
Vec<Real> NumericSystem<Real>::F(const Real& z, const Vec<Real>& y) const {
  Vec<Real> out = Vec<Real>::Zero(n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e]) out[e] += monomial(t, z, y, 0, -1, -1);
  return out;
}

template <class Real>
Mat<Real> NumericSystem<Real>::Fy(const Real& z, const Vec<Real>& y) const {
  Mat<Real> out = Mat<Real>::Zero(n_, n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e])
      for (const auto& vp : t.vars) out(e, vp.first) += monomial(t, z, y, 0, vp.first, -1);
  return out;
}

template <class Real>
Vec<Real> NumericSystem<Real>::Fz(const Real& z, const Vec<Real>& y) const {
  Vec<Real> out = Vec<Real>::Zero(n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e]) out[e] += monomial(t, z, y, 1, -1, -1);
  return out;
}

template <class Real>
Vec<Real> NumericSystem<Real>::Fu(const Real& z, const Vec<Real>& y, int i) const {
  Vec<Real> out = Vec<Real>::Zero(n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e]) {
      if (t.dw[i] == 0) continue;
      NTerm d = t;
      d.w = t.dw[i];
      out[e] += monomial(d, z, y, 0, -1, -1);
    }
  return out;
}

template <class Real>
Mat<Real> NumericSystem<Real>::Fyy_times(const Real& z, const Vec<Real>& y, const Vec<Real>& v) const {
  Mat<Real> out = Mat<Real>::Zero(n_, n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e])
      for (const auto& a : t.vars)
        for (const auto& b : t.vars) out(e, b.first) += v[a.first] * monomial(t, z, y, 0, a.first, b.first);
  return out;
}

template <class Real>
Vec<Real> NumericSystem<Real>::Fzy_times(const Real& z, const Vec<Real>& y, const Vec<Real>& v) const {
  Vec<Real> out = Vec<Real>::Zero(n_);
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e])
      for (const auto& a : t.vars) out[e] += v[a.first] * monomial(t, z, y, 1, a.first, -1);
  return out;
}

template <class Real>
std::vector<Vec<Real>> NumericSystem<Real>::curve_jet(const Real& z, const Real& dz,
                                                      const std::vector<Vec<Real>>& Y, int K) const {
  using Poly = std::vector<Real>;
  auto mul = [K](const Poly& a, const Poly& b) {
    Poly c(K + 1, Real(0));
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  auto power = [&](const Poly& a, int p) {
    Poly r(K + 1, Real(0));
    r[0] = Real(1);
    for (int i = 0; i < p; ++i) r = mul(r, a);
    return r;
  };
  Poly zp(K + 1, Real(0));
  zp[0] = z;
  if (K >= 1) zp[1] = dz;
  std::vector<Poly> yp(n_, Poly(K + 1, Real(0)));
  for (int v = 0; v < n_; ++v)
    for (int k = 0; k <= K && k < static_cast<int>(Y.size()); ++k) yp[v][k] = Y[k][v];

  std::vector<Vec<Real>> out(K + 1, Vec<Real>::Zero(n_));
  for (int e = 0; e < n_; ++e)
    for (const auto& t : eqs_[e]) {
      Poly p = power(zp, t.z);
      for (const auto& [v, k] : t.vars) p = mul(p, power(yp[v], k));
      for (int k = 0; k <= K; ++k) out[k][e] += t.w * p[k];
    }
  return out;
}

template <class Real>
Vec<Real> NumericSystem<Real>::partial_sum(const Real& z) const {
  Vec<Real> out(n_);
  for (int v = 0; v < n_; ++v) {
    Real acc(0);
    for (int n = series_n_; n >= 0; --n) acc = acc * z + series_[v][n];
    out[v] = acc;
  }
  return out;
}

template <class Real>
Real branch_det(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y) {
  return jacobian_a(ns, z, y).partialPivLu().determinant();
}

template <class Real>
BranchPoint<Real> eval_branch(const NumericSystem<Real>& ns, const Real& z) {
  if (z < 0) throw Error(ErrorKind::InvalidInput, "branch evaluation needs z >= 0");
  BranchPoint<Real> bp{z, ns.partial_sum(z), {}};
  Vec<Real> seed = bp.y;
  if (!finite(seed) || !continue_branch(ns, z, Vec<Real>(seed), bp.y, bp.stats))
    throw Error(ErrorKind::NewtonDiverged,
                "no branch value at z = " + std::to_string(static_cast<double>(z)));
  return bp;
}

template <class Real>
std::vector<Vec<Real>> branch_taylor(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y,
                                     int K) {
  std::vector<Vec<Real>> Y{y};
  auto lu = jacobian_a(ns, z, y).partialPivLu();
  for (int k = 1; k <= K; ++k) {
    Y.push_back(Vec<Real>::Zero(ns.size()));
    auto jet = ns.curve_jet(z, Real(1), Y, k);
    Y[k] = lu.solve(jet[k]);
  }
  return Y;
}

template <class Real>
SingularExpansion<Real> find_singularity(const NumericSystem<Real>& ns) {
  using std::abs;
  using std::sqrt;
  const int n = ns.size();
  const int N = ns.series_terms();
  SingularExpansion<Real> out;

  // Ratio estimate from the seed series of the main class.
  Real est(0.25);
  for (int k = N; k > N / 2; --k) {
    const Real& a = ns.series_coefficient(ClassSystem::kMain, k);
    const Real& b = ns.series_coefficient(ClassSystem::kMain, k - 1);
    if (a > 0 && b > 0) {
      est = b / a;
      break;
    }
  }

  Real lo = est / 2;
  Vec<Real> ylo;
  for (int tries = 0;; ++tries) {
    try {
      ylo = eval_branch(ns, lo).y;
      break;
    } catch (const Error&) {
      if (tries > 40) throw Error(ErrorKind::NoSingularityInRange, "no valid branch point near 0");
      lo /= 2;
    }
  }
  Real hi = est * Real(1.05);
  NewtonStats st;
  Vec<Real> y;
  for (int tries = 0; continue_branch(ns, hi, ylo, y, st); ++tries) {
    if (tries > 60) throw Error(ErrorKind::NoSingularityInRange, "branch does not end");
    lo = hi;
    ylo = y;
    hi *= Real(1.2);
  }

  const Real target = sqrt(eps<Real>()) * Real(1e-2);
  while (hi - lo > target * hi) {
    Real mid = (lo + hi) / 2;
    if (continue_branch(ns, mid, ylo, y, st)) {
      lo = mid;
      ylo = y;
    } else {
      hi = mid;
    }
    ++out.bisection_steps;
  }

  // Newton on y = F(z, y), (I - F_y) v = 0, sum(v) = 1 in (z, y, v).
  Real z = lo;
  y = ylo;
  Mat<Real> a = jacobian_a(ns, z, y);
  Vec<Real> v = a.partialPivLu().solve(Vec<Real>::Ones(n));
  v /= v.sum();
  const int m = 2 * n + 1;
  bool converged = false;
  for (out.newton_steps = 0; out.newton_steps < 60; ++out.newton_steps) {
    a = jacobian_a(ns, z, y);
    Vec<Real> r(m);
    r.head(n) = y - ns.F(z, y);
    r.segment(n, n) = a * v;
    r[2 * n] = v.sum() - Real(1);
    Real res = max_abs(r);
    out.residual = static_cast<double>(res);
    if (res <= residual_tol(y) * Real(4)) {
      converged = true;
      break;
    }
    Mat<Real> J = Mat<Real>::Zero(m, m);
    J.block(0, 0, n, 1) = -ns.Fz(z, y);
    J.block(0, 1, n, n) = a;
    J.block(n, 0, n, 1) = -ns.Fzy_times(z, y, v);
    J.block(n, 1, n, n) = -ns.Fyy_times(z, y, v);
    J.block(n, 1 + n, n, n) = a;
    for (int i = 0; i < n; ++i) J(2 * n, 1 + n + i) = Real(1);
    Vec<Real> x(m);
    x[0] = z;
    x.segment(1, n) = y;
    x.segment(1 + n, n) = v;
    x -= J.partialPivLu().solve(r);
    if (!finite(x)) break;
    z = x[0];
    y = x.segment(1, n);
    v = x.segment(1 + n, n);
  }
  if (!converged || z < lo * Real(0.999) || z > hi * Real(1.001))
    throw Error(ErrorKind::NonConvergence, "singularity polish did not converge");

  out.rho = z;
  out.y0 = y;
  out.kernel = v;
  a = jacobian_a(ns, z, y);
  Vec<Real> w = bordered_solve<Real>(a.transpose(), Vec<Real>::Zero(n), Real(1));
  out.left = w;

  // Order s^2 fixes the size of the s^1 term, order s^3 the kernel part of
  // the s^2 term.
  Mat<Real> H = ns.Fyy_times(z, y, v);
  Vec<Real> fyy_vv = H * v;
  Vec<Real> fz = ns.Fz(z, y);
  Real A2 = w.dot(fyy_vv);
  Real B2 = w.dot(fz);
  if (abs(A2) <= sqrt(eps<Real>()) * (abs(B2) + 1) || A2 * B2 <= 0)
    throw Error(ErrorKind::DegenerateKernel, "quadratic coefficient vanishes at the singularity");
  Real kappa = sqrt(Real(2) * z * B2 / A2);
  out.h = kappa * v;
  Vec<Real> rhs2 = -z * fz + kappa * kappa / 2 * fyy_vv;
  Vec<Real> c2p = bordered_solve<Real>(a, rhs2, Real(0));
  auto jet = ns.curve_jet(z, Real(0), std::vector<Vec<Real>>{y, v}, 3);
  Real lambda = -(w.dot(H * c2p) - z * w.dot(ns.Fzy_times(z, y, v)) + kappa * kappa * w.dot(jet[3])) / A2;
  out.c2 = c2p + lambda * v;
  return out;
}

template <class Real>
GrowthConstants<Real> growth_constants(const ClassSystem& avoiding) {
  using std::sqrt;
  NumericSystem<Real> ns(avoiding, std::vector<Real>(avoiding.num_u(), Real(0)));
  GrowthConstants<Real> g;
  g.expansion = find_singularity(ns);
  g.r = g.expansion.rho;
  g.sqrt_coef = g.r * g.expansion.h[ClassSystem::kMain];
  g.alpha = g.sqrt_coef / (Real(2) * sqrt(boost::math::constants::pi<Real>()));
  return g;
}

DerivativeEstimate richardson_first(const ScalarFn& f, long double x, long double h) {
  DerivativeEstimate d;
  long double D[3];
  for (int k = 0; k < 3; ++k) {
    long double s = h / (1 << k);
    D[k] = (f(x + s) - f(x - s)) / (2 * s);
    d.stencil.push_back(static_cast<double>(D[k]));
  }
  long double r1 = (4 * D[1] - D[0]) / 3, r2 = (4 * D[2] - D[1]) / 3;
  long double r = (16 * r2 - r1) / 15;
  d.value = static_cast<double>(r);
  d.spread = static_cast<double>(std::fabs(r - r2));
  return d;
}

DerivativeEstimate richardson_second(const ScalarFn& f, long double x, long double h) {
  DerivativeEstimate d;
  long double f0 = f(x);
  long double D[3];
  for (int k = 0; k < 3; ++k) {
    long double s = h / (1 << k);
    D[k] = (f(x + s) - 2 * f0 + f(x - s)) / (s * s);
    d.stencil.push_back(static_cast<double>(D[k]));
  }
  long double r1 = (4 * D[1] - D[0]) / 3, r2 = (4 * D[2] - D[1]) / 3;
  long double r = (16 * r2 - r1) / 15;
  d.value = static_cast<double>(r);
  d.spread = static_cast<double>(std::fabs(r - r2));
  return d;
}

namespace {

template <class Real>
long double rho_at(const ClassSystem& full, const std::vector<long double>& u) {
  std::vector<Real> ur(u.begin(), u.end());
  NumericSystem<Real> ns(full, ur);
  return static_cast<long double>(find_singularity(ns).rho);
}

void check_stable(const DerivativeEstimate& d, const char* what) {
  if (!(d.spread <= 1e-6 * (1 + std::fabs(d.value))))
    throw Error(ErrorKind::DerivativeUnstable,
                std::string(what) + ": Richardson correction " + std::to_string(d.spread) +
                    ", stencil " + std::to_string(d.stencil[0]) + " " + std::to_string(d.stencil[1]) + " " +
                    std::to_string(d.stencil[2]));
}

}  // namespace

template <class Real>
LimitLaw limit_law_constants(const ClassSystem& full, int pattern, double h) {
  const int m = full.num_u();
  if (pattern < 0 || pattern >= m) throw Error(ErrorKind::InvalidInput, "no such pattern");
  auto f = [&](long double x) {
    std::vector<long double> u(m, 1.0L);
    u[pattern] = x;
    return rho_at<Real>(full, u);
  };
  LimitLaw L;
  long double r0 = f(1.0L);
  L.rho = static_cast<double>(r0);
  L.d1 = richardson_first(f, 1.0L, h);
  L.d2 = richardson_second(f, 1.0L, h);
  check_stable(L.d1, "rho'(1)");
  check_stable(L.d2, "rho''(1)");
  long double mu = -L.d1.value / r0;
  L.mu = static_cast<double>(mu);
  L.sigma2 = static_cast<double>(-L.d2.value / r0 + mu + mu * mu);
  return L;
}

template <class Real>
Covariance covariance_matrix(const ClassSystem& full, double h) {
  const int m = full.num_u();
  if (m < 1 || m > 3) throw Error(ErrorKind::InvalidInput, "covariance needs 1 to 3 patterns");
  std::vector<long double> ones(m, 1.0L);
  long double r0 = rho_at<Real>(full, ones);
  Covariance c;
  c.mu.resize(m);
  c.sigma.assign(m, std::vector<double>(m, 0.0));
  std::vector<long double> second(m * m);
  for (int i = 0; i < m; ++i) {
    auto f = [&](long double x) {
      auto u = ones;
      u[i] = x;
      return rho_at<Real>(full, u);
    };
    auto d1 = richardson_first(f, 1.0L, h);
    auto d2 = richardson_second(f, 1.0L, h);
    check_stable(d1, "rho_u");
    check_stable(d2, "rho_uu");
    c.mu[i] = static_cast<double>(-d1.value / r0);
    second[i * m + i] = d2.value;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      long double D[3];
      for (int k = 0; k < 3; ++k) {
        long double s = h / (1 << k);
        auto at = [&](long double a, long double b) {
          auto u = ones;
          u[i] += a;
          u[j] += b;
          return rho_at<Real>(full, u);
        };
        D[k] = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s);
      }
      long double r1 = (4 * D[1] - D[0]) / 3, r2 = (4 * D[2] - D[1]) / 3;
      long double r = (16 * r2 - r1) / 15;
      if (!(std::fabs(r - r2) <= 1e-6L * (1 + std::fabs(r))))
        throw Error(ErrorKind::DerivativeUnstable, "mixed derivative of rho");
      second[i * m + j] = second[j * m + i] = r;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long double s = -second[i * m + j] / r0 + static_cast<long double>(c.mu[i]) * c.mu[j];
      if (i == j) s += c.mu[i];
      c.sigma[i][j] = static_cast<double>(s);
    }
  return c;
}

template <class Real>
std::vector<Real> scaled_series(const ClassSystem& sys, int N, const Real& s, const std::vector<Real>& u) {
  if (static_cast<int>(u.size()) != sys.num_u()) throw Error(ErrorKind::InvalidInput, "marker count");
  auto weight = [&](const Term& t) {
    Real w(static_cast<long double>(t.coeff));
    for (std::size_t i = 0; i < t.u.size(); ++i) w *= ipow(u[i], t.u[i]);
    return w * ipow(s, t.z);
  };
  auto sol = solve_series<Real>(sys, N, weight);
  return sol[ClassSystem::kMain].coefficients();
}

template <class Real>
TailRatio tail_ratio(const ClassSystem& sys, int N, const Real& r, const Real& alpha) {
  std::vector<Real> ones(sys.num_u(), Real(1));
  auto a = scaled_series<Real>(sys, N - 1, r, ones);
  TailRatio t;
  for (int n = 2; n <= N; ++n) {
    // [z^n] D = [z^(n-1)] y, so the scaled coefficient picks up one factor r.
    Real dn = r * a[n - 1];
    using std::pow;
    Real pred = alpha * pow(Real(n), Real(-1.5));
    t.n.push_back(n);
    t.ratio.push_back(static_cast<double>(dn / pred));
  }
  return t;
}

#define DISSECT_INSTANTIATE(R)                                                                          \
  template class NumericSystem<R>;                                                                     \
  template BranchPoint<R> eval_branch(const NumericSystem<R>&, const R&);                              \
  template std::vector<Vec<R>> branch_taylor(const NumericSystem<R>&, const R&, const Vec<R>&, int);   \
  template R branch_det(const NumericSystem<R>&, const R&, const Vec<R>&);                             \
  template SingularExpansion<R> find_singularity(const NumericSystem<R>&);                             \
  template GrowthConstants<R> growth_constants<R>(const ClassSystem&);                                 \
  template LimitLaw limit_law_constants<R>(const ClassSystem&, int, double);                           \
  template Covariance covariance_matrix<R>(const ClassSystem&, double);                                \
  template std::vector<R> scaled_series(const ClassSystem&, int, const R&, const std::vector<R>&);     \
  template TailRatio tail_ratio(const ClassSystem&, int, const R&, const R&);

DISSECT_INSTANTIATE(long double)
DISSECT_INSTANTIATE(Extended)

}  // namespace dissect
