#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "dissect/analytic.hpp"

namespace dissect {

namespace {

// Along the branch, D = z y gives B'(z) = (y + z) / 2, so B'' = (y' + 1) / 2
// and B''' = y'' / 2, with y the main class.
template <class Real>
struct BAt {
  Real y, y1, y2;  // y, y', y''
  Vec<Real> all;
};

template <class Real>
BAt<Real> b_at(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y) {
  auto T = branch_taylor(ns, z, y, 2);
  const int m = ClassSystem::kMain;
  return {T[0][m], T[1][m], Real(2) * T[2][m], T[0]};
}

}  // namespace

template <class Real>
OuterplanarPoint<Real> outerplanar_point(const NumericSystem<Real>& ns, int pattern) {
  using std::abs;
  using std::exp;
  using std::sqrt;
  auto sing = find_singularity(ns);
  const Real r = sing.rho;

  // tau B''(tau) = 1 is increasing in tau and blows up at r.
  auto phi = [&](const Real& x, const Vec<Real>& y) {
    auto b = b_at(ns, x, y);
    return x * (b.y1 + 1) / 2 - Real(1);
  };
  Real lo(0), hi = r;
  Vec<Real> ylo = Vec<Real>::Zero(ns.size());
  Real tol = sqrt(std::numeric_limits<Real>::epsilon());
  for (int it = 0; it < 200 && hi - lo > tol * r; ++it) {
    Real mid = (lo + hi) / 2;
    Vec<Real> y;
    try {
      y = eval_branch(ns, mid).y;
    } catch (const Error&) {
      hi = mid;
      continue;
    }
    if (phi(mid, y) < 0) {
      lo = mid;
      ylo = y;
    } else {
      hi = mid;
    }
  }
  if (hi >= r) throw Error(ErrorKind::SubcriticalityViolated, "tau B''(tau) = 1 has no root below r");

  Real tau = lo;
  Vec<Real> y = ylo;
  for (int it = 0; it < 50; ++it) {
    y = eval_branch(ns, tau).y;
    auto b = b_at(ns, tau, y);
    Real f = tau * (b.y1 + 1) / 2 - Real(1);
    Real df = (b.y1 + 1) / 2 + tau * b.y2 / 2;
    Real step = f / df;
    tau -= step;
    if (abs(step) <= Real(16) * std::numeric_limits<Real>::epsilon() * tau) break;
  }
  if (!(tau > 0 && tau < r)) throw Error(ErrorKind::SubcriticalityViolated, "tau outside (0, r)");
  y = eval_branch(ns, tau).y;
  auto b = b_at(ns, tau, y);

  OuterplanarPoint<Real> p;
  p.tau = tau;
  Real bp = (b.y + tau) / 2;
  p.rho = tau * exp(-bp);
  p.D = tau * b.y;
  p.B2 = (b.y1 + 1) / 2;
  p.B3 = b.y2 / 2;
  p.kappa = sqrt(Real(2) / (Real(1) / (tau * tau) + p.B3));
  p.rho_u = Real(0);
  if (pattern >= 0) {
    Mat<Real> a = -ns.Fy(tau, y);
    for (int i = 0; i < ns.size(); ++i) a(i, i) += Real(1);
    Vec<Real> yu = a.partialPivLu().solve(ns.Fu(tau, y, pattern));
    // d Psi / d u = -Psi * d B' / d u, and d B' / d u = y_u / 2.
    p.rho_u = -p.rho * yu[ClassSystem::kMain] / 2;
  }
  return p;
}

template <class Real>
OuterplanarLimitLaw outerplanar_limit_law(const ClassSystem& full, int pattern, double h) {
  const int m = full.num_u();
  if (pattern < 0 || pattern >= m) throw Error(ErrorKind::InvalidInput, "no such pattern");
  auto point = [&](long double x, int mark) {
    std::vector<Real> u(m, Real(1));
    u[pattern] = Real(x);
    NumericSystem<Real> ns(full, u);
    return outerplanar_point(ns, mark);
  };
  OuterplanarLimitLaw L;
  auto p0 = point(1.0L, pattern);
  L.tau = static_cast<double>(p0.tau);
  L.rho = static_cast<double>(p0.rho);
  L.D = static_cast<double>(p0.D);
  L.rho_u_direct = static_cast<double>(p0.rho_u);
  auto tau_f = [&](long double x) { return static_cast<long double>(point(x, -1).tau); };
  auto rho_f = [&](long double x) { return static_cast<long double>(point(x, -1).rho); };
  L.tau_u = richardson_first(tau_f, 1.0L, h).value;
  auto d1 = richardson_first(rho_f, 1.0L, h);
  auto d2 = richardson_second(rho_f, 1.0L, h);
  if (!(d1.spread <= 1e-6 && d2.spread <= 1e-6))
    throw Error(ErrorKind::DerivativeUnstable, "outerplanar rho(u) derivatives");
  L.rho_u = d1.value;
  L.rho_uu = d2.value;
  double mu = -L.rho_u / L.rho;
  L.mu = mu;
  L.sigma2 = -L.rho_uu / L.rho + mu + mu * mu;
  return L;
}

template <class Real>
GConstants outerplanar_g(const ClassSystem& avoiding, int terms) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const Real gamma32 = Real(4) * sqrt(boost::math::constants::pi<Real>()) / 3;
  GConstants g;
  g.terms = terms;
  std::vector<Real> u(avoiding.num_u(), Real(0));
  NumericSystem<Real> ns(avoiding, u);
  auto p = outerplanar_point(ns);
  g.tau = static_cast<double>(p.tau);
  g.rho = static_cast<double>(p.rho);

  // B(tau) = tau^2 / 4 + (1/2) int_0^tau y.
  auto y_of = [&](long double x) { return static_cast<long double>(eval_branch(ns, Real(x)).y[ClassSystem::kMain]); };
  long double integral =
      boost::math::quadrature::gauss_kronrod<long double, 31>::integrate(y_of, 0.0L, static_cast<long double>(p.tau), 10, 1e-12L);
  Real Btau = p.tau * p.tau / 4 + Real(integral) / 2;
  Real C = Btau + p.tau * (log(p.rho) - log(p.tau) + 1);
  Real c32 = Real(2) * p.kappa / 3;
  g.C_rho = static_cast<double>(C);
  g.connected = static_cast<double>(c32 / gamma32);
  g.general = static_cast<double>(exp(C) * c32 / gamma32);

  // B from its first `terms` coefficients b_n = d_n / (2n), d_n = [z^(n-1)] y,
  // plus the single edge z^2 / 4; in the scaled variable x = z / s.
  const Real s = find_singularity(ns).rho;
  auto a = scaled_series<Real>(avoiding, terms - 1, s, u);
  std::vector<Real> bs(terms + 1, Real(0));  // b_n s^n
  for (int n = 1; n <= terms; ++n) bs[n] = s * a[n - 1] / (2 * n);
  bs[2] += s * s / 4;
  // k-th derivative of the truncated B at x.
  auto Bk = [&](const Real& x, int k) {
    Real t = x / s, acc(0);
    for (int n = terms; n >= k; --n) {
      Real f(1);
      for (int j = 0; j < k; ++j) f *= n - j;
      acc = acc * t + f * bs[n];
    }
    for (int j = 0; j < k; ++j) acc /= s;
    return acc;
  };
  Real lo(0), hi = s;
  for (int it = 0; it < 200; ++it) {
    Real mid = (lo + hi) / 2;
    if (mid * Bk(mid, 2) < 1)
      lo = mid;
    else
      hi = mid;
  }
  Real tk = lo;
  Real rk = tk * exp(-Bk(tk, 1));
  Real kk = sqrt(Real(2) / (Real(1) / (tk * tk) + Bk(tk, 3)));
  Real Ck = Bk(tk, 0) + tk * (log(rk) - log(tk) + 1);
  Real c32k = Real(2) * kk / 3;
  g.tau_trunc = static_cast<double>(tk);
  g.rho_trunc = static_cast<double>(rk);
  g.C_rho_trunc = static_cast<double>(Ck);
  g.connected_trunc = static_cast<double>(c32k / gamma32);
  g.general_trunc = static_cast<double>(exp(Ck) * c32k / gamma32);
  return g;
}

#define DISSECT_INSTANTIATE_OP(R)                                                        \
  template OuterplanarPoint<R> outerplanar_point(const NumericSystem<R>&, int);         \
  template OuterplanarLimitLaw outerplanar_limit_law<R>(const ClassSystem&, int, double); \
  template GConstants outerplanar_g<R>(const ClassSystem&, int);

DISSECT_INSTANTIATE_OP(long double)
DISSECT_INSTANTIATE_OP(Extended)

}  // namespace dissect
