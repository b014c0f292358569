#include <doctest.h>

#include <cmath>
#include <random>

#include "dissect/analytic.hpp"
#include "dissect/series.hpp"

using namespace dissect;

namespace {

const long double kR1 = 3.0L - 2.0L * std::sqrt(2.0L);

ClassSystem avoid(const char* name) { return build_system(parse_pattern_set(name), Mode::Avoiding); }
ClassSystem full(const char* name) { return build_system(parse_pattern_set(name), Mode::Full); }

// Unrestricted D(z) = z/4 (1 + z - sqrt(1 - 6z + z^2)).
long double closed_D(long double z) { return z / 4 * (1 + z - std::sqrt(1 - 6 * z + z * z)); }

}  // namespace

TEST_CASE("unrestricted singularity is 3 - 2 sqrt 2") {
  NumericSystem<long double> ns(unrestricted_system(), {});
  auto s = find_singularity(ns);
  CHECK(std::fabs(s.rho - kR1) < 1e-15L);
  CHECK(s.residual < 1e-15);
}

TEST_CASE("extended precision singularity") {
  Extended::default_precision(50);
  NumericSystem<Extended> ns(unrestricted_system(), {});
  auto s = find_singularity(ns);
  Extended exact = Extended(3) - 2 * boost::multiprecision::sqrt(Extended(2));
  CHECK(boost::multiprecision::abs(s.rho - exact) < Extended("1e-40"));
}

TEST_CASE("growth constants of unrestricted dissections") {
  // Near r the closed form has sqrt term (r/4) sqrt(1 - r^2) sqrt(1 - z/r).
  auto g = growth_constants<long double>(unrestricted_system());
  long double raw = kR1 / 4 * std::sqrt(1 - kR1 * kR1);
  CHECK(std::fabs(g.sqrt_coef - raw) < 1e-14L);
  CHECK(std::fabs(g.alpha - raw / (2 * std::sqrt(std::acos(-1.0L)))) < 1e-14L);
}

TEST_CASE("branch values") {
  auto un = unrestricted_system();
  NumericSystem<long double> ns(un, {});
  auto p = eval_branch(ns, 0.1L);
  CHECK(p.stats.residual < 1e-13);
  CHECK(std::fabs(p.y[ClassSystem::kMain] * 0.1L - closed_D(0.1L)) < 1e-16L);

  // 700-term partial sum of the exact series.
  auto exact = solve_exact(un, 700, 1);
  long double sum = 0;
  mpz_class ten(1);
  for (int n = 0; n <= 700; ++n, ten *= 10)
    sum += mpq_class(exact[ClassSystem::kMain][n], ten).get_d();
  CHECK(std::fabs(sum - p.y[ClassSystem::kMain]) < 1e-15L);

  auto zero = eval_branch(ns, 0.0L);
  CHECK(zero.y.cwiseAbs().maxCoeff() == 0.0L);

  CHECK_NOTHROW(eval_branch(ns, 0.17L));
  CHECK_THROWS_AS(eval_branch(ns, 0.175L), Error);
}

TEST_CASE("determinant along the branch") {
  NumericSystem<long double> ns(avoid("C4"), {0.0L});
  auto s = find_singularity(ns);
  long double prev = 2;
  for (int k = 1; k <= 9; ++k) {
    long double z = s.rho * k / 10;
    auto p = eval_branch(ns, z);
    long double d = branch_det(ns, z, p.y);
    CHECK(d > 0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(std::fabs(branch_det(ns, s.rho, s.y0)) < 1e-9L);
}

TEST_CASE("avoiding singularities") {
  auto c3 = growth_constants<long double>(avoid("C3"));
  CHECK(std::fabs(c3.r - 0.29336L) < 1e-5L);
  auto p1 = growth_constants<long double>(avoid("patternI"));
  CHECK(std::fabs(p1.r - 0.20867L) < 1e-5L);
}

TEST_CASE("implicit D_z agrees with the explicit fraction") {
  // C3 marked system at u = 1; the fraction is -P_z / P_D for the
  // polynomial P(D, z, u) of D.
  NumericSystem<long double> ns(full("C3"), {1.0L});
  std::mt19937 rng(7);
  std::uniform_real_distribution<long double> dist(0.005L, kR1 * 0.98L);
  const long double u = 1;
  for (int i = 0; i < 10; ++i) {
    long double z = dist(rng);
    auto p = eval_branch(ns, z);
    auto T = branch_taylor(ns, z, p.y, 1);
    long double yb = T[0][ClassSystem::kMain], yz = T[1][ClassSystem::kMain];
    long double D = z * yb, Dz = yb + z * yz;
    long double num = u * D * D - 3 * D * z * z + 4 * z * z * z + D * D - 2 * D * z;
    long double den = 3 * u * D * D - 2 * u * D * z + z * z * z - 3 * D * D - 2 * D * z + z * z;
    CHECK(std::fabs(Dz - num / den) < 1e-12L * std::fabs(Dz));
  }
}

TEST_CASE("Puiseux expansion matches the branch to order 3/2") {
  for (const auto& sys : {unrestricted_system(), avoid("C4")}) {
    NumericSystem<long double> ns(sys, std::vector<long double>(sys.num_u(), 0.0L));
    auto s = find_singularity(ns);
    auto err = [&](long double eps) {
      long double z = s.rho * (1 - eps), sq = std::sqrt(eps);
      auto p = eval_branch(ns, z);
      Vec<long double> approx = s.y0 - s.h * sq + s.c2 * eps;
      return (approx - p.y).cwiseAbs().maxCoeff();
    };
    long double e1 = err(1e-3L), e2 = err(1e-5L);
    CHECK(e1 < 1e-3L);
    // s^3 scaling: a factor 1000 over two decades; s^2 would give 100.
    CHECK(e1 / e2 > 500);
    for (int i = 0; i < s.h.size(); ++i) CHECK(s.h[i] > 0);
  }
}

TEST_CASE("dissection limit laws") {
  auto L3 = limit_law_constants<long double>(full("C3"), 0);
  CHECK(std::fabs(L3.mu - 0.5) < 1e-8);
  CHECK(std::fabs(L3.d1.value - (-1.5 + std::sqrt(2.0))) < 1e-9);
  double s2 = (-13 + 9 * std::sqrt(2.0)) / (-12 + 8 * std::sqrt(2.0));
  CHECK(std::fabs(L3.sigma2 - s2) < 1e-8);
  auto L4 = limit_law_constants<long double>(full("C4"), 0);
  CHECK(L4.sigma2 > 0);
  CHECK(std::fabs(L4.mu - 0.43933) < 1e-5);
}

TEST_CASE("covariance matrix") {
  auto one = covariance_matrix<long double>(full("C3"));
  auto L3 = limit_law_constants<long double>(full("C3"), 0);
  CHECK(std::fabs(one.sigma[0][0] - L3.sigma2) < 1e-9);

  auto both = covariance_matrix<long double>(build_system(parse_pattern_set("C3,C4"), Mode::Full));
  auto L4 = limit_law_constants<long double>(full("C4"), 0);
  CHECK(std::fabs(both.sigma[0][0] - L3.sigma2) < 1e-6);
  CHECK(std::fabs(both.sigma[1][1] - L4.sigma2) < 1e-6);
  CHECK(std::fabs(both.sigma[0][1] - both.sigma[1][0]) < 1e-12);
  double det = both.sigma[0][0] * both.sigma[1][1] - both.sigma[0][1] * both.sigma[1][0];
  CHECK(det > -1e-9);
}

TEST_CASE("outerplanar transfer of unrestricted dissections") {
  NumericSystem<long double> ns(full("C3"), {1.0L});
  auto p = outerplanar_point(ns, 0);
  CHECK(std::fabs(p.tau - 0.1707649868L) < 1e-9L);
  CHECK(std::fabs(p.rho - 0.1365937336L) < 1e-9L);
  CHECK(std::fabs(p.D - 0.04709517290L) < 1e-10L);
  CHECK(std::fabs(p.D - closed_D(p.tau)) < 1e-16L);
  CHECK(std::fabs(p.tau * p.B2 - 1) < 1e-15L);

  auto L = outerplanar_limit_law<long double>(full("C3"), 0);
  CHECK(std::fabs(L.rho_u - L.rho_u_direct) < 1e-9);
  CHECK(L.sigma2 > 0);
}

TEST_CASE("tail ratios") {
  auto g = growth_constants<long double>(unrestricted_system());
  auto t = tail_ratio<long double>(unrestricted_system(), 700, g.r, g.alpha);
  CHECK(std::fabs(t.ratio.back() - 1) < 0.01);
  // the ratio approaches 1 from a distance that shrinks with n
  CHECK(std::fabs(t.ratio[300] - 1) > std::fabs(t.ratio.back() - 1));
  auto wrong = tail_ratio<long double>(unrestricted_system(), 700, g.r * 1.01L, g.alpha);
  CHECK(wrong.ratio.back() > 100);
}
