#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dissect/class_system.hpp"
#include "dissect/error.hpp"

namespace dissect {

// Runtime-precision float for the extended mode; set digits with
// Extended::default_precision(d) before building any NumericSystem.
using Extended = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

template <class Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <class Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// A class system with the markers u fixed to real values: y = F(z, y).
template <class Real>
class NumericSystem {
 public:
  NumericSystem(const ClassSystem& sys, const std::vector<Real>& u);

  int size() const { return n_; }
  const ClassSystem& system() const { return sys_; }
  const std::vector<Real>& u() const { return u_; }

  Vec<Real> F(const Real& z, const Vec<Real>& y) const;
  Mat<Real> Fy(const Real& z, const Vec<Real>& y) const;
  Vec<Real> Fz(const Real& z, const Vec<Real>& y) const;
  // d/du_i of F at fixed z and y.
  Vec<Real> Fu(const Real& z, const Vec<Real>& y, int i) const;
  // Row e, column j: sum_i d^2 F_e / dy_i dy_j * v_i.
  Mat<Real> Fyy_times(const Real& z, const Vec<Real>& y, const Vec<Real>& v) const;
  // sum_i d^2 F / dz dy_i * v_i.
  Vec<Real> Fzy_times(const Real& z, const Vec<Real>& y, const Vec<Real>& v) const;
  // Taylor coefficients 0..K (in t) of F(z + dz t, Y(t)), where Y is given
  // by its Taylor coefficients.
  std::vector<Vec<Real>> curve_jet(const Real& z, const Real& dz, const std::vector<Vec<Real>>& Y,
                                   int K) const;

  // Partial sum at z of the power series solution, N terms, used as a
  // Newton seed.
  Vec<Real> partial_sum(const Real& z) const;
  int series_terms() const { return series_n_; }
  // Coefficient n of class v in the power series solution.
  const Real& series_coefficient(int v, int n) const { return series_[v][n]; }

 private:
  struct NTerm {
    Real w;                                 // coeff * prod u^e
    std::vector<Real> dw;                   // d w / d u_i
    int z = 0;
    std::vector<std::pair<int, int>> vars;  // (variable, power)
  };
  Real monomial(const NTerm& t, const Real& z, const Vec<Real>& y, int kz, int d1, int d2) const;

  ClassSystem sys_;
  std::vector<Real> u_;
  int n_ = 0;
  std::vector<std::vector<NTerm>> eqs_;
  int series_n_ = 0;
  std::vector<std::vector<Real>> series_;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0;
};

template <class Real>
struct BranchPoint {
  Real z;
  Vec<Real> y;
  NewtonStats stats;
};

// Value of the combinatorial branch at 0 <= z < rho: Newton from the series
// partial sum, rejecting negative values and points past the singularity.
// Throws NewtonDiverged.
template <class Real>
BranchPoint<Real> eval_branch(const NumericSystem<Real>& ns, const Real& z);

// Taylor coefficients 0..K of y(z + t) along the branch.
template <class Real>
std::vector<Vec<Real>> branch_taylor(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y,
                                     int K);

template <class Real>
Real branch_det(const NumericSystem<Real>& ns, const Real& z, const Vec<Real>& y);

// Local expansion y = y0 - h s + c2 s^2 + ..., s = sqrt(1 - z/rho).
template <class Real>
struct SingularExpansion {
  Real rho;
  Vec<Real> y0;
  Vec<Real> h;       // minus the s^1 coefficient; positive
  Vec<Real> c2;      // s^2 coefficient
  Vec<Real> kernel;  // right kernel of I - F_y at the singularity, entries summing to 1
  Vec<Real> left;    // left kernel
  int bisection_steps = 0;
  int newton_steps = 0;
  double residual = 0;
};

template <class Real>
SingularExpansion<Real> find_singularity(const NumericSystem<Real>& ns);

// Dissection constants: a_n ~ alpha * n^(-3/2) * r^(-n) for D = z * y.
template <class Real>
struct GrowthConstants {
  Real r;
  Real alpha;      // Gamma(-1/2)-normalized
  Real sqrt_coef;  // r * h_y, the raw coefficient of -sqrt(1 - z/r) in D
  SingularExpansion<Real> expansion;
};

template <class Real>
GrowthConstants<Real> growth_constants(const ClassSystem& avoiding);

struct DerivativeEstimate {
  double value = 0;
  double spread = 0;  // last Richardson correction
  std::vector<double> stencil;
};

// First and second derivatives of f at x by central differences with steps
// h, h/2, h/4 and Richardson extrapolation.
using ScalarFn = std::function<long double(long double)>;
DerivativeEstimate richardson_first(const ScalarFn& f, long double x, long double h);
DerivativeEstimate richardson_second(const ScalarFn& f, long double x, long double h);

struct LimitLaw {
  double rho = 0;
  double mu = 0;
  double sigma2 = 0;
  DerivativeEstimate d1, d2;
};

// Moments of pattern i on a Full system from rho(u) near u = 1.
template <class Real>
LimitLaw limit_law_constants(const ClassSystem& full, int pattern, double h = 1e-2);

struct Covariance {
  std::vector<double> mu;
  std::vector<std::vector<double>> sigma;
};

template <class Real>
Covariance covariance_matrix(const ClassSystem& full, double h = 1e-2);

// Outerplanar graphs from the dissection class D = z * y.
template <class Real>
struct OuterplanarPoint {
  Real tau;
  Real rho;     // Psi(tau) = tau * exp(-B'(tau))
  Real D;       // D(tau)
  Real kappa;   // y = tau - kappa s + ... near rho for y = z C'(z)
  Real B2, B3;  // B''(tau), B'''(tau)
  Real rho_u;   // d rho / d u_i from the partial derivative of Psi, when asked
};

template <class Real>
OuterplanarPoint<Real> outerplanar_point(const NumericSystem<Real>& ns, int pattern = -1);

struct OuterplanarLimitLaw {
  double tau = 0, rho = 0, D = 0;
  double tau_u = 0, rho_u = 0, rho_uu = 0;
  double rho_u_direct = 0;  // partial derivative of Psi, cross-check of rho_u
  double mu = 0, sigma2 = 0;
};

template <class Real>
OuterplanarLimitLaw outerplanar_limit_law(const ClassSystem& full, int pattern, double h = 1e-2);

// Constant g of g_n ~ g n^(-5/2) rho^(-n) n!, in the variants the
// literature suggests; `truncated` evaluates B from its first K terms.
struct GConstants {
  double tau = 0, rho = 0;
  double tau_trunc = 0, rho_trunc = 0;
  double C_rho = 0, C_rho_trunc = 0;          // tau (log rho - log tau + 1) + B(tau)
  double connected = 0, connected_trunc = 0;  // c_{3/2} / Gamma(-3/2)
  double general = 0, general_trunc = 0;      // exp(C(rho)) c_{3/2} / Gamma(-3/2)
  int terms = 0;
};

template <class Real>
GConstants outerplanar_g(const ClassSystem& avoiding, int terms = 700);

struct TailRatio {
  std::vector<int> n;
  std::vector<double> ratio;
};

// Coefficients of D = z * y scaled by r^n n^(3/2) / alpha, for n <= N.
template <class Real>
TailRatio tail_ratio(const ClassSystem& sys, int N, const Real& r, const Real& alpha);

// Coefficients n = 0..N of the main class in the variable t = z / s.
template <class Real>
std::vector<Real> scaled_series(const ClassSystem& sys, int N, const Real& s, const std::vector<Real>& u);

}  // namespace dissect
