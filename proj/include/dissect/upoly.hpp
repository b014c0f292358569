#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dissect {

// Polynomial in u_1..u_m with integer coefficients.  Exponent vectors are
// packed 12 bits per variable, so m <= 5 and degrees stay below 4096.
class UPoly {
 public:
  using Key = std::uint64_t;
  static constexpr int kBits = 12;
  static constexpr int kMaxVars = 5;

  UPoly() = default;
  UPoly(long c) {
    if (c != 0) terms_.emplace_back(0, mpz_class(c));
  }
  UPoly(const mpz_class& c) {
    if (c != 0) terms_.emplace_back(0, c);
  }
  static UPoly monomial(const mpz_class& c, const std::vector<int>& exps);

  static Key pack(const std::vector<int>& exps);
  static std::vector<int> unpack(Key k, int m);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<std::pair<Key, mpz_class>>& terms() const { return terms_; }
  mpz_class coefficient(const std::vector<int>& exps) const;
  // Value with every u_i replaced by the given integer.
  mpz_class evaluate(const std::vector<long>& u) const;

  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  bool operator==(const UPoly& o) const { return terms_ == o.terms_; }

  std::string to_string(int m) const;

 private:
  std::vector<std::pair<Key, mpz_class>> terms_;  // sorted by key, no zeros
  void merge(const UPoly& o, int sign);
};

}  // namespace dissect
