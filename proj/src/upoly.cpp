#include "dissect/upoly.hpp"

#include <algorithm>
#include <sstream>

#include "dissect/error.hpp"

namespace dissect {

UPoly::Key UPoly::pack(const std::vector<int>& exps) {
  if (static_cast<int>(exps.size()) > kMaxVars)
    throw Error(ErrorKind::InvalidInput, "too many u variables");
  Key k = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] >= (1 << kBits)) throw Error(ErrorKind::InvalidInput, "u degree out of range");
    k |= static_cast<Key>(exps[i]) << (kBits * i);
  }
  return k;
}

std::vector<int> UPoly::unpack(Key k, int m) {
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i) out[i] = static_cast<int>((k >> (kBits * i)) & ((1u << kBits) - 1));
  return out;
}

UPoly UPoly::monomial(const mpz_class& c, const std::vector<int>& exps) {
  UPoly p;
  if (c != 0) p.terms_.emplace_back(pack(exps), c);
  return p;
}

mpz_class UPoly::coefficient(const std::vector<int>& exps) const {
  Key k = pack(exps);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const auto& t, Key key) { return t.first < key; });
  return it != terms_.end() && it->first == k ? it->second : mpz_class(0);
}

mpz_class UPoly::evaluate(const std::vector<long>& u) const {
  mpz_class total = 0;
  for (const auto& [k, c] : terms_) {
    mpz_class t = c;
    auto e = unpack(k, static_cast<int>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) {
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), mpz_class(u[i]).get_mpz_t(), e[i]);
      t *= p;
    }
    total += t;
  }
  return total;
}

void UPoly::merge(const UPoly& o, int sign) {
  std::vector<std::pair<Key, mpz_class>> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      out.emplace_back(o.terms_[j].first, sign > 0 ? o.terms_[j].second : mpz_class(-o.terms_[j].second));
      ++j;
    } else {
      mpz_class c = terms_[i].second;
      if (sign > 0)
        c += o.terms_[j].second;
      else
        c -= o.terms_[j].second;
      if (c != 0) out.emplace_back(terms_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
}

UPoly& UPoly::operator+=(const UPoly& o) {
  merge(o, 1);
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  merge(o, -1);
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  UPoly out;
  if (a.is_zero() || b.is_zero()) return out;
  std::vector<std::pair<UPoly::Key, mpz_class>> raw;
  raw.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) raw.emplace_back(ka + kb, ca * cb);
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [k, c] : raw) {
    if (!out.terms_.empty() && out.terms_.back().first == k)
      out.terms_.back().second += c;
    else
      out.terms_.emplace_back(k, std::move(c));
  }
  std::erase_if(out.terms_, [](const auto& t) { return t.second == 0; });
  return out;
}

std::string UPoly::to_string(int m) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    auto e = unpack(k, m);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    mpz_class a = abs(c);
    bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (a != 1 || constant) os << a.get_str();
    bool need_star = a != 1 || constant;
    for (int i = 0; i < m; ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << (m == 1 ? "u" : "u" + std::to_string(i + 1));
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
    first = false;
  }
  return os.str();
}

}  // namespace dissect
