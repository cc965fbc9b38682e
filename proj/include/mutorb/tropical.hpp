#pragma once

#include "mutorb/ints.hpp"

#include <algorithm>
#include <vector>

namespace mutorb {

// Laurent monomial in the coefficient variables q_1..q_m, stored as its
// exponent vector. The group law is exponent addition; tropical addition is
// the componentwise minimum.
struct TropicalMonomial {
  std::vector<int> exp;

  bool operator==(const TropicalMonomial&) const = default;
  bool operator<(const TropicalMonomial& o) const { return exp < o.exp; }

  static TropicalMonomial one(int m) { return {std::vector<int>(m, 0)}; }

  TropicalMonomial operator*(const TropicalMonomial& o) const {
    TropicalMonomial r = *this;
    for (size_t i = 0; i < exp.size(); ++i) r.exp[i] += o.exp[i];
    return r;
  }

  TropicalMonomial pow(long k) const {
    TropicalMonomial r = *this;
    for (auto& e : r.exp) e = static_cast<int>(e * k);
    return r;
  }

  TropicalMonomial tropical_plus(const TropicalMonomial& o) const {
    TropicalMonomial r = *this;
    for (size_t i = 0; i < exp.size(); ++i) r.exp[i] = std::min(r.exp[i], o.exp[i]);
    return r;
  }

  bool is_one() const {
    for (int e : exp)
      if (e != 0) return false;
    return true;
  }
};

// Normalized pair (p+, p-) with p+ (+) p- = 1, i.e. min(p+_e, p-_e) = 0 in
// every coordinate. The pair is recovered from the ratio by taking positive
// and negative parts.
struct CoefficientPair {
  TropicalMonomial plus, minus;

  bool operator==(const CoefficientPair&) const = default;

  static CoefficientPair trivial(int m) {
    return {TropicalMonomial::one(m), TropicalMonomial::one(m)};
  }

  std::vector<int> ratio() const {
    std::vector<int> r(plus.exp.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = plus.exp[i] - minus.exp[i];
    return r;
  }

  static CoefficientPair normalized_from_ratio(const std::vector<int>& r) {
    CoefficientPair p;
    p.plus.exp.resize(r.size());
    p.minus.exp.resize(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
      p.plus.exp[i] = std::max(r[i], 0);
      p.minus.exp[i] = std::max(-r[i], 0);
    }
    return p;
  }

  bool is_normalized() const {
    for (size_t i = 0; i < plus.exp.size(); ++i)
      if (std::min(plus.exp[i], minus.exp[i]) != 0) return false;
    return true;
  }
};

} // namespace mutorb
