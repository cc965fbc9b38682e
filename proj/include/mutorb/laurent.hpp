#pragma once

#include "mutorb/errors.hpp"
#include "mutorb/ints.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace mutorb {

// Sparse Laurent polynomial with exact integer coefficients. Exponent
// vectors have fixed length; entries may be negative. No zero coefficient is
// ever stored.
class LaurentPoly {
public:
  using Exp = std::vector<int>;
  using Terms = std::map<Exp, Int>;

  LaurentPoly() = default;
  explicit LaurentPoly(int vars) : vars_(vars) {}

  static LaurentPoly variable(int vars, int i, int power = 1) {
    LaurentPoly p(vars);
    Exp e(vars, 0);
    e[i] = power;
    p.terms_[std::move(e)] = 1;
    return p;
  }

  static LaurentPoly constant(int vars, Int c) {
    LaurentPoly p(vars);
    if (c != 0) p.terms_[Exp(vars, 0)] = std::move(c);
    return p;
  }

  static LaurentPoly monomial(int vars, Exp e, Int c = Int(1)) {
    LaurentPoly p(vars);
    if (c != 0) p.terms_[std::move(e)] = std::move(c);
    return p;
  }

  int vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool nonnegative() const {
    for (auto& [e, c] : terms_)
      if (c < 0) return false;
    return true;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    r += o;
    return r;
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  LaurentPoly operator-(const LaurentPoly& o) const { return *this + (-o); }

  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly r(vars_);
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) {
        Exp e(vars_);
        for (int i = 0; i < vars_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  LaurentPoly pow(const Int& k) const {
    if (k < 0) throw domain_error("negative polynomial power");
    LaurentPoly r = constant(vars_, Int(1));
    Int left = k;
    LaurentPoly base = *this;
    while (left > 0) {
      if ((left & 1) != 0) r = r * base;
      base = base * base;
      left >>= 1;
    }
    return r;
  }

  // Exact division; throws when a remainder would be left.
  LaurentPoly divide_exact(const LaurentPoly& q) const {
    if (q.is_zero()) throw non_laurent_division("division by zero");
    if (is_zero()) return LaurentPoly(vars_);
    LaurentPoly rem = *this;
    LaurentPoly quo(vars_);
    const auto qlead = std::prev(q.terms_.end()); // lex-largest term
    while (!rem.is_zero()) {
      const auto rlead = std::prev(rem.terms_.end());
      Exp shift(vars_);
      for (int i = 0; i < vars_; ++i) shift[i] = rlead->first[i] - qlead->first[i];
      if (rlead->second % qlead->second != 0)
        throw non_laurent_division("leading coefficient does not divide");
      Int c = rlead->second / qlead->second;
      quo.add_term(shift, c);
      for (auto& [e, qc] : q.terms_) {
        Exp t(vars_);
        for (int i = 0; i < vars_; ++i) t[i] = e[i] + shift[i];
        rem.add_term(t, -c * qc);
      }
    }
    return quo;
  }

  bool operator==(const LaurentPoly&) const = default;
  bool operator<(const LaurentPoly& o) const {
    if (vars_ != o.vars_) return vars_ < o.vars_;
    return terms_ < o.terms_;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const Int& c = it->second;
      if (!first) s += c > 0 ? " + " : " - ";
      else if (c < 0)
        s += "-";
      Int a = abs_int(c);
      bool any_var = false;
      for (int i = 0; i < vars_; ++i) any_var = any_var || it->first[i] != 0;
      if (a != 1 || !any_var) s += a.str();
      bool star = a != 1 || !any_var;
      for (int i = 0; i < vars_; ++i) {
        int e = it->first[i];
        if (e == 0) continue;
        if (star) s += "*";
        star = true;
        s += i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1);
        if (e != 1) s += "^" + std::to_string(e);
      }
      first = false;
    }
    return s;
  }

private:
  int vars_ = 0;
  Terms terms_;

  void add_term(const Exp& e, const Int& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
};

} // namespace mutorb
