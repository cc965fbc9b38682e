#pragma once

#include "mutorb/errors.hpp"
#include "mutorb/ints.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mutorb {

// Positive integer diagonal D with B*D skew-symmetric, gcd-normalized per
// connected component of the underlying graph.
struct Symmetrizer {
  std::vector<Int> d;

  bool operator==(const Symmetrizer&) const = default;
};

// Square integer matrix subject to the sign condition:
//   b_ij > 0  implies  b_ji < 0,   and   b_ij = 0  iff  b_ji = 0.
// Construction via from_rows also requires a symmetrizer to exist.
class ExchangeMatrix {
public:
  ExchangeMatrix() = default;
  explicit ExchangeMatrix(int n) : n_(n), b_(static_cast<size_t>(n) * n, Int(0)) {}

  static ExchangeMatrix from_rows(std::vector<std::vector<Int>> rows);

  int size() const { return n_; }

  const Int& at(int i, int j) const { return b_[static_cast<size_t>(i) * n_ + j]; }
  Int& at(int i, int j) { return b_[static_cast<size_t>(i) * n_ + j]; }

  bool operator==(const ExchangeMatrix&) const = default;
  bool operator<(const ExchangeMatrix& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return b_ < o.b_;
  }

  bool is_skew_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (at(i, j) != -at(j, i)) return false;
    return true;
  }

  // Matrix mutation in direction k (0-based).
  ExchangeMatrix mutated(int k) const {
    if (k < 0 || k >= n_) throw std::out_of_range("mutation index out of range");
    ExchangeMatrix r(n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (i == k || j == k) {
          r.at(i, j) = -at(i, j);
        } else {
          r.at(i, j) = at(i, j) + (abs_int(at(i, k)) * at(k, j) + at(i, k) * abs_int(at(k, j))) / 2;
        }
      }
    }
    return r;
  }

  ExchangeMatrix mutated(const std::vector<int>& seq) const {
    ExchangeMatrix r = *this;
    for (int k : seq) r = r.mutated(k);
    return r;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < n_; ++j) {
        if (j) s += ",";
        s += at(i, j).str();
      }
      s += "]";
    }
    s += "]";
    return s;
  }

private:
  int n_ = 0;
  std::vector<Int> b_;
};

inline void check_sign_condition(const ExchangeMatrix& b) {
  for (int i = 0; i < b.size(); ++i) {
    if (b.at(i, i) != 0)
      throw invalid_matrix("nonzero diagonal entry at (" + std::to_string(i + 1) + "," +
                           std::to_string(i + 1) + ")");
    for (int j = i + 1; j < b.size(); ++j) {
      const Int& x = b.at(i, j);
      const Int& y = b.at(j, i);
      bool ok = (x == 0 && y == 0) || (x > 0 && y < 0) || (x < 0 && y > 0);
      if (!ok)
        throw invalid_matrix("sign condition violated at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
    }
  }
}

// Propagates d along a spanning forest of the adjacency graph with rational
// bookkeeping, checks consistency on the remaining edges, then clears
// denominators and normalizes the gcd per component. Roots are the smallest
// vertex index of each component, so the result is deterministic.
inline Symmetrizer compute_symmetrizer(const ExchangeMatrix& b) {
  check_sign_condition(b);
  int n = b.size();
  std::vector<Rat> d(n, Rat(0));
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int root = 0; root < n; ++root) {
    if (comp[root] != -1) continue;
    int c = ncomp++;
    comp[root] = c;
    d[root] = 1;
    std::vector<int> stack{root};
    std::vector<int> members{root};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (b.at(i, j) == 0) continue;
        // b_ij d_j = -b_ji d_i
        Rat dj = Rat(-b.at(j, i)) * d[i] / Rat(b.at(i, j));
        if (comp[j] == -1) {
          comp[j] = c;
          d[j] = dj;
          stack.push_back(j);
          members.push_back(j);
        } else if (d[j] != dj) {
          throw not_symmetrizable("inconsistent symmetrizer constraint at (" +
                                  std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
      }
    }
    Int l = 1;
    for (int v : members) l = lcm_int(l, denominator(d[v]));
    Int g = 0;
    for (int v : members) {
      d[v] *= l;
      g = gcd_int(g, numerator(d[v]));
    }
    for (int v : members) d[v] /= g;
  }
  Symmetrizer s;
  s.d.reserve(n);
  for (int i = 0; i < n; ++i) s.d.push_back(numerator(d[i]));
  return s;
}

inline ExchangeMatrix ExchangeMatrix::from_rows(std::vector<std::vector<Int>> rows) {
  int n = static_cast<int>(rows.size());
  ExchangeMatrix b(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw invalid_matrix("matrix is not square");
    for (int j = 0; j < n; ++j) b.at(i, j) = std::move(rows[i][j]);
  }
  check_sign_condition(b);
  compute_symmetrizer(b); // rejects matrices with no symmetrizer
  return b;
}

} // namespace mutorb
