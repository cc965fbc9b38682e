#pragma once

#include "mutorb/diagram.hpp"
#include "mutorb/laurent.hpp"
#include "mutorb/matrix.hpp"
#include "mutorb/tropical.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutorb {

namespace detail {
inline int to_int_checked(const Int& v) {
  if (v > 1000000000 || v < -1000000000) throw domain_error("exponent out of range");
  return static_cast<int>(v);
}
} // namespace detail

// Cluster of Laurent polynomials (in the initial x-variables and the
// coefficient variables q), a tropical coefficient tuple, and an exchange
// matrix. Mutation keeps everything exact.
struct Seed {
  ExchangeMatrix b;
  std::vector<LaurentPoly> cluster; // polynomials in n + m variables
  std::vector<CoefficientPair> coeffs;
  int ncoeff = 0;      // m
  bool normalized = true;

  int rank() const { return b.size(); }
  int vars() const { return b.size() + ncoeff; }

  bool operator==(const Seed&) const = default;
};

inline Seed initial_seed(const ExchangeMatrix& b) {
  Seed s;
  s.b = b;
  s.ncoeff = 0;
  for (int i = 0; i < b.size(); ++i) {
    s.cluster.push_back(LaurentPoly::variable(b.size(), i));
    s.coeffs.push_back(CoefficientPair::trivial(0));
  }
  return s;
}

// Principal coefficients: one q-variable per direction, p+_i = q_i, p-_i = 1.
inline Seed principal_initial_seed(const ExchangeMatrix& b) {
  Seed s;
  s.b = b;
  s.ncoeff = b.size();
  int vars = 2 * b.size();
  for (int i = 0; i < b.size(); ++i) {
    s.cluster.push_back(LaurentPoly::variable(vars, i));
    CoefficientPair p = CoefficientPair::trivial(b.size());
    p.plus.exp[i] = 1;
    s.coeffs.push_back(p);
  }
  return s;
}

inline Seed mutate_seed(const Seed& s, int k) {
  int n = s.rank();
  if (k < 0 || k >= n) throw std::out_of_range("mutation index out of range");
  Seed r = s;
  // exchange polynomial
  LaurentPoly::Exp plus_mono(s.vars(), 0), minus_mono(s.vars(), 0);
  for (int j = 0; j < s.ncoeff; ++j) {
    plus_mono[n + j] = s.coeffs[k].plus.exp[j];
    minus_mono[n + j] = s.coeffs[k].minus.exp[j];
  }
  LaurentPoly pplus = LaurentPoly::monomial(s.vars(), plus_mono);
  LaurentPoly pminus = LaurentPoly::monomial(s.vars(), minus_mono);
  for (int j = 0; j < n; ++j) {
    const Int& bjk = s.b.at(j, k);
    if (bjk > 0)
      pplus = pplus * s.cluster[j].pow(bjk);
    else if (bjk < 0)
      pminus = pminus * s.cluster[j].pow(-bjk);
  }
  r.cluster[k] = (pplus + pminus).divide_exact(s.cluster[k]);
  // coefficient tuple
  if (s.ncoeff > 0) {
    r.coeffs[k] = {s.coeffs[k].minus, s.coeffs[k].plus};
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      int bki = detail::to_int_checked(s.b.at(k, i));
      const TropicalMonomial& f = bki >= 0 ? s.coeffs[k].plus : s.coeffs[k].minus;
      if (s.normalized) {
        std::vector<int> ratio = s.coeffs[i].ratio();
        for (size_t q = 0; q < ratio.size(); ++q) ratio[q] += bki * f.exp[q];
        r.coeffs[i] = CoefficientPair::normalized_from_ratio(ratio);
      } else {
        r.coeffs[i].plus = s.coeffs[i].plus * f.pow(bki);
        r.coeffs[i].minus = s.coeffs[i].minus;
      }
    }
  }
  r.b = s.b.mutated(k);
  return r;
}

inline Seed mutate_seed(const Seed& s, const std::vector<int>& seq) {
  Seed r = s;
  for (int k : seq) r = mutate_seed(r, k);
  return r;
}

// ---- extended matrices and c-vectors ---------------------------------------

// m x n integer matrix whose top n x n block is an exchange matrix; the
// remaining rows carry coefficients (shear coordinates of laminations).
struct ExtendedMatrix {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  ExtendedMatrix() = default;
  ExtendedMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}

  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const ExtendedMatrix&) const = default;
  bool operator<(const ExtendedMatrix& o) const {
    if (rows != o.rows) return rows < o.rows;
    if (cols != o.cols) return cols < o.cols;
    return a < o.a;
  }

  ExchangeMatrix top() const {
    ExchangeMatrix b(cols);
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j < cols; ++j) b.at(i, j) = at(i, j);
    return b;
  }

  ExtendedMatrix mutated(int k) const {
    if (k < 0 || k >= cols) throw std::out_of_range("mutation index out of range");
    ExtendedMatrix r(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        if (i == k || j == k)
          r.at(i, j) = -at(i, j);
        else
          r.at(i, j) = at(i, j) + (abs_int(at(i, k)) * at(k, j) + at(i, k) * abs_int(at(k, j))) / 2;
      }
    return r;
  }

  ExtendedMatrix mutated(const std::vector<int>& seq) const {
    ExtendedMatrix r = *this;
    for (int k : seq) r = r.mutated(k);
    return r;
  }
};

inline ExtendedMatrix principal_extended(const ExchangeMatrix& b) {
  ExtendedMatrix e(2 * b.size(), b.size());
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j) e.at(i, j) = b.at(i, j);
  for (int i = 0; i < b.size(); ++i) e.at(b.size() + i, i) = 1;
  return e;
}

// Columns of the bottom block, one per cluster direction.
inline std::vector<std::vector<Int>> c_vectors(const ExtendedMatrix& e) {
  if (e.rows != 2 * e.cols) throw shape_mismatch("c-vectors need a square bottom block");
  std::vector<std::vector<Int>> cols(e.cols, std::vector<Int>(e.cols));
  for (int j = 0; j < e.cols; ++j)
    for (int i = 0; i < e.cols; ++i) cols[j][i] = e.at(e.cols + i, j);
  return cols;
}

inline bool sign_coherent(const std::vector<Int>& v) {
  bool pos = false, neg = false;
  for (auto& x : v) {
    if (x > 0) pos = true;
    if (x < 0) neg = true;
  }
  return !(pos && neg);
}

// The two monomial exponent vectors of the exchange relation at k.
inline std::pair<std::vector<Int>, std::vector<Int>> exchange_relation_form(const ExchangeMatrix& b,
                                                                            int k) {
  if (k < 0 || k >= b.size()) throw std::out_of_range("index out of range");
  std::vector<Int> plus(b.size(), Int(0)), minus(b.size(), Int(0));
  for (int j = 0; j < b.size(); ++j) {
    if (b.at(j, k) > 0) plus[j] = b.at(j, k);
    if (b.at(j, k) < 0) minus[j] = -b.at(j, k);
  }
  return {plus, minus};
}

// ---- canonical seed keys and exchange graphs --------------------------------

namespace detail {

inline std::string poly_key(const LaurentPoly& p) {
  std::string s;
  for (auto& [e, c] : p.terms()) {
    for (int x : e) s += std::to_string(x) + ",";
    s += ":" + c.str() + ";";
  }
  return s;
}

inline std::string coeff_key(const CoefficientPair& p) {
  std::string s;
  for (int e : p.plus.exp) s += std::to_string(e) + ",";
  s += "/";
  for (int e : p.minus.exp) s += std::to_string(e) + ",";
  return s;
}

} // namespace detail

// Key invariant under simultaneous permutation of cluster positions; ties
// between equal cluster variables are broken by the minimal permuted matrix.
inline std::string seed_key(const Seed& s) {
  int n = s.rank();
  std::vector<std::pair<std::string, int>> order(n);
  for (int i = 0; i < n; ++i)
    order[i] = {detail::poly_key(s.cluster[i]) + "#" + detail::coeff_key(s.coeffs[i]), i};
  std::sort(order.begin(), order.end());
  // tie groups of identical entries
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || order[i].first != order[i - 1].first) groups.push_back({});
    groups.back().push_back(order[i].second);
  }
  std::vector<int> perm(n); // position -> original index
  std::string best_b;
  std::vector<int> choice(groups.size(), 0);
  // iterate over permutations within each tie group (groups are tiny)
  std::vector<std::vector<int>> group_perms;
  for (auto& g : groups) {
    std::vector<int> p = g;
    std::sort(p.begin(), p.end());
    group_perms.push_back(p);
  }
  std::string bmin;
  std::vector<std::vector<int>> arrangement = group_perms;
  auto render = [&]() {
    std::vector<int> pos;
    for (auto& g : arrangement)
      for (int v : g) pos.push_back(v);
    std::string bs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bs += s.b.at(pos[i], pos[j]).str() + ",";
    if (bmin.empty() || bs < bmin) bmin = bs;
  };
  // recursive product of next_permutation over groups
  std::function<void(size_t)> rec = [&](size_t gi) {
    if (gi == arrangement.size()) {
      render();
      return;
    }
    std::sort(arrangement[gi].begin(), arrangement[gi].end());
    do {
      rec(gi + 1);
    } while (std::next_permutation(arrangement[gi].begin(), arrangement[gi].end()));
  };
  rec(0);
  std::string key;
  for (auto& [k, idx] : order) key += k + "|";
  key += "B:" + bmin;
  return key;
}

struct SeedGraph {
  std::vector<std::string> keys;
  std::vector<std::pair<int, int>> edges; // i < j
  std::vector<std::string> variables;     // distinct cluster variables seen
  bool exceeded = false;
};

// BFS closure of a seed under mutation, nodes identified by seed_key.
inline SeedGraph enumerate_seeds(const Seed& s0, long cap = 100000, int depth_cap = -1) {
  SeedGraph g;
  std::map<std::string, int> seen;
  std::set<std::string> vars;
  std::deque<std::pair<Seed, int>> queue;
  std::string k0 = seed_key(s0);
  seen[k0] = 0;
  g.keys.push_back(k0);
  queue.push_back({s0, 0});
  std::set<std::pair<int, int>> edges;
  for (auto& p : s0.cluster) vars.insert(detail::poly_key(p));
  while (!queue.empty()) {
    auto [s, depth] = queue.front();
    queue.pop_front();
    int id = seen[seed_key(s)];
    if (depth_cap >= 0 && depth >= depth_cap) continue;
    for (int k = 0; k < s.rank(); ++k) {
      Seed t = mutate_seed(s, k);
      std::string key = seed_key(t);
      auto it = seen.find(key);
      int nid;
      if (it == seen.end()) {
        if (static_cast<long>(g.keys.size()) >= cap) {
          g.exceeded = true;
          continue;
        }
        nid = static_cast<int>(g.keys.size());
        seen[key] = nid;
        g.keys.push_back(key);
        for (auto& p : t.cluster) vars.insert(detail::poly_key(p));
        queue.push_back({t, depth + 1});
      } else {
        nid = it->second;
      }
      if (nid != id) edges.insert({std::min(id, nid), std::max(id, nid)});
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  g.variables.assign(vars.begin(), vars.end());
  return g;
}

// Canonical certificate of an unlabeled undirected graph, via the diagram
// canonicalizer on the node/edge incidence structure.
inline std::string graph_certificate(int n, const std::vector<std::pair<int, int>>& edges) {
  Diagram d(n + static_cast<int>(edges.size()));
  for (size_t i = 0; i < edges.size(); ++i) {
    d.set_edge(edges[i].first, n + static_cast<int>(i), Int(1));
    d.set_edge(edges[i].second, n + static_cast<int>(i), Int(1));
  }
  return canonical_form(d);
}

// ---- audits -----------------------------------------------------------------

struct SignCoherenceReport {
  bool coherent = true;
  long states = 0;
  std::vector<int> violation_sequence; // 0-based, empty when coherent
  int violation_column = -1;
};

// Exhaustive BFS over principal extended matrices to the given depth; every
// c-vector column must have entries of one sign.
inline SignCoherenceReport check_sign_coherence(const ExchangeMatrix& b, int depth) {
  SignCoherenceReport rep;
  std::map<ExtendedMatrix, int> seen;
  std::deque<std::tuple<ExtendedMatrix, int, std::vector<int>>> queue;
  ExtendedMatrix e0 = principal_extended(b);
  seen[e0] = 0;
  queue.push_back({e0, 0, {}});
  while (!queue.empty()) {
    auto [e, d, path] = queue.front();
    queue.pop_front();
    ++rep.states;
    auto cols = c_vectors(e);
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      if (!sign_coherent(cols[j])) {
        rep.coherent = false;
        rep.violation_sequence = path;
        rep.violation_column = j;
        return rep;
      }
    }
    if (d >= depth) continue;
    for (int k = 0; k < b.size(); ++k) {
      ExtendedMatrix t = e.mutated(k);
      if (seen.count(t)) continue;
      seen[t] = 1;
      auto p = path;
      p.push_back(k);
      queue.push_back({t, d + 1, std::move(p)});
    }
  }
  return rep;
}

struct LaurentAudit {
  bool all_laurent = true;
  bool all_positive = true;
  long seeds = 0;
  std::vector<int> violation_sequence;
};

// Walks all seeds to the given depth (deduplicated) and checks that every
// cluster variable stays a Laurent polynomial with nonnegative coefficients.
inline LaurentAudit audit_laurent_positivity(const ExchangeMatrix& b, int depth,
                                             bool principal = false) {
  LaurentAudit audit;
  Seed s0 = principal ? principal_initial_seed(b) : initial_seed(b);
  std::set<std::string> seen;
  std::deque<std::tuple<Seed, int, std::vector<int>>> queue;
  seen.insert(seed_key(s0));
  queue.push_back({s0, 0, {}});
  while (!queue.empty()) {
    auto [s, d, path] = queue.front();
    queue.pop_front();
    ++audit.seeds;
    for (auto& p : s.cluster) {
      if (!p.nonnegative()) {
        audit.all_positive = false;
        if (audit.violation_sequence.empty() && !path.empty()) audit.violation_sequence = path;
      }
    }
    if (d >= depth) continue;
    for (int k = 0; k < s.rank(); ++k) {
      Seed t;
      try {
        t = mutate_seed(s, k);
      } catch (const non_laurent_division&) {
        audit.all_laurent = false;
        audit.violation_sequence = path;
        audit.violation_sequence.push_back(k);
        return audit;
      }
      std::string key = seed_key(t);
      if (seen.count(key)) continue;
      seen.insert(key);
      auto p = path;
      p.push_back(k);
      queue.push_back({t, d + 1, std::move(p)});
    }
  }
  return audit;
}

} // namespace mutorb
