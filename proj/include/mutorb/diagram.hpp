#pragma once

#include "mutorb/matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutorb {

// Directed graph with positive integer edge weights, at most one edge per
// unordered vertex pair, no loops.
class Diagram {
public:
  Diagram() = default;
  explicit Diagram(int n) : n_(n), w_(static_cast<size_t>(n) * n, Int(0)) {}

  int size() const { return n_; }

  const Int& weight(int i, int j) const { return w_[static_cast<size_t>(i) * n_ + j]; }

  void set_edge(int i, int j, Int w) {
    if (i == j) throw domain_error("diagram loop edge");
    if (w <= 0) throw domain_error("edge weight must be positive");
    if (weight(j, i) != 0) throw domain_error("two-cycle in diagram");
    w_[static_cast<size_t>(i) * n_ + j] = std::move(w);
  }

  void clear_edge(int i, int j) {
    w_[static_cast<size_t>(i) * n_ + j] = 0;
    w_[static_cast<size_t>(j) * n_ + i] = 0;
  }

  bool has_edge(int i, int j) const { return weight(i, j) > 0; }

  // (from, to, weight) triples sorted lexicographically.
  std::vector<std::tuple<int, int, Int>> edges() const {
    std::vector<std::tuple<int, int, Int>> e;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (weight(i, j) > 0) e.emplace_back(i, j, weight(i, j));
    return e;
  }

  bool operator==(const Diagram&) const = default;
  bool operator<(const Diagram& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return w_ < o.w_;
  }

private:
  int n_ = 0;
  std::vector<Int> w_;
};

struct WeightedDiagram {
  Diagram diagram;
  std::vector<Int> vertex_weights;

  bool operator==(const WeightedDiagram&) const = default;
};

// Diagram of a matrix: edge i -> j of weight -b_ij*b_ji whenever b_ij > 0.
inline Diagram diagram_of_matrix(const ExchangeMatrix& b) {
  Diagram d(b.size());
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (b.at(i, j) > 0) d.set_edge(i, j, -b.at(i, j) * b.at(j, i));
  return d;
}

inline WeightedDiagram diagram_of(const ExchangeMatrix& b) {
  return WeightedDiagram{diagram_of_matrix(b), compute_symmetrizer(b).d};
}

// Recovers the unique matrix with the given weighted diagram. For an edge
// i -> j of weight w, b_ij = a*s and b_ji = -c*s where a/c = d_i/d_j in
// lowest terms and s = sqrt(w/(a*c)); no integer s means no realization.
inline ExchangeMatrix matrices_for_weighted_diagram(const WeightedDiagram& dw) {
  const Diagram& d = dw.diagram;
  int n = d.size();
  if (static_cast<int>(dw.vertex_weights.size()) != n)
    throw shape_mismatch("vertex weight count does not match diagram order");
  for (const Int& w : dw.vertex_weights)
    if (w <= 0) throw not_realizable("vertex weights must be positive");
  ExchangeMatrix b(n);
  for (auto& [i, j, w] : d.edges()) {
    Int g = gcd_int(dw.vertex_weights[i], dw.vertex_weights[j]);
    Int a = dw.vertex_weights[i] / g;
    Int c = dw.vertex_weights[j] / g;
    Int ac = a * c;
    if (w % ac != 0)
      throw not_realizable("edge weight " + w.str() + " not divisible by " + ac.str());
    auto [s, exact] = sqrt_exact(w / (a * c));
    if (!exact)
      throw not_realizable("edge (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") admits no integer matrix entry");
    b.at(i, j) = a * s;
    b.at(j, i) = -c * s;
  }
  // The vertex weights must actually symmetrize the result.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (b.at(i, j) * dw.vertex_weights[j] != -b.at(j, i) * dw.vertex_weights[i])
        throw not_realizable("vertex weights do not symmetrize the realized matrix");
  return b;
}

// Direct mutation by the square-root rule. For each 2-path i -> k -> j with
// weights a, b and opposite weight c on (i,j), the new weight is
// (sqrt(ab) -+ sqrt(c))^2 depending on whether the triangle was oriented;
// requires abc to be a perfect square on realizable inputs.
inline Diagram mutate_diagram(const Diagram& d, int k) {
  int n = d.size();
  if (k < 0 || k >= n) throw std::out_of_range("mutation index out of range");
  Diagram r(n);
  // Edges at k reverse.
  for (int v = 0; v < n; ++v) {
    if (d.has_edge(v, k)) r.set_edge(k, v, d.weight(v, k));
    if (d.has_edge(k, v)) r.set_edge(v, k, d.weight(k, v));
  }
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    for (int j = i + 1; j < n; ++j) {
      if (j == k) continue;
      int s = -1, t = -1; // 2-path s -> k -> t, at most one orientation exists
      if (d.has_edge(i, k) && d.has_edge(k, j)) s = i, t = j;
      if (d.has_edge(j, k) && d.has_edge(k, i)) s = j, t = i;
      if (s == -1) {
        if (d.has_edge(i, j)) r.set_edge(i, j, d.weight(i, j));
        if (d.has_edge(j, i)) r.set_edge(j, i, d.weight(j, i));
        continue;
      }
      Int ab = d.weight(s, k) * d.weight(k, t);
      Int c = 0;
      bool oriented = d.has_edge(t, s); // closes the cycle s -> k -> t -> s
      if (oriented)
        c = d.weight(t, s);
      else if (d.has_edge(s, t))
        c = d.weight(s, t);
      Int nw;
      bool forward; // new edge s -> t ?
      if (c == 0) {
        nw = ab;
        forward = true;
      } else {
        auto [rt, exact] = sqrt_exact(ab * c);
        if (!exact)
          throw not_realizable("diagram mutation leaves the realizable class at pair (" +
                               std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        if (oriented) {
          nw = ab + c - 2 * rt;
          forward = ab > c;
        } else {
          nw = ab + c + 2 * rt;
          forward = true;
        }
      }
      if (nw != 0) r.set_edge(forward ? s : t, forward ? t : s, nw);
    }
  }
  return r;
}

inline WeightedDiagram mutate_diagram(const WeightedDiagram& dw, int k) {
  // Weights are mutation-invariant; with weights present, delegate to the
  // representative matrix so the two routes cannot drift apart.
  ExchangeMatrix b = matrices_for_weighted_diagram(dw);
  return WeightedDiagram{diagram_of_matrix(b.mutated(k)), dw.vertex_weights};
}

namespace detail {

// Canonical labeling by iterative refinement plus backtracking over the
// first non-singleton cell. Exact and deterministic; diagrams here are small.
class canonical_labeler {
public:
  canonical_labeler(const Diagram& d, const std::vector<Int>* vw) : d_(d), vw_(vw), n_(d.size()) {}

  // Serialized minimal certificate over all admissible labelings.
  std::vector<std::string> run() {
    if (n_ == 0) return {};
    std::vector<int> color = initial_colors();
    refine(color);
    best_.clear();
    search(color);
    return best_;
  }

private:
  const Diagram& d_;
  const std::vector<Int>* vw_;
  int n_;
  std::vector<std::string> best_;

  std::vector<int> initial_colors() const {
    std::vector<std::string> key(n_);
    for (int v = 0; v < n_; ++v) {
      std::string k = vw_ ? (*vw_)[v].str() : std::string("-");
      std::vector<std::string> inc;
      for (int u = 0; u < n_; ++u) {
        if (d_.weight(v, u) > 0) inc.push_back("o" + d_.weight(v, u).str());
        if (d_.weight(u, v) > 0) inc.push_back("i" + d_.weight(u, v).str());
      }
      std::sort(inc.begin(), inc.end());
      for (auto& s : inc) k += "," + s;
      key[v] = k;
    }
    return rank_colors(key);
  }

  template <class K> std::vector<int> rank_colors(const std::vector<K>& key) const {
    std::vector<K> sorted = key;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> color(n_);
    for (int v = 0; v < n_; ++v)
      color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), key[v]) -
                                  sorted.begin());
    return color;
  }

  void refine(std::vector<int>& color) const {
    for (;;) {
      std::vector<std::pair<int, std::vector<std::pair<std::string, int>>>> key(n_);
      for (int v = 0; v < n_; ++v) {
        key[v].first = color[v];
        for (int u = 0; u < n_; ++u) {
          if (d_.weight(v, u) > 0) key[v].second.push_back({"o" + d_.weight(v, u).str(), color[u]});
          if (d_.weight(u, v) > 0) key[v].second.push_back({"i" + d_.weight(u, v).str(), color[u]});
        }
        std::sort(key[v].second.begin(), key[v].second.end());
      }
      std::vector<int> next = rank_colors(key);
      if (next == color) return;
      color = next;
    }
  }

  // Certificate of a discrete coloring: label v by its color (a permutation).
  std::vector<std::string> certificate(const std::vector<int>& color) const {
    std::vector<int> pos(n_);
    for (int v = 0; v < n_; ++v) pos[v] = color[v];
    std::vector<std::string> cert;
    cert.reserve(static_cast<size_t>(n_) + 1);
    cert.push_back("n" + std::to_string(n_));
    if (vw_) {
      std::vector<std::string> w(n_);
      for (int v = 0; v < n_; ++v) w[pos[v]] = (*vw_)[v].str();
      std::string line = "w";
      for (auto& s : w) line += ":" + s;
      cert.push_back(line);
    }
    std::vector<std::string> edges;
    for (auto& [i, j, w] : d_.edges())
      edges.push_back(std::to_string(pos[i]) + ">" + std::to_string(pos[j]) + "*" + w.str());
    std::sort(edges.begin(), edges.end());
    cert.insert(cert.end(), edges.begin(), edges.end());
    return cert;
  }

  void search(std::vector<int> color) {
    int cell = -1;
    std::vector<int> members;
    for (int c = 0;; ++c) {
      members.clear();
      for (int v = 0; v < n_; ++v)
        if (color[v] == c) members.push_back(v);
      if (members.empty()) break;
      if (members.size() > 1) {
        cell = c;
        break;
      }
    }
    if (cell == -1) {
      std::vector<std::string> cert = certificate(color);
      if (best_.empty() || cert < best_) best_ = std::move(cert);
      return;
    }
    for (int v : members) {
      // individualize v below the rest of its cell, then refine
      std::vector<std::pair<int, int>> key(n_);
      for (int u = 0; u < n_; ++u) key[u] = {color[u], u == v ? 0 : 1};
      std::vector<int> base = rank_colors(key);
      refine(base);
      search(base);
    }
  }
};

} // namespace detail

// Key invariant under vertex relabeling; equal iff the (weighted) diagrams
// are isomorphic. Disconnected inputs canonicalize per component.
inline std::string canonical_form(const Diagram& d, const std::vector<Int>* vw = nullptr) {
  int n = d.size();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int r = 0; r < n; ++r) {
    if (comp[r] != -1) continue;
    comp[r] = ncomp;
    std::vector<int> stack{r};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < n; ++u)
        if (comp[u] == -1 && (d.has_edge(v, u) || d.has_edge(u, v))) {
          comp[u] = ncomp;
          stack.push_back(u);
        }
    }
    ++ncomp;
  }
  std::vector<std::string> parts;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
      if (comp[v] == c) verts.push_back(v);
    Diagram sub(static_cast<int>(verts.size()));
    std::vector<Int> subw;
    for (size_t a = 0; a < verts.size(); ++a)
      for (size_t b = 0; b < verts.size(); ++b)
        if (d.has_edge(verts[a], verts[b]))
          sub.set_edge(static_cast<int>(a), static_cast<int>(b), d.weight(verts[a], verts[b]));
    if (vw)
      for (int v : verts) subw.push_back((*vw)[v]);
    detail::canonical_labeler lab(sub, vw ? &subw : nullptr);
    std::string p;
    for (auto& line : lab.run()) p += line + ";";
    parts.push_back(p);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (auto& p : parts) out += p + "|";
  return out;
}

inline std::string canonical_form(const WeightedDiagram& dw) {
  return canonical_form(dw.diagram, &dw.vertex_weights);
}

inline std::string to_hex_key(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

// Full subdiagram induced by a vertex subset.
inline Diagram subdiagram(const Diagram& d, const std::vector<int>& verts) {
  Diagram sub(static_cast<int>(verts.size()));
  for (size_t a = 0; a < verts.size(); ++a)
    for (size_t b = 0; b < verts.size(); ++b)
      if (d.has_edge(verts[a], verts[b]))
        sub.set_edge(static_cast<int>(a), static_cast<int>(b), d.weight(verts[a], verts[b]));
  return sub;
}

} // namespace mutorb
