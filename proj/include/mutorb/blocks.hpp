#pragma once

#include "mutorb/diagram.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mutorb {

// Elementary blocks. The plain kinds are skew-symmetric; the T-kinds carry a
// pending vertex whose weight differs from the regular part.
enum class BlockKind {
  Vertex,
  I,
  II,
  IIIa,
  IIIb,
  IV,
  V,
  TIIIa,
  TIIIb,
  TIV,
  TV1,
  TV2,
  TV12,
  TVI,
};

enum class VertexRole { Outlet, Twin, Pending };

struct BlockTemplate {
  BlockKind kind;
  std::vector<VertexRole> roles;
  std::vector<std::tuple<int, int, int>> edges; // from, to, weight

  int size() const { return static_cast<int>(roles.size()); }
};

inline const char* block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Vertex: return "vertex";
    case BlockKind::I: return "I";
    case BlockKind::II: return "II";
    case BlockKind::IIIa: return "IIIa";
    case BlockKind::IIIb: return "IIIb";
    case BlockKind::IV: return "IV";
    case BlockKind::V: return "V";
    case BlockKind::TIIIa: return "IIIa~";
    case BlockKind::TIIIb: return "IIIb~";
    case BlockKind::TIV: return "IV~";
    case BlockKind::TV1: return "V1~";
    case BlockKind::TV2: return "V2~";
    case BlockKind::TV12: return "V12~";
    case BlockKind::TVI: return "VI~";
  }
  return "?";
}

inline std::optional<BlockKind> block_kind_from_name(const std::string& s) {
  static const std::pair<const char*, BlockKind> table[] = {
      {"vertex", BlockKind::Vertex}, {"I", BlockKind::I},       {"II", BlockKind::II},
      {"IIIa", BlockKind::IIIa},     {"IIIb", BlockKind::IIIb}, {"IV", BlockKind::IV},
      {"V", BlockKind::V},           {"IIIa~", BlockKind::TIIIa}, {"IIIb~", BlockKind::TIIIb},
      {"IV~", BlockKind::TIV},       {"V1~", BlockKind::TV1},   {"V2~", BlockKind::TV2},
      {"V12~", BlockKind::TV12},     {"VI~", BlockKind::TVI}};
  for (auto& [n, k] : table)
    if (s == n) return k;
  return std::nullopt;
}

// The catalog. Vertex numbering agrees with the block matrices used by the
// triangulated pieces, so decompositions, matrices and pieces line up.
inline const std::vector<BlockTemplate>& block_catalog() {
  using K = BlockKind;
  using R = VertexRole;
  static const std::vector<BlockTemplate> cat = {
      {K::Vertex, {R::Outlet}, {}},
      {K::I, {R::Outlet, R::Outlet}, {{0, 1, 1}}},
      {K::II, {R::Outlet, R::Outlet, R::Outlet}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}},
      {K::IIIa, {R::Outlet, R::Twin, R::Twin}, {{1, 0, 1}, {2, 0, 1}}},
      {K::IIIb, {R::Twin, R::Twin, R::Outlet}, {{2, 0, 1}, {2, 1, 1}}},
      {K::IV,
       {R::Outlet, R::Outlet, R::Twin, R::Twin},
       {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 0, 1}, {3, 0, 1}}},
      {K::V,
       {R::Outlet, R::Twin, R::Twin, R::Twin, R::Twin},
       {{0, 1, 1}, {0, 4, 1}, {1, 2, 1}, {1, 3, 1}, {4, 2, 1}, {4, 3, 1}, {2, 0, 1}, {3, 0, 1}}},
      // weight-2 edge from the pending vertex into the outlet
      {K::TIIIa, {R::Outlet, R::Pending}, {{1, 0, 2}}},
      // and the reversed orientation
      {K::TIIIb, {R::Pending, R::Outlet}, {{1, 0, 2}}},
      {K::TIV, {R::Outlet, R::Outlet, R::Pending}, {{0, 1, 1}, {1, 2, 2}, {2, 0, 2}}},
      {K::TV1,
       {R::Outlet, R::Twin, R::Pending, R::Twin},
       {{0, 1, 1}, {0, 3, 1}, {1, 2, 2}, {3, 2, 2}, {2, 0, 2}}},
      {K::TV2,
       {R::Pending, R::Twin, R::Outlet, R::Twin},
       {{0, 1, 2}, {0, 3, 2}, {1, 2, 1}, {3, 2, 1}, {2, 0, 2}}},
      {K::TV12, {R::Pending, R::Outlet, R::Pending}, {{0, 1, 2}, {1, 2, 2}, {2, 0, 4}}},
      // every arc of this piece is doubled, so nothing can be glued to it
      {K::TVI,
       {R::Twin, R::Twin, R::Twin, R::Twin, R::Pending},
       {{0, 1, 1},
        {0, 3, 1},
        {2, 1, 1},
        {2, 3, 1},
        {1, 4, 2},
        {3, 4, 2},
        {4, 0, 2},
        {4, 2, 2}}},
  };
  return cat;
}

inline const BlockTemplate& block_template(BlockKind k) {
  for (auto& t : block_catalog())
    if (t.kind == k) return t;
  throw domain_error("unknown block kind");
}

// The matrix of a block in catalog vertex order.
inline ExchangeMatrix block_matrix(BlockKind k) {
  switch (k) {
    case BlockKind::Vertex: return ExchangeMatrix::from_rows({{0}});
    case BlockKind::I: return ExchangeMatrix::from_rows({{0, 1}, {-1, 0}});
    case BlockKind::II: return ExchangeMatrix::from_rows({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});
    case BlockKind::IIIa:
      return ExchangeMatrix::from_rows({{0, -1, -1}, {1, 0, 0}, {1, 0, 0}});
    case BlockKind::IIIb:
      return ExchangeMatrix::from_rows({{0, 0, -1}, {0, 0, -1}, {1, 1, 0}});
    case BlockKind::IV:
      return ExchangeMatrix::from_rows(
          {{0, 1, -1, -1}, {-1, 0, 1, 1}, {1, -1, 0, 0}, {1, -1, 0, 0}});
    case BlockKind::V:
      return ExchangeMatrix::from_rows({{0, 1, -1, -1, 1},
                                        {-1, 0, 1, 1, 0},
                                        {1, -1, 0, 0, -1},
                                        {1, -1, 0, 0, -1},
                                        {-1, 0, 1, 1, 0}});
    case BlockKind::TIIIa: return ExchangeMatrix::from_rows({{0, -1}, {2, 0}});
    case BlockKind::TIIIb: return ExchangeMatrix::from_rows({{0, -2}, {1, 0}});
    case BlockKind::TIV:
      return ExchangeMatrix::from_rows({{0, 1, -1}, {-1, 0, 1}, {2, -2, 0}});
    case BlockKind::TV1:
      return ExchangeMatrix::from_rows(
          {{0, 1, -1, 1}, {-1, 0, 1, 0}, {2, -2, 0, -2}, {-1, 0, 1, 0}});
    case BlockKind::TV2:
      return ExchangeMatrix::from_rows(
          {{0, 2, -2, 2}, {-1, 0, 1, 0}, {1, -1, 0, -1}, {-1, 0, 1, 0}});
    case BlockKind::TV12:
      return ExchangeMatrix::from_rows({{0, 2, -2}, {-1, 0, 1}, {2, -2, 0}});
    case BlockKind::TVI:
      return ExchangeMatrix::from_rows({{0, 1, 0, 1, -1},
                                        {-1, 0, -1, 0, 1},
                                        {0, 1, 0, 1, -1},
                                        {-1, 0, -1, 0, 1},
                                        {2, -2, 2, -2, 0}});
  }
  throw domain_error("unknown block kind");
}

struct BlockInstance {
  BlockKind kind;
  std::vector<int> verts; // template vertex index -> diagram vertex
};

struct OutletRef {
  int block;  // index into blocks
  int vertex; // template vertex index
  bool operator==(const OutletRef&) const = default;
};

struct BlockDecomposition {
  std::vector<BlockInstance> blocks;
  std::vector<std::pair<OutletRef, OutletRef>> matching;
};

// Glues the given blocks along the matching and applies the two collision
// rules: opposite single edges cancel, equal single edges merge to weight 4.
inline Diagram assemble(const std::vector<BlockKind>& kinds,
                        const std::vector<std::pair<OutletRef, OutletRef>>& matching) {
  std::vector<int> offset(kinds.size() + 1, 0);
  for (size_t b = 0; b < kinds.size(); ++b)
    offset[b + 1] = offset[b] + block_template(kinds[b]).size();
  int total = offset[kinds.size()];
  std::vector<int> parent(total);
  for (int i = 0; i < total; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> used(total, 0);
  for (auto& [a, b] : matching) {
    if (a.block < 0 || a.block >= static_cast<int>(kinds.size()) || b.block < 0 ||
        b.block >= static_cast<int>(kinds.size()))
      throw invalid_matching("matching refers to a missing block");
    if (a.block == b.block) throw invalid_matching("matching pairs outlets of the same block");
    const BlockTemplate& ta = block_template(kinds[a.block]);
    const BlockTemplate& tb = block_template(kinds[b.block]);
    if (a.vertex < 0 || a.vertex >= ta.size() || b.vertex < 0 || b.vertex >= tb.size())
      throw invalid_matching("matching refers to a missing vertex");
    if (ta.roles[a.vertex] != VertexRole::Outlet || tb.roles[b.vertex] != VertexRole::Outlet)
      throw invalid_matching("matching pairs non-outlet vertices");
    int ia = offset[a.block] + a.vertex;
    int ib = offset[b.block] + b.vertex;
    if (used[ia]++ || used[ib]++) throw invalid_matching("outlet matched twice");
    parent[find(ia)] = find(ib);
  }
  std::map<int, int> label;
  for (int i = 0; i < total; ++i) {
    int r = find(i);
    if (!label.count(r)) {
      int next = static_cast<int>(label.size());
      label[r] = next;
    }
  }
  int n = static_cast<int>(label.size());
  // net signed arrow sums per unordered pair, split by weight class
  std::map<std::pair<int, int>, int> ones;     // signed count of single edges
  std::map<std::pair<int, int>, Int> heavy;    // weight-2 and weight-4 edges
  for (size_t b = 0; b < kinds.size(); ++b) {
    for (auto& [f, t, w] : block_template(kinds[b]).edges) {
      int x = label[find(offset[b] + f)];
      int y = label[find(offset[b] + t)];
      if (x == y) throw invalid_matching("matching collapses an edge to a loop");
      auto key = std::minmax(x, y);
      int dir = x < y ? 1 : -1;
      if (w == 1)
        ones[{key.first, key.second}] += dir;
      else {
        auto& h = heavy[{key.first, key.second}];
        if (h != 0) throw invalid_matching("unresolvable edge collision");
        h = dir * Int(w);
      }
    }
  }
  Diagram d(n);
  for (auto& [key, cnt] : ones) {
    if (heavy.count(key) && cnt != 0) throw invalid_matching("unresolvable edge collision");
    if (cnt == 0) continue; // opposite single edges cancel
    if (std::abs(cnt) > 2) throw invalid_matching("unresolvable edge collision");
    int w = std::abs(cnt) == 2 ? 4 : 1;
    if (cnt > 0)
      d.set_edge(key.first, key.second, Int(w));
    else
      d.set_edge(key.second, key.first, Int(w));
  }
  for (auto& [key, w] : heavy) {
    if (w > 0)
      d.set_edge(key.first, key.second, w);
    else
      d.set_edge(key.second, key.first, -w);
  }
  return d;
}

inline Diagram reassemble(const BlockDecomposition& dec, int n) {
  // Rebuilds the diagram on the original vertex set; used to validate results.
  Diagram d(n);
  std::map<std::pair<int, int>, int> ones;
  std::map<std::pair<int, int>, Int> heavy;
  for (auto& blk : dec.blocks) {
    for (auto& [f, t, w] : block_template(blk.kind).edges) {
      int x = blk.verts[f], y = blk.verts[t];
      auto key = std::minmax(x, y);
      int dir = x < y ? 1 : -1;
      if (w == 1)
        ones[{key.first, key.second}] += dir;
      else
        heavy[{key.first, key.second}] += dir * Int(w);
    }
  }
  for (auto& [key, cnt] : ones) {
    if (cnt == 0) continue;
    int w = std::abs(cnt) == 2 ? 4 : 1;
    if (cnt > 0)
      d.set_edge(key.first, key.second, Int(w));
    else
      d.set_edge(key.second, key.first, Int(w));
  }
  for (auto& [key, w] : heavy) {
    if (w > 0)
      d.set_edge(key.first, key.second, w);
    else if (w < 0)
      d.set_edge(key.second, key.first, -w);
  }
  return d;
}

struct SearchLimits {
  long nodes = 1000000;
};

namespace detail {

struct decomp_search {
  const Diagram& d;
  const std::vector<Int>* vw; // vertex weights, optional
  Int w;                      // regular-part weight, meaningful when vw != nullptr
  long budget;
  long nodes = 0;
  bool exceeded = false;
  int n;

  // requirement per ordered pair: 0 none, 1, 2 or 4
  std::vector<int> need;
  std::vector<int> units; // satisfied units; weight-4 pairs need two
  std::vector<int> usage; // blocks touching each vertex
  std::vector<char> dead; // vertex consumed by a dead end
  std::vector<BlockInstance> placed;

  decomp_search(const Diagram& dia, const std::vector<Int>* weights, Int reg, long nodebudget)
      : d(dia), vw(weights), w(std::move(reg)), budget(nodebudget), n(dia.size()) {
    need.assign(static_cast<size_t>(n) * n, 0);
    units.assign(static_cast<size_t>(n) * n, 0);
    usage.assign(n, 0);
    dead.assign(n, 0);
    for (auto& [i, j, wt] : d.edges()) {
      if (wt == 1 || wt == 2 || wt == 4)
        need[static_cast<size_t>(i) * n + j] = static_cast<int>(wt);
      else
        need[static_cast<size_t>(i) * n + j] = -1; // never satisfiable
    }
  }

  int idx(int i, int j) const { return i * n + j; }

  bool weight_ok(VertexRole role, int v) const {
    if (!vw) return true;
    const Int& dv = (*vw)[v];
    if (role == VertexRole::Pending) return dv == 2 * w || (w == 2 && dv == 1);
    return dv == w;
  }

  // Whether a template edge of weight t can still be mapped onto (x, y).
  bool edge_ok(int x, int y, int t) const {
    int k = need[idx(x, y)];
    int u = units[idx(x, y)];
    if (t == 1) return (k == 1 && u == 0) || (k == 4 && u < 2);
    if (t == 2) return k == 2 && u == 0;
    if (t == 4) return k == 4 && u == 0;
    return false;
  }

  void apply_edge(int x, int y, int t, int delta) { units[idx(x, y)] += (t == 4 ? 2 : 1) * delta; }

  bool covered() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int k = need[idx(i, j)];
        if (k == 0) continue;
        if (k < 0) return false;
        if (units[idx(i, j)] != (k == 4 ? 2 : 1)) return false;
      }
    return true;
  }

  bool find_anchor(int& ai, int& aj) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int k = need[idx(i, j)];
        if (k <= 0) continue;
        if (units[idx(i, j)] < (k == 4 ? 2 : 1)) {
          ai = i;
          aj = j;
          return true;
        }
      }
    return false;
  }

  bool place_block(const BlockTemplate& t, std::vector<int>& map, size_t pos,
                   std::vector<char>& taken) {
    if (++nodes > budget) {
      exceeded = true;
      return false;
    }
    if (pos == map.size()) return commit(t, map);
    if (map[pos] != -1) return place_block(t, map, pos + 1, taken);
    for (int v = 0; v < n; ++v) {
      if (taken[v] || dead[v]) continue;
      if (usage[v] >= (t.roles[pos] == VertexRole::Outlet ? 2 : 1)) continue;
      if (t.roles[pos] != VertexRole::Outlet && usage[v] != 0) continue;
      if (!weight_ok(t.roles[pos], v)) continue;
      bool ok = true;
      for (auto& [f, tt, wt] : t.edges) {
        int a = f == static_cast<int>(pos) ? v : (map[f] != -1 ? map[f] : -1);
        int b = tt == static_cast<int>(pos) ? v : (map[tt] != -1 ? map[tt] : -1);
        if ((f == static_cast<int>(pos) || tt == static_cast<int>(pos)) && a != -1 && b != -1)
          if (!edge_ok(a, b, wt)) {
            ok = false;
            break;
          }
      }
      if (!ok) continue;
      map[pos] = v;
      taken[v] = 1;
      if (place_block(t, map, pos + 1, taken)) return true;
      map[pos] = -1;
      taken[v] = 0;
      if (exceeded) return false;
    }
    return false;
  }

  bool commit(const BlockTemplate& t, const std::vector<int>& map) {
    // a dead end takes no further blocks, so this block must account for
    // every diagram edge incident to it
    for (int a = 0; a < t.size(); ++a) {
      if (t.roles[a] == VertexRole::Outlet) continue;
      int v = map[a];
      std::vector<std::tuple<int, int, Int>> here, tmpl;
      for (int u = 0; u < n; ++u) {
        if (d.has_edge(v, u)) here.emplace_back(0, u, d.weight(v, u));
        if (d.has_edge(u, v)) here.emplace_back(1, u, d.weight(u, v));
      }
      for (auto& [f, tt, wt] : t.edges) {
        if (f == a) tmpl.emplace_back(0, map[tt], Int(wt));
        if (tt == a) tmpl.emplace_back(1, map[f], Int(wt));
      }
      std::sort(here.begin(), here.end());
      std::sort(tmpl.begin(), tmpl.end());
      if (here != tmpl) return false;
    }
    for (auto& [f, tt, wt] : t.edges) apply_edge(map[f], map[tt], wt, +1);
    for (int a = 0; a < t.size(); ++a) {
      ++usage[map[a]];
      if (t.roles[a] != VertexRole::Outlet) dead[map[a]] = 1;
    }
    placed.push_back(BlockInstance{t.kind, map});
    if (search()) return true;
    placed.pop_back();
    for (auto& [f, tt, wt] : t.edges) apply_edge(map[f], map[tt], wt, -1);
    for (int a = 0; a < t.size(); ++a) {
      --usage[map[a]];
      if (t.roles[a] != VertexRole::Outlet) dead[map[a]] = 0;
    }
    return false;
  }

  bool search() {
    int ai, aj;
    if (!find_anchor(ai, aj)) return covered();
    for (auto& t : block_catalog()) {
      if (t.edges.empty()) continue;
      for (size_t e = 0; e < t.edges.size(); ++e) {
        auto [f, tt, wt] = t.edges[e];
        if (!edge_ok(ai, aj, wt)) continue;
        if (dead[ai] || dead[aj]) continue;
        if (usage[ai] >= (t.roles[f] == VertexRole::Outlet ? 2 : 1)) continue;
        if (usage[aj] >= (t.roles[tt] == VertexRole::Outlet ? 2 : 1)) continue;
        if (t.roles[f] != VertexRole::Outlet && usage[ai] != 0) continue;
        if (t.roles[tt] != VertexRole::Outlet && usage[aj] != 0) continue;
        if (!weight_ok(t.roles[f], ai) || !weight_ok(t.roles[tt], aj)) continue;
        if (ai == aj) continue;
        std::vector<int> map(t.size(), -1);
        std::vector<char> taken(n, 0);
        map[f] = ai;
        map[tt] = aj;
        taken[ai] = 1;
        taken[aj] = 1;
        if (place_block(t, map, 0, taken)) return true;
        if (exceeded) return false;
      }
    }
    return false;
  }

  std::optional<BlockDecomposition> run() {
    if (!search()) {
      if (exceeded) throw search_budget_exceeded("decomposition search budget exceeded");
      return std::nullopt;
    }
    // isolated / uncovered vertices become single-vertex blocks
    for (int v = 0; v < n; ++v)
      if (usage[v] == 0) placed.push_back(BlockInstance{BlockKind::Vertex, {v}});
    BlockDecomposition dec;
    dec.blocks = placed;
    // derive the matching from shared vertices
    std::map<int, std::vector<OutletRef>> at;
    for (size_t b = 0; b < dec.blocks.size(); ++b) {
      const BlockTemplate& t = block_template(dec.blocks[b].kind);
      for (int a = 0; a < t.size(); ++a)
        if (t.roles[a] == VertexRole::Outlet)
          at[dec.blocks[b].verts[a]].push_back(OutletRef{static_cast<int>(b), a});
    }
    for (auto& [v, refs] : at)
      if (refs.size() == 2) dec.matching.push_back({refs[0], refs[1]});
    return dec;
  }
};

} // namespace detail

inline std::optional<BlockDecomposition> find_s_decomposition(const Diagram& d,
                                                              const SearchLimits& lim = {}) {
  detail::decomp_search s(d, nullptr, Int(1), lim.nodes);
  return s.run();
}

inline std::optional<BlockDecomposition> find_s_decomposition(const WeightedDiagram& dw,
                                                              const SearchLimits& lim = {}) {
  // The regular-part weight is pinned by the vertex weights where possible;
  // diagrams with weights in {1,2} only are tried both ways.
  std::vector<Int> ws;
  bool has4 = false, has1 = false;
  for (auto& x : dw.vertex_weights) {
    if (x == 4) has4 = true;
    if (x == 1) has1 = true;
    if (x != 1 && x != 2 && x != 4) return std::nullopt;
  }
  if (has4)
    ws = {Int(2)};
  else if (!has1)
    ws = {Int(2)}; // all weights 2: scaled regular part
  else
    ws = {Int(1), Int(2)};
  for (auto& w : ws) {
    detail::decomp_search s(dw.diagram, &dw.vertex_weights, w, lim.nodes);
    auto r = s.run();
    if (r) return r;
  }
  return std::nullopt;
}

} // namespace mutorb
