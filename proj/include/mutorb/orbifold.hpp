#pragma once

#include "mutorb/blocks.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutorb {

enum class ArcKind { Ordinary, Pending, Boundary };
enum class PointWeight { Half, Two }; // orbifold point weight 1/2 or 2

// Combinatorial triangulated orbifold. Triangles are cyclically ordered arc
// triples; the cyclic order carries the orientation. A self-folded triangle
// is stored as (radius, loop, radius). A pending arc appearing once in a
// triple is folded at its orbifold point; twice, it is the shadow of a
// doubled arc and cannot be flipped. Arcs of pieces that are not yet glued
// may sit in a single triangle.
struct Triangulation {
  struct Arc {
    ArcKind kind = ArcKind::Ordinary;
    int orb_point = -1; // pending arcs only
    bool operator==(const Arc&) const = default;
  };

  std::vector<Arc> arcs;
  std::vector<std::array<int, 3>> tris;
  std::vector<PointWeight> point_weights;
  Int regular_weight = 1; // weight of ordinary arcs

  bool operator==(const Triangulation&) const = default;

  int arc_count() const { return static_cast<int>(arcs.size()); }
};

inline bool is_self_folded(const std::array<int, 3>& t) { return t[0] == t[2] && t[0] != t[1]; }

struct ArcSlot {
  int tri;
  int pos;
};

// Slots per arc; the radius of a self-folded triangle occupies two.
inline std::vector<std::vector<ArcSlot>> arc_slots(const Triangulation& t) {
  std::vector<std::vector<ArcSlot>> s(t.arcs.size());
  for (int i = 0; i < static_cast<int>(t.tris.size()); ++i)
    for (int p = 0; p < 3; ++p) {
      int a = t.tris[i][p];
      if (a < 0 || a >= t.arc_count()) throw untriangulated_input("triangle names a missing arc");
      s[a].push_back({i, p});
    }
  return s;
}

inline void validate(const Triangulation& t) {
  int npt = static_cast<int>(t.point_weights.size());
  if (t.regular_weight != 1 && t.regular_weight != 2)
    throw untriangulated_input("regular part weight must be 1 or 2");
  std::vector<int> pending_of_point(npt, -1);
  for (int a = 0; a < t.arc_count(); ++a) {
    const auto& arc = t.arcs[a];
    if (arc.kind == ArcKind::Pending) {
      if (arc.orb_point < 0 || arc.orb_point >= npt)
        throw untriangulated_input("pending arc without orbifold point");
      if (pending_of_point[arc.orb_point] != -1)
        throw untriangulated_input("orbifold point with two pending arcs");
      pending_of_point[arc.orb_point] = a;
      if (t.point_weights[arc.orb_point] == PointWeight::Half && t.regular_weight != 2)
        throw untriangulated_input("weight-1/2 point requires regular weight 2");
    } else if (arc.orb_point != -1) {
      throw untriangulated_input("non-pending arc attached to an orbifold point");
    }
  }
  for (int q = 0; q < npt; ++q)
    if (pending_of_point[q] == -1) throw untriangulated_input("orbifold point with no pending arc");
  for (auto& tri : t.tris) {
    if (is_self_folded(tri)) {
      if (t.arcs[tri[0]].kind != ArcKind::Ordinary || t.arcs[tri[1]].kind != ArcKind::Ordinary)
        throw untriangulated_input("self-folded triangle must use ordinary arcs");
      continue;
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw untriangulated_input("repeated arc in a non-self-folded triangle");
    int pend = 0;
    for (int p = 0; p < 3; ++p)
      if (t.arcs[tri[p]].kind == ArcKind::Pending) ++pend;
    if (pend > 2) throw untriangulated_input("triangle with three pending arcs");
  }
  auto slots = arc_slots(t);
  for (int a = 0; a < t.arc_count(); ++a) {
    size_t n = slots[a].size();
    switch (t.arcs[a].kind) {
      case ArcKind::Boundary:
        if (n != 1) throw untriangulated_input("boundary arc must bound exactly one triangle");
        break;
      case ArcKind::Ordinary:
      case ArcKind::Pending:
        if (n < 1 || n > 2) throw untriangulated_input("arc bounds no or too many triangles");
        break;
    }
  }
}

inline bool is_complete(const Triangulation& t) {
  auto slots = arc_slots(t);
  for (int a = 0; a < t.arc_count(); ++a) {
    if (t.arcs[a].kind == ArcKind::Boundary) continue;
    if (t.arcs[a].kind == ArcKind::Ordinary && slots[a].size() != 2) return false;
  }
  return true;
}

// ---- diagram and signed adjacency -----------------------------------------

// Arrows per the triangle rules: cyclic-successor arrows in each
// non-self-folded triangle; the radius of a self-folded triangle copies the
// arrows of its loop; opposite arrows cancel, equal arrows merge to label 4;
// labels are 2 for pending/ordinary incidences and 4 for pending/pending.
inline Diagram diagram_of_triangulation(const Triangulation& t, std::vector<int>* arc_index_out = nullptr) {
  validate(t);
  int m = t.arc_count();
  std::vector<int> index(m, -1);
  int n = 0;
  for (int a = 0; a < m; ++a)
    if (t.arcs[a].kind != ArcKind::Boundary) index[a] = n++;
  // twins: loop -> radius for self-folded triangles
  std::map<int, int> radius_of;
  for (auto& tri : t.tris)
    if (is_self_folded(tri)) radius_of[tri[1]] = tri[0];
  std::map<std::pair<int, int>, int> count;
  for (auto& tri : t.tris) {
    if (is_self_folded(tri)) continue;
    for (int p = 0; p < 3; ++p) {
      int a = tri[p], b = tri[(p + 1) % 3];
      if (t.arcs[a].kind == ArcKind::Boundary || t.arcs[b].kind == ArcKind::Boundary) continue;
      std::vector<int> as{a}, bs{b};
      if (auto it = radius_of.find(a); it != radius_of.end()) as.push_back(it->second);
      if (auto it = radius_of.find(b); it != radius_of.end()) bs.push_back(it->second);
      for (int x : as)
        for (int y : bs) ++count[{x, y}];
    }
  }
  Diagram d(n);
  std::map<std::pair<int, int>, int> nets;
  for (auto& [key, c] : count) {
    auto [x, y] = key;
    if (x < y)
      nets[{x, y}] += c;
    else
      nets[{y, x}] -= c;
  }
  for (auto& [key, net] : nets) {
    auto [a, b] = key;
    if (net == 0) continue;
    int from = net > 0 ? a : b;
    int to = net > 0 ? b : a;
    int mult = std::abs(net);
    bool pa = t.arcs[a].kind == ArcKind::Pending;
    bool pb = t.arcs[b].kind == ArcKind::Pending;
    Int label;
    if (mult == 1)
      label = pa && pb ? 4 : (pa || pb ? 2 : 1);
    else if (mult == 2 && !pa && !pb)
      label = 4;
    else
      throw untriangulated_input("unresolvable arrow multiplicity between arcs " +
                                 std::to_string(a) + " and " + std::to_string(b));
    d.set_edge(index[from], index[to], label);
  }
  if (arc_index_out) *arc_index_out = index;
  return d;
}

inline WeightedDiagram weighted_diagram_of_triangulation(const Triangulation& t) {
  std::vector<int> index;
  Diagram d = diagram_of_triangulation(t, &index);
  std::vector<Int> w(d.size());
  for (int a = 0; a < t.arc_count(); ++a) {
    if (index[a] == -1) continue;
    if (t.arcs[a].kind == ArcKind::Pending) {
      PointWeight pw = t.point_weights[t.arcs[a].orb_point];
      w[index[a]] = pw == PointWeight::Two ? Int(2 * t.regular_weight) : Int(t.regular_weight / 2);
    } else {
      w[index[a]] = t.regular_weight;
    }
  }
  return WeightedDiagram{std::move(d), std::move(w)};
}

// Exchange matrix of a triangulation; indices follow non-boundary arc order.
inline ExchangeMatrix signed_adjacency(const Triangulation& t) {
  return matrices_for_weighted_diagram(weighted_diagram_of_triangulation(t));
}

// ---- flips -----------------------------------------------------------------

namespace detail {

inline std::array<int, 3> rotate_last(const std::array<int, 3>& tri, int arc) {
  for (int r = 0; r < 3; ++r)
    if (tri[(r + 2) % 3] == arc) return {tri[r], tri[(r + 1) % 3], arc};
  throw domain_error("arc not in triangle");
}

inline std::array<int, 3> rotate_first(const std::array<int, 3>& tri, int arc) {
  for (int r = 0; r < 3; ++r)
    if (tri[r] == arc) return {arc, tri[(r + 1) % 3], tri[(r + 2) % 3]};
  throw domain_error("arc not in triangle");
}

} // namespace detail

// Local flip catalog: the quadrilateral move, the fold move of a pending arc
// (digon and two-pending-monogon configurations) and the moves into and out
// of a self-folded triangle. The flipped arc keeps its label, so matrix
// indices are stable across flips.
inline Triangulation flip(const Triangulation& t, int arc) {
  validate(t);
  if (arc < 0 || arc >= t.arc_count()) throw std::out_of_range("arc label out of range");
  if (t.arcs[arc].kind == ArcKind::Boundary) throw boundary_arc("cannot flip a boundary arc");
  auto slots = arc_slots(t);
  const auto& occ = slots[arc];
  // radius of a self-folded triangle
  if (occ.size() == 2 && occ[0].tri == occ[1].tri)
    throw not_flippable("interior edge of a self-folded triangle");
  if (t.arcs[arc].kind == ArcKind::Pending && occ.size() == 2)
    throw not_flippable("doubled pending arc");
  Triangulation r = t;
  if (occ.size() == 1) {
    if (t.arcs[arc].kind != ArcKind::Pending)
      throw not_flippable("arc is not glued on both sides");
    // fold move: (g, Y, Z) -> (g', Z, Y)
    auto tri = detail::rotate_first(t.tris[occ[0].tri], arc);
    r.tris[occ[0].tri] = {arc, tri[2], tri[1]};
    return r;
  }
  int i1 = occ[0].tri, i2 = occ[1].tri;
  bool sf1 = is_self_folded(t.tris[i1]);
  bool sf2 = is_self_folded(t.tris[i2]);
  if (sf1 && sf2) throw not_flippable("loop shared by two self-folded triangles");
  if (sf1 || sf2) {
    // loop of a self-folded triangle: (r,l,r) + (p,q,l) -> (r,p,l') + (l',q,r)
    int sf = sf1 ? i1 : i2;
    int out = sf1 ? i2 : i1;
    if (t.tris[sf][1] != arc) throw not_flippable("interior edge of a self-folded triangle");
    int rad = t.tris[sf][0];
    auto o = detail::rotate_last(t.tris[out], arc);
    r.tris[sf] = {rad, o[0], arc};
    r.tris[out] = {arc, o[1], rad};
    return r;
  }
  auto a = detail::rotate_last(t.tris[i1], arc);
  auto b = detail::rotate_last(t.tris[i2], arc);
  std::array<int, 3> n1{a[1], b[0], arc};
  std::array<int, 3> n2{b[1], a[0], arc};
  for (auto* tri : {&n1, &n2}) {
    if ((*tri)[0] == (*tri)[1]) {
      int rad = (*tri)[0];
      if (t.arcs[rad].kind == ArcKind::Pending)
        throw not_flippable("flip would fold a pending arc");
      *tri = {rad, arc, rad}; // the flipped arc becomes the enclosing loop
    }
  }
  r.tris[i1] = n1;
  r.tris[i2] = n2;
  return r;
}

// ---- canonical form and flip graph ----------------------------------------

namespace detail {

inline std::string tri_token(const std::array<int, 3>& tri, const std::vector<int>& label) {
  // rotation-minimal token; cyclic order kept, so orientation is preserved
  std::array<int, 3> best{-1, -1, -1};
  for (int r = 0; r < 3; ++r) {
    std::array<int, 3> cand{label[tri[r]], label[tri[(r + 1) % 3]], label[tri[(r + 2) % 3]]};
    if (best[0] == -1 || cand < best) best = cand;
  }
  return std::to_string(best[0]) + "." + std::to_string(best[1]) + "." + std::to_string(best[2]);
}

struct tri_canon {
  const Triangulation& t;
  int m;
  std::vector<std::vector<ArcSlot>> slots;
  std::vector<std::string> best;

  explicit tri_canon(const Triangulation& tt) : t(tt), m(tt.arc_count()), slots(arc_slots(tt)) {}

  template <class K> std::vector<int> rank(const std::vector<K>& key) const {
    std::vector<K> s = key;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<int> c(m);
    for (int a = 0; a < m; ++a)
      c[a] = static_cast<int>(std::lower_bound(s.begin(), s.end(), key[a]) - s.begin());
    return c;
  }

  bool pinned(int a) const {
    // boundary segments and exposed gluing arcs are part of the fixed
    // geometry; only interior arcs may be relabeled
    return t.arcs[a].kind == ArcKind::Boundary ||
           (t.arcs[a].kind == ArcKind::Ordinary && slots[a].size() == 1);
  }

  std::vector<int> initial() const {
    std::vector<std::string> key(m);
    for (int a = 0; a < m; ++a) {
      std::string k;
      if (pinned(a)) {
        key[a] = "f" + std::to_string(a);
        continue;
      }
      switch (t.arcs[a].kind) {
        case ArcKind::Boundary: k = "b"; break;
        case ArcKind::Ordinary: k = "o"; break;
        case ArcKind::Pending:
          k = t.point_weights[t.arcs[a].orb_point] == PointWeight::Two ? "p2" : "ph";
          break;
      }
      k += std::to_string(slots[a].size());
      key[a] = "z" + k;
    }
    return rank(key);
  }

  void refine(std::vector<int>& color) const {
    for (;;) {
      std::vector<std::pair<int, std::vector<std::pair<int, int>>>> key(m);
      for (int a = 0; a < m; ++a) {
        key[a].first = color[a];
        for (auto& s : slots[a]) {
          const auto& tri = t.tris[s.tri];
          key[a].second.push_back(
              {color[tri[(s.pos + 1) % 3]], color[tri[(s.pos + 2) % 3]]});
        }
        std::sort(key[a].second.begin(), key[a].second.end());
      }
      auto next = rank(key);
      if (next == color) return;
      color = next;
    }
  }

  std::vector<std::string> certificate(const std::vector<int>& color) const {
    std::vector<std::string> lines;
    for (int a = 0; a < m; ++a) {
      std::string k;
      switch (t.arcs[a].kind) {
        case ArcKind::Boundary: k = "b"; break;
        case ArcKind::Ordinary: k = "o"; break;
        case ArcKind::Pending:
          k = t.point_weights[t.arcs[a].orb_point] == PointWeight::Two ? "p2" : "ph";
          break;
      }
      lines.push_back("a" + std::to_string(color[a]) + k);
    }
    for (auto& tri : t.tris) lines.push_back("t" + tri_token(tri, color));
    std::sort(lines.begin(), lines.end());
    std::string joined;
    for (auto& l : lines) joined += l + ";";
    return {joined};
  }

  void search(std::vector<int> color) {
    int cell = -1;
    std::vector<int> members;
    for (int c = 0;; ++c) {
      members.clear();
      for (int a = 0; a < m; ++a)
        if (color[a] == c) members.push_back(a);
      if (members.empty()) break;
      if (members.size() > 1) {
        cell = c;
        break;
      }
    }
    if (cell == -1) {
      auto cert = certificate(color);
      if (best.empty() || cert < best) best = std::move(cert);
      return;
    }
    for (int v : members) {
      std::vector<std::pair<int, int>> key(m);
      for (int a = 0; a < m; ++a) key[a] = {color[a], a == v ? 0 : 1};
      auto base = rank(key);
      refine(base);
      search(base);
    }
  }

  std::string run() {
    if (m == 0) return "";
    auto c = initial();
    refine(c);
    search(c);
    return "w" + t.regular_weight.str() + "|" + best[0];
  }
};

} // namespace detail

inline std::string canonical_key(const Triangulation& t) { return detail::tri_canon(t).run(); }

struct FlipGraph {
  std::vector<std::string> keys;                  // canonical key per node
  std::vector<Triangulation> nodes;               // representative per node
  std::vector<std::pair<int, int>> edges;         // deduplicated, i < j
  bool exceeded = false;
};

inline FlipGraph flip_graph(const Triangulation& t0, int radius_cap, int count_cap) {
  FlipGraph g;
  std::map<std::string, int> seen;
  std::vector<int> frontier;
  std::string k0 = canonical_key(t0);
  seen[k0] = 0;
  g.keys.push_back(k0);
  g.nodes.push_back(t0);
  frontier.push_back(0);
  std::set<std::pair<int, int>> edges;
  for (int depth = 0; depth < radius_cap && !frontier.empty(); ++depth) {
    std::vector<int> next;
    for (int id : frontier) {
      Triangulation cur = g.nodes[id];
      for (int a = 0; a < cur.arc_count(); ++a) {
        Triangulation f;
        try {
          f = flip(cur, a);
        } catch (const domain_error&) {
          continue;
        }
        std::string k = canonical_key(f);
        auto it = seen.find(k);
        int nid;
        if (it == seen.end()) {
          if (static_cast<int>(g.nodes.size()) >= count_cap) {
            g.exceeded = true;
            continue;
          }
          nid = static_cast<int>(g.nodes.size());
          seen[k] = nid;
          g.keys.push_back(k);
          g.nodes.push_back(f);
          next.push_back(nid);
        } else {
          nid = it->second;
        }
        if (nid != id) edges.insert({std::min(id, nid), std::max(id, nid)});
      }
    }
    frontier = std::move(next);
  }
  if (!frontier.empty()) g.exceeded = true;
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

// ---- signature -------------------------------------------------------------

struct OrbifoldSignature {
  int genus = 0;
  std::vector<int> boundary; // marked points per boundary component, sorted desc
  int punctures = 0;
  std::vector<PointWeight> orbifold_points; // sorted, Half before Two

  bool operator==(const OrbifoldSignature&) const = default;
};

namespace detail {

struct corner_complex {
  const Triangulation& t;
  std::vector<std::vector<ArcSlot>> slots;
  int ncorner;
  std::vector<std::vector<int>> adj; // corner graph
  // corner id = 3*tri + pos, the corner between side pos and side pos+1

  explicit corner_complex(const Triangulation& tt) : t(tt), slots(arc_slots(tt)) {
    ncorner = 3 * static_cast<int>(t.tris.size());
    adj.assign(ncorner, {});
    for (int a = 0; a < t.arc_count(); ++a) {
      const auto& occ = slots[a];
      if (occ.size() == 2) {
        link(after(occ[0]), before(occ[1]));
        link(before(occ[0]), after(occ[1]));
      } else if (occ.size() == 1 && t.arcs[a].kind == ArcKind::Pending) {
        // folded pending arc: the two sides meet around the orbifold point
        link(before(occ[0]), after(occ[0]));
      }
    }
  }

  static int corner_id(ArcSlot s, int delta) { return 3 * s.tri + ((s.pos + delta + 3) % 3); }
  int after(ArcSlot s) const { return corner_id(s, 0); }
  int before(ArcSlot s) const { return corner_id(s, -1); }
  void link(int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  // free sides: boundary arcs and exposed arcs, one per such arc
  std::vector<ArcSlot> free_sides() const {
    std::vector<ArcSlot> out;
    for (int a = 0; a < t.arc_count(); ++a)
      if (slots[a].size() == 1 && t.arcs[a].kind != ArcKind::Pending) out.push_back(slots[a][0]);
    return out;
  }
};

} // namespace detail

inline OrbifoldSignature signature(const Triangulation& t) {
  validate(t);
  detail::corner_complex cx(t);
  // marked point classes = components of the corner graph
  std::vector<int> comp(cx.ncorner, -1);
  int ncomp = 0;
  for (int c = 0; c < cx.ncorner; ++c) {
    if (comp[c] != -1) continue;
    std::vector<int> stack{c};
    comp[c] = ncomp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : cx.adj[x])
        if (comp[y] == -1) {
          comp[y] = ncomp;
          stack.push_back(y);
        }
    }
    ++ncomp;
  }
  // a component is interior iff every corner in it has both sides linked
  std::vector<int> deg(cx.ncorner, 0);
  for (int c = 0; c < cx.ncorner; ++c) deg[c] = static_cast<int>(cx.adj[c].size());
  std::vector<char> interior(ncomp, 1);
  for (int c = 0; c < cx.ncorner; ++c)
    if (deg[c] < 2) interior[comp[c]] = 0;
  int punctures = 0;
  for (int k = 0; k < ncomp; ++k)
    if (interior[k]) ++punctures;
  // boundary circles: each free side is a boundary segment; the corner chain
  // at its head leads to the next segment of the same circle
  auto sides = cx.free_sides();
  std::map<int, int> entry; // before-corner -> side index
  for (size_t i = 0; i < sides.size(); ++i) entry[cx.before(sides[i])] = static_cast<int>(i);
  auto chain_other_end = [&](int corner) -> int {
    int prev = -1, cur = corner;
    for (;;) {
      int nxt = -1;
      for (int y : cx.adj[cur])
        if (y != prev) {
          nxt = y;
          break;
        }
      if (nxt == -1) return cur;
      prev = cur;
      cur = nxt;
    }
  };
  std::vector<char> used(sides.size(), 0);
  std::vector<int> circle_marks;
  for (size_t s0 = 0; s0 < sides.size(); ++s0) {
    if (used[s0]) continue;
    int marks = 0;
    size_t s = s0;
    do {
      used[s] = 1;
      int other = chain_other_end(cx.after(sides[s]));
      ++marks; // one marked point per chain traversed
      auto it = entry.find(other);
      if (it == entry.end()) throw non_orientable_gluing("boundary walk left the complex");
      s = static_cast<size_t>(it->second);
    } while (s != s0);
    circle_marks.push_back(marks);
  }
  std::sort(circle_marks.rbegin(), circle_marks.rend());
  OrbifoldSignature sig;
  sig.boundary = circle_marks;
  sig.punctures = punctures;
  sig.orbifold_points = t.point_weights;
  std::sort(sig.orbifold_points.begin(), sig.orbifold_points.end(),
            [](PointWeight a, PointWeight b) { return static_cast<int>(a) < static_cast<int>(b); });
  int v = ncomp + static_cast<int>(t.point_weights.size());
  int e = t.arc_count();
  int f = static_cast<int>(t.tris.size());
  int chi = v - e + f;
  int circles = static_cast<int>(circle_marks.size());
  int twice_genus = 2 - circles - chi;
  if (twice_genus < 0 || twice_genus % 2 != 0)
    throw non_orientable_gluing("inconsistent Euler characteristic");
  sig.genus = twice_genus / 2;
  return sig;
}

// ---- elementary pieces and gluing ------------------------------------------

// Triangulated piece of one block; arcs 0..k-1 follow the block's vertex
// order, further arcs are boundary. Outlet arcs are left exposed.
inline Triangulation block_piece(BlockKind k) {
  using A = ArcKind;
  Triangulation t;
  auto arc = [&](A kind, int pt = -1) { t.arcs.push_back({kind, pt}); };
  switch (k) {
    case BlockKind::Vertex:
      arc(A::Ordinary);
      arc(A::Boundary);
      arc(A::Boundary);
      t.tris = {{0, 1, 2}};
      break;
    case BlockKind::I:
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Boundary);
      t.tris = {{0, 1, 2}};
      break;
    case BlockKind::II:
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Ordinary);
      t.tris = {{0, 1, 2}};
      break;
    case BlockKind::IIIa:
      arc(A::Ordinary); // u
      arc(A::Ordinary); // loop
      arc(A::Ordinary); // radius
      arc(A::Boundary);
      t.tris = {{1, 0, 3}, {2, 1, 2}};
      break;
    case BlockKind::IIIb:
      arc(A::Ordinary); // loop
      arc(A::Ordinary); // radius
      arc(A::Ordinary); // u
      arc(A::Boundary);
      t.tris = {{2, 0, 3}, {1, 0, 1}};
      break;
    case BlockKind::IV:
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Ordinary); // loop
      arc(A::Ordinary); // radius
      t.tris = {{0, 1, 2}, {3, 2, 3}};
      break;
    case BlockKind::V:
      arc(A::Ordinary); // u
      arc(A::Ordinary); // loop 1
      arc(A::Ordinary); // loop 2
      arc(A::Ordinary); // radius 2
      arc(A::Ordinary); // radius 1
      t.tris = {{0, 1, 2}, {4, 1, 4}, {3, 2, 3}};
      break;
    case BlockKind::TIIIa:
      arc(A::Ordinary);     // u
      arc(A::Pending, 0);   // pending, heavier than the outlet
      arc(A::Boundary);
      t.tris = {{1, 0, 2}};
      t.point_weights = {PointWeight::Two};
      break;
    case BlockKind::TIIIb:
      arc(A::Pending, 0);
      arc(A::Ordinary);
      arc(A::Boundary);
      t.tris = {{1, 0, 2}};
      t.point_weights = {PointWeight::Two};
      break;
    case BlockKind::TIV:
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Pending, 0);
      t.tris = {{0, 1, 2}};
      t.point_weights = {PointWeight::Two};
      break;
    case BlockKind::TV1:
      arc(A::Ordinary);   // u
      arc(A::Ordinary);   // loop
      arc(A::Pending, 0); // pending
      arc(A::Ordinary);   // radius
      t.tris = {{0, 1, 2}, {3, 1, 3}};
      t.point_weights = {PointWeight::Two};
      break;
    case BlockKind::TV2:
      arc(A::Pending, 0);
      arc(A::Ordinary); // loop
      arc(A::Ordinary); // u
      arc(A::Ordinary); // radius
      t.tris = {{2, 0, 1}, {3, 1, 3}};
      t.point_weights = {PointWeight::Two};
      break;
    case BlockKind::TV12:
      arc(A::Pending, 0);
      arc(A::Ordinary);
      arc(A::Pending, 1);
      t.tris = {{0, 1, 2}};
      t.point_weights = {PointWeight::Two, PointWeight::Two};
      break;
    case BlockKind::TVI:
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Ordinary);
      arc(A::Pending, 0); // doubled-arc shadow
      arc(A::Boundary);
      arc(A::Boundary);
      t.tris = {{0, 1, 4}, {2, 3, 4}, {5, 0, 3}, {6, 2, 1}};
      t.point_weights = {PointWeight::Two};
      break;
  }
  return t;
}

// Double cover branched at the orbifold points of the given pending arcs.
// Each triangle lifts to one copy per sheet; a branch pending arc has a
// single lift shared by both sheets and becomes an ordinary arc. The deck
// transformation swaps the sheets, so the result is a Galois covering with
// simple ramification exactly at the chosen points.
struct CoverResult {
  Triangulation cover;
  std::vector<std::vector<int>> lifts; // arc of the base -> arcs of the cover
};

inline CoverResult branched_double_cover(const Triangulation& t, const std::vector<int>& branch_arcs) {
  validate(t);
  auto slots = arc_slots(t);
  std::vector<char> is_branch(t.arc_count(), 0);
  for (int a : branch_arcs) {
    if (a < 0 || a >= t.arc_count() || t.arcs[a].kind != ArcKind::Pending)
      throw domain_error("branch locus must consist of pending arcs");
    if (slots[a].size() != 1) throw domain_error("cannot branch at a doubled pending arc");
    is_branch[a] = 1;
  }
  CoverResult r;
  r.lifts.assign(t.arc_count(), {});
  std::vector<std::array<int, 2>> copy(t.arc_count(), {-1, -1});
  auto target = [&](int a, int sheet) {
    if (is_branch[a]) {
      if (copy[a][0] == -1) {
        copy[a][0] = copy[a][1] = r.cover.arc_count();
        r.cover.arcs.push_back({ArcKind::Ordinary, -1});
        r.lifts[a].push_back(copy[a][0]);
      }
      return copy[a][0];
    }
    if (copy[a][sheet] == -1) {
      copy[a][sheet] = r.cover.arc_count();
      Triangulation::Arc arc = t.arcs[a];
      if (arc.kind == ArcKind::Pending) {
        int q = static_cast<int>(r.cover.point_weights.size());
        r.cover.point_weights.push_back(t.point_weights[arc.orb_point]);
        arc.orb_point = q;
      }
      r.cover.arcs.push_back(arc);
      r.lifts[a].push_back(copy[a][sheet]);
    }
    return copy[a][sheet];
  };
  for (int sheet = 0; sheet < 2; ++sheet)
    for (auto& tri : t.tris)
      r.cover.tris.push_back({target(tri[0], sheet), target(tri[1], sheet), target(tri[2], sheet)});
  r.cover.regular_weight = t.regular_weight;
  validate(r.cover);
  return r;
}

// Caps an exposed ordinary arc with a triangle carrying two boundary sides.
inline Triangulation complete_with_caps(const Triangulation& t) {
  Triangulation r = t;
  auto slots = arc_slots(t);
  for (int a = 0; a < t.arc_count(); ++a) {
    if (t.arcs[a].kind != ArcKind::Ordinary || slots[a].size() != 1) continue;
    int b1 = r.arc_count();
    r.arcs.push_back({ArcKind::Boundary, -1});
    r.arcs.push_back({ArcKind::Boundary, -1});
    r.tris.push_back({a, b1, b1 + 1});
  }
  return r;
}

// Builds the glued triangulation of a block decomposition. Arc labels of the
// block vertices equal the diagram vertex labels, so the signed adjacency
// matrix is indexed like the assembled diagram. Weights, when given, choose
// the orbifold point weights.
inline Triangulation orbifold_of_decomposition(const BlockDecomposition& dec, int n,
                                               const WeightedDiagram* dw = nullptr) {
  Triangulation out;
  Int w = 1;
  if (dw) {
    // regular-part weight = weight of any non-pending vertex
    std::vector<char> pending(n, 0);
    for (auto& blk : dec.blocks) {
      const BlockTemplate& tpl = block_template(blk.kind);
      for (int a = 0; a < tpl.size(); ++a)
        if (tpl.roles[a] == VertexRole::Pending) pending[blk.verts[a]] = 1;
    }
    bool found = false;
    for (int v = 0; v < n; ++v)
      if (!pending[v]) {
        w = dw->vertex_weights[v];
        found = true;
        break;
      }
    if (!found) w = 1;
    if (w != 1 && w != 2) throw not_realizable("regular-part weight must be 1 or 2");
  }
  out.regular_weight = w;
  out.arcs.assign(n, {ArcKind::Ordinary, -1});
  std::vector<int> seen(n, 0);
  for (auto& blk : dec.blocks) {
    Triangulation piece = block_piece(blk.kind);
    const BlockTemplate& tpl = block_template(blk.kind);
    std::vector<int> map(piece.arc_count(), -1);
    for (int a = 0; a < tpl.size(); ++a) {
      int v = blk.verts[a];
      map[a] = v;
      if (tpl.roles[a] == VertexRole::Outlet) {
        if (++seen[v] > 2) throw non_orientable_gluing("arc glued more than twice");
      } else if (seen[v]++) {
        throw non_orientable_gluing("dead-end arc glued twice");
      }
      if (piece.arcs[a].kind == ArcKind::Pending) {
        int q = static_cast<int>(out.point_weights.size());
        PointWeight pw = PointWeight::Two;
        if (dw) {
          const Int& dv = dw->vertex_weights[v];
          if (dv == 2 * w)
            pw = PointWeight::Two;
          else if (w == 2 && dv == 1)
            pw = PointWeight::Half;
          else
            throw not_realizable("vertex weight incompatible with a pending arc");
        }
        out.point_weights.push_back(pw);
        out.arcs[v] = {ArcKind::Pending, q};
      }
    }
    for (int a = tpl.size(); a < piece.arc_count(); ++a) {
      map[a] = out.arc_count();
      out.arcs.push_back({ArcKind::Boundary, -1});
    }
    for (auto& tri : piece.tris) out.tris.push_back({map[tri[0]], map[tri[1]], map[tri[2]]});
  }
  validate(out);
  return out;
}

} // namespace mutorb
