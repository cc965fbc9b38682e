#pragma once

#include "mutorb/orbifold.hpp"
#include "mutorb/seed.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutorb {

// ---- parametric triangulations for the growth families ----------------------

namespace builders {

// Triangulated band between an outer cycle of existing arcs and a fresh
// boundary circle with `inner_marks` marked points. Used for the annulus and
// for cutting a hole out of a triangle.
inline void add_band(Triangulation& t, const std::vector<int>& outer, int inner_marks) {
  int a = static_cast<int>(outer.size());
  int m = inner_marks;
  if (a < 1 || m < 1) throw domain_error("band needs arcs on both circles");
  std::vector<int> inner_bd(m);
  for (int j = 0; j < m; ++j) {
    inner_bd[j] = t.arc_count();
    t.arcs.push_back({ArcKind::Boundary, -1});
  }
  auto fresh = [&]() {
    t.arcs.push_back({ArcKind::Ordinary, -1});
    return t.arc_count() - 1;
  };
  int c0 = fresh(); // first crossing arc
  std::vector<int> f{c0};
  for (int j = 2; j <= m; ++j) f.push_back(fresh());
  int c1 = fresh(); // second crossing arc
  f.push_back(c1);
  std::vector<int> g{c0};
  for (int i = 2; i <= a; ++i) g.push_back(fresh());
  g.push_back(c1);
  for (int j = 0; j < m; ++j) t.tris.push_back({f[j], inner_bd[j], f[j + 1]});
  for (int i = 0; i < a; ++i) t.tris.push_back({g[i], outer[i], g[i + 1]});
}

// Disk with c boundary marked points, fan triangulation.
inline Triangulation disk(int c) {
  if (c < 3) throw domain_error("disk needs at least three marked points");
  Triangulation t;
  std::vector<int> bd(c);
  for (int i = 0; i < c; ++i) {
    bd[i] = t.arc_count();
    t.arcs.push_back({ArcKind::Boundary, -1});
  }
  std::vector<int> diag;
  for (int i = 0; i < c - 3; ++i) {
    t.arcs.push_back({ArcKind::Ordinary, -1});
    diag.push_back(t.arc_count() - 1);
  }
  // fan from vertex 0: triangle i uses boundary side i+1
  for (int i = 0; i < c - 2; ++i) {
    int left = i == 0 ? bd[0] : diag[i - 1];
    int right = i == c - 3 ? bd[c - 1] : diag[i];
    t.tris.push_back({left, bd[i + 1], right});
  }
  return t;
}

inline Triangulation annulus(int n1, int n2) {
  Triangulation t;
  std::vector<int> outer(n1);
  for (int i = 0; i < n1; ++i) {
    outer[i] = t.arc_count();
    t.arcs.push_back({ArcKind::Boundary, -1});
  }
  add_band(t, outer, n2);
  return t;
}

// Replaces triangle `ti` by a fan around a new puncture.
inline void puncture_triangle(Triangulation& t, int ti) {
  auto tri = t.tris[ti];
  if (is_self_folded(tri)) throw domain_error("cannot puncture a self-folded triangle");
  auto fresh = [&]() {
    t.arcs.push_back({ArcKind::Ordinary, -1});
    return t.arc_count() - 1;
  };
  int u = fresh(), v = fresh(), w = fresh();
  t.tris[ti] = {tri[0], v, u};
  t.tris.push_back({tri[1], w, v});
  t.tris.push_back({tri[2], u, w});
}

// Replaces triangle `ti` by two triangles around a new orbifold point.
inline void orbifold_triangle(Triangulation& t, int ti, PointWeight pw) {
  auto tri = t.tris[ti];
  if (is_self_folded(tri)) throw domain_error("cannot insert into a self-folded triangle");
  int q = static_cast<int>(t.point_weights.size());
  t.point_weights.push_back(pw);
  t.arcs.push_back({ArcKind::Pending, q});
  int gamma = t.arc_count() - 1;
  t.arcs.push_back({ArcKind::Ordinary, -1});
  int e = t.arc_count() - 1;
  t.tris[ti] = {tri[0], e, gamma};
  t.tris.push_back({e, tri[1], tri[2]});
  if (pw == PointWeight::Half) t.regular_weight = 2;
}

// Cuts a hole with `marks` marked points out of triangle `ti`.
inline void hole_in_triangle(Triangulation& t, int ti, int marks) {
  auto tri = t.tris[ti];
  if (is_self_folded(tri)) throw domain_error("cannot cut a self-folded triangle");
  t.tris.erase(t.tris.begin() + ti);
  add_band(t, {tri[0], tri[1], tri[2]}, marks);
}

inline Triangulation punctured_annulus(int n1, int n2) {
  Triangulation t = annulus(n1, n2);
  puncture_triangle(t, 0);
  return t;
}

inline Triangulation orbifold_annulus(int n1, int n2, PointWeight pw = PointWeight::Two) {
  Triangulation t = annulus(n1, n2);
  orbifold_triangle(t, 0, pw);
  return t;
}

inline Triangulation pants(int n1, int n2, int n3) {
  Triangulation t = annulus(n1, n2);
  hole_in_triangle(t, 0, n3);
  return t;
}

// Digon with two orbifold points: pendings from both boundary marked points
// separated by an ordinary arc.
inline Triangulation digon_two_orbifolds(PointWeight w1 = PointWeight::Two,
                                         PointWeight w2 = PointWeight::Two) {
  Triangulation t;
  t.arcs = {{ArcKind::Pending, 0},
            {ArcKind::Ordinary, -1},
            {ArcKind::Pending, 1},
            {ArcKind::Boundary, -1},
            {ArcKind::Boundary, -1}};
  t.point_weights = {w1, w2};
  t.tris = {{3, 1, 0}, {1, 4, 2}};
  if (w1 == PointWeight::Half || w2 == PointWeight::Half) t.regular_weight = 2;
  return t;
}

// Replaces a weight-2 orbifold point by a puncture: the fold triangle of its
// pending arc gains a self-folded companion.
inline void orbifold_point_to_puncture(Triangulation& t, int point) {
  int a = -1;
  for (int i = 0; i < t.arc_count(); ++i)
    if (t.arcs[i].kind == ArcKind::Pending && t.arcs[i].orb_point == point) a = i;
  if (a == -1) throw domain_error("no pending arc at the point");
  auto slots = arc_slots(t);
  if (slots[a].size() != 1) throw domain_error("cannot convert a doubled pending arc");
  t.arcs[a] = {ArcKind::Ordinary, -1}; // becomes the enclosing loop
  int radius = t.arc_count();
  t.arcs.push_back({ArcKind::Ordinary, -1});
  t.tris.push_back({radius, a, radius});
  t.point_weights.erase(t.point_weights.begin() + point);
  for (auto& arc : t.arcs)
    if (arc.kind == ArcKind::Pending && arc.orb_point > point) --arc.orb_point;
}

inline Triangulation punctured_disk(int c) {
  Triangulation t = disk(c);
  puncture_triangle(t, 0);
  return t;
}

inline Triangulation orbifold_disk(int c, PointWeight pw = PointWeight::Two) {
  Triangulation t = disk(c);
  orbifold_triangle(t, 0, pw);
  return t;
}

inline Triangulation twice_punctured_disk(int c) {
  if (c == 2) {
    Triangulation t = digon_two_orbifolds();
    orbifold_point_to_puncture(t, 1);
    orbifold_point_to_puncture(t, 0);
    return t;
  }
  Triangulation t = disk(c);
  puncture_triangle(t, 0);
  puncture_triangle(t, static_cast<int>(t.tris.size()) - 1);
  return t;
}

inline Triangulation punctured_orbifold_disk(int c) {
  if (c == 2) {
    Triangulation t = digon_two_orbifolds();
    orbifold_point_to_puncture(t, 1);
    return t;
  }
  Triangulation t = disk(c);
  puncture_triangle(t, 0);
  orbifold_triangle(t, static_cast<int>(t.tris.size()) - 1, PointWeight::Two);
  return t;
}

inline Triangulation twice_orbifold_disk(int c) {
  if (c == 2) return digon_two_orbifolds();
  Triangulation t = disk(c);
  orbifold_triangle(t, 0, PointWeight::Two);
  orbifold_triangle(t, static_cast<int>(t.tris.size()) - 1, PointWeight::Two);
  return t;
}

// Torus with one boundary component carrying two marked points: a ring of
// two triangle pieces and two strip pieces.
inline Triangulation bordered_torus_two_marks() {
  BlockDecomposition dec;
  dec.blocks = {
      {BlockKind::II, {0, 1, 2}},
      {BlockKind::II, {0, 1, 3}},
      {BlockKind::I, {2, 4}},
      {BlockKind::I, {4, 3}},
  };
  return orbifold_of_decomposition(dec, 5);
}

} // namespace builders

// ---- mutation class enumeration ---------------------------------------------

struct MutationClass {
  std::vector<std::string> keys; // canonical keys, BFS order
  bool exceeded = false;
};

inline MutationClass enumerate_mutation_class(const Diagram& d0, long cap = 100000) {
  MutationClass cls;
  std::set<std::string> seen;
  std::deque<Diagram> queue;
  std::string k0 = canonical_form(d0);
  seen.insert(k0);
  cls.keys.push_back(k0);
  queue.push_back(d0);
  while (!queue.empty()) {
    Diagram d = queue.front();
    queue.pop_front();
    for (int k = 0; k < d.size(); ++k) {
      Diagram m = mutate_diagram(d, k);
      std::string key = canonical_form(m);
      if (seen.count(key)) continue;
      if (static_cast<long>(cls.keys.size()) >= cap) {
        cls.exceeded = true;
        return cls;
      }
      seen.insert(key);
      cls.keys.push_back(key);
      queue.push_back(std::move(m));
    }
  }
  return cls;
}

inline MutationClass enumerate_mutation_class(const WeightedDiagram& d0, long cap = 100000) {
  MutationClass cls;
  std::set<std::string> seen;
  std::deque<WeightedDiagram> queue;
  std::string k0 = canonical_form(d0);
  seen.insert(k0);
  cls.keys.push_back(k0);
  queue.push_back(d0);
  while (!queue.empty()) {
    WeightedDiagram d = queue.front();
    queue.pop_front();
    for (int k = 0; k < d.diagram.size(); ++k) {
      WeightedDiagram m = mutate_diagram(d, k);
      std::string key = canonical_form(m);
      if (seen.count(key)) continue;
      if (static_cast<long>(cls.keys.size()) >= cap) {
        cls.exceeded = true;
        return cls;
      }
      seen.insert(key);
      cls.keys.push_back(key);
      queue.push_back(std::move(m));
    }
  }
  return cls;
}

// True iff the class closes under the cap; diagrams of order at least three
// that ever grow an edge weight beyond 4 have infinite classes.
inline bool is_mutation_finite(const Diagram& d0, long cap = 100000) {
  if (d0.size() <= 2) return true;
  std::set<std::string> seen{canonical_form(d0)};
  std::deque<Diagram> queue{d0};
  auto heavy = [](const Diagram& d) {
    for (auto& [i, j, w] : d.edges())
      if (w > 4) return true;
    return false;
  };
  if (heavy(d0)) return false;
  while (!queue.empty()) {
    Diagram d = queue.front();
    queue.pop_front();
    for (int k = 0; k < d.size(); ++k) {
      Diagram m = mutate_diagram(d, k);
      if (heavy(m)) return false;
      std::string key = canonical_form(m);
      if (seen.count(key)) continue;
      if (static_cast<long>(seen.size()) >= static_cast<size_t>(cap))
        throw class_enumeration_exceeded("mutation class enumeration exceeded the cap");
      seen.insert(key);
      queue.push_back(std::move(m));
    }
  }
  return true;
}

namespace detail {

// Seeds are identified with principal extended matrices up to simultaneous
// permutation of the cluster directions; the coefficient rows stay put.
inline std::vector<Int> seed_state_key(const ExtendedMatrix& e) {
  int n = e.cols;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<Int> best, cand;
  cand.resize(static_cast<size_t>(2 * n) * n);
  do {
    size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cand[idx++] = e.at(perm[i], perm[j]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cand[idx++] = e.at(n + i, perm[j]);
    if (best.empty() || cand < best) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

} // namespace detail

// Cumulative counts of distinct seeds within the given number of mutations,
// tracked through principal coefficients.
inline std::vector<long> ball_sizes(const ExchangeMatrix& b, int radius) {
  std::vector<long> counts;
  std::set<std::vector<Int>> seen;
  std::vector<ExtendedMatrix> frontier{principal_extended(b)};
  seen.insert(detail::seed_state_key(frontier[0]));
  counts.push_back(1);
  for (int r = 0; r < radius; ++r) {
    std::vector<ExtendedMatrix> next;
    for (auto& m : frontier) {
      for (int k = 0; k < b.size(); ++k) {
        ExtendedMatrix t = m.mutated(k);
        if (seen.insert(detail::seed_state_key(t)).second) next.push_back(std::move(t));
      }
    }
    counts.push_back(counts.back() + static_cast<long>(next.size()));
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  while (static_cast<int>(counts.size()) <= radius) counts.push_back(counts.back());
  return counts;
}

// ---- growth classification ---------------------------------------------------

enum class Growth { Finite, Linear, Quadratic, Cubic, Exponential };

inline const char* growth_name(Growth g) {
  switch (g) {
    case Growth::Finite: return "finite";
    case Growth::Linear: return "linear";
    case Growth::Quadratic: return "quadratic";
    case Growth::Cubic: return "cubic";
    case Growth::Exponential: return "exponential";
  }
  return "?";
}

struct GrowthReport {
  Growth growth = Growth::Exponential;
  bool s_decomposable = true;
  long class_size = 0;
  bool class_exceeded = false;
};

namespace detail {

inline std::optional<std::string> template_key(const Triangulation& t) {
  try {
    return canonical_form(diagram_of_triangulation(t));
  } catch (const domain_error&) {
    return std::nullopt;
  }
}

// Canonical keys of one triangulated representative per family instance of
// the given rank.
inline std::vector<std::pair<Growth, std::string>> growth_templates(int rank) {
  namespace bb = builders;
  std::vector<std::pair<Growth, std::string>> out;
  auto push = [&](Growth g, const Triangulation& t) {
    if (auto k = template_key(t)) out.push_back({g, *k});
  };
  // finite: polygon, once-punctured polygon, polygon with one orbifold point
  if (rank + 3 >= 3) push(Growth::Finite, bb::disk(rank + 3));
  if (rank >= 3) push(Growth::Finite, bb::punctured_disk(rank));
  if (rank + 1 >= 3) push(Growth::Finite, bb::orbifold_disk(rank + 1));
  // linear: annulus, and the disk with two extra features
  for (int n1 = 1; n1 <= rank / 2; ++n1)
    if (rank - n1 >= 1) push(Growth::Linear, bb::annulus(n1, rank - n1));
  if (rank - 3 == 2 || rank - 3 >= 3) push(Growth::Linear, bb::twice_punctured_disk(rank - 3));
  if (rank - 2 == 2 || rank - 2 >= 3) push(Growth::Linear, bb::punctured_orbifold_disk(rank - 2));
  if (rank - 1 == 2 || rank - 1 >= 3) push(Growth::Linear, bb::twice_orbifold_disk(rank - 1));
  // quadratic: once-punctured annulus and annulus with an orbifold point
  for (int n1 = 1; n1 + 1 <= rank - 3; ++n1) {
    int n2 = rank - 3 - n1;
    if (n2 >= n1) push(Growth::Quadratic, bb::punctured_annulus(n1, n2));
  }
  for (int n1 = 1; n1 + 1 <= rank - 2; ++n1) {
    int n2 = rank - 2 - n1;
    if (n2 >= n1) push(Growth::Quadratic, bb::orbifold_annulus(n1, n2));
  }
  // cubic: pair of pants
  for (int n1 = 1; n1 <= rank - 3 - 2; ++n1)
    for (int n2 = n1; n1 + n2 <= rank - 3 - 1; ++n2) {
      int n3 = rank - 3 - n1 - n2;
      if (n3 >= n2) push(Growth::Cubic, bb::pants(n1, n2, n3));
    }
  return out;
}

} // namespace detail

inline GrowthReport classify_growth(const Diagram& d, long cap = 100000) {
  GrowthReport rep;
  rep.s_decomposable = find_s_decomposition(d).has_value();
  if (!rep.s_decomposable) {
    rep.growth = Growth::Exponential;
    return rep;
  }
  int n = d.size();
  if (n == 1) {
    rep.growth = Growth::Finite;
    rep.class_size = 1;
    return rep;
  }
  if (n == 2) {
    Int w = 0;
    for (auto& [i, j, ww] : d.edges()) w = ww;
    rep.class_size = 1;
    rep.growth = w <= 3 ? Growth::Finite : (w == 4 ? Growth::Linear : Growth::Exponential);
    return rep;
  }
  MutationClass cls = enumerate_mutation_class(d, cap);
  rep.class_size = static_cast<long>(cls.keys.size());
  rep.class_exceeded = cls.exceeded;
  if (cls.exceeded) throw class_enumeration_exceeded("growth classification exceeded the class cap");
  std::set<std::string> keys(cls.keys.begin(), cls.keys.end());
  Growth best = Growth::Exponential;
  for (auto& [g, key] : detail::growth_templates(n)) {
    if (!keys.count(key)) continue;
    if (static_cast<int>(g) < static_cast<int>(best)) best = g;
  }
  rep.growth = best;
  return rep;
}

} // namespace mutorb
