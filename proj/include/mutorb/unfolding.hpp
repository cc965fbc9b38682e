#pragma once

#include "mutorb/orbifold.hpp"
#include "mutorb/seed.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace mutorb {

// Skew-symmetric candidate C over index sets E_1..E_n tracking B under
// composite mutations.
struct UnfoldingCandidate {
  ExchangeMatrix b;
  ExchangeMatrix c;
  std::vector<std::vector<int>> partition; // E_i as 0-based index sets
};

inline void check_partition_shape(const UnfoldingCandidate& cand) {
  int n = cand.b.size();
  int m = cand.c.size();
  if (static_cast<int>(cand.partition.size()) != n)
    throw shape_mismatch("partition size does not match the folded matrix");
  std::vector<char> hit(m, 0);
  for (auto& e : cand.partition)
    for (int i : e) {
      if (i < 0 || i >= m || hit[i]) throw shape_mismatch("partition does not tile the index set");
      hit[i] = 1;
    }
  for (char h : hit)
    if (!h) throw shape_mismatch("partition does not cover the index set");
}

// Column sums of every E_i x E_j block must equal b_ij, and blocks with
// b_ij >= 0 must be entrywise nonnegative.
inline bool check_conditions(const ExchangeMatrix& b, const ExchangeMatrix& c,
                             const std::vector<std::vector<int>>& partition) {
  UnfoldingCandidate cand{b, c, partition};
  check_partition_shape(cand);
  int n = b.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int jj : partition[j]) {
        Int colsum = 0;
        for (int ii : partition[i]) {
          colsum += c.at(ii, jj);
          if (b.at(i, j) >= 0 && c.at(ii, jj) < 0) return false;
        }
        if (colsum != b.at(i, j)) return false;
      }
    }
  return true;
}

// Product of the single mutations over E_i; they must pairwise commute,
// which holds exactly when E_i spans no edge of C.
inline ExchangeMatrix composite_mutate(const ExchangeMatrix& c,
                                       const std::vector<std::vector<int>>& partition, int i) {
  if (i < 0 || i >= static_cast<int>(partition.size()))
    throw std::out_of_range("composite mutation index out of range");
  for (int a : partition[i])
    for (int b : partition[i])
      if (c.at(a, b) != 0)
        throw non_commuting_block("index set " + std::to_string(i + 1) + " spans an edge");
  ExchangeMatrix r = c;
  for (int a : partition[i]) r = r.mutated(a);
  return r;
}

struct UnfoldingVerdict {
  bool verified = true;
  long states = 0;
  std::vector<int> refutation; // composite mutation sequence, 0-based
};

// Bounded check of the unfolding conditions: exhaustive over all composite
// sequences up to `depth` (deduplicated on the pair of matrices), then a few
// longer random samples. This does not decide the universally quantified
// definition; refutations in practice appear shallow.
inline UnfoldingVerdict verify_unfolding(const UnfoldingCandidate& cand, int depth = 6,
                                         int samples = 200, int sample_length = 20) {
  check_partition_shape(cand);
  if (!cand.c.is_skew_symmetric()) {
    UnfoldingVerdict v;
    v.verified = false;
    return v;
  }
  UnfoldingVerdict verdict;
  int n = cand.b.size();
  auto violates = [&](const ExchangeMatrix& b, const ExchangeMatrix& c) {
    return !check_conditions(b, c, cand.partition);
  };
  if (violates(cand.b, cand.c)) {
    verdict.verified = false;
    return verdict;
  }
  std::set<std::pair<ExchangeMatrix, ExchangeMatrix>> seen;
  std::deque<std::tuple<ExchangeMatrix, ExchangeMatrix, int, std::vector<int>>> queue;
  seen.insert({cand.b, cand.c});
  queue.push_back({cand.b, cand.c, 0, {}});
  while (!queue.empty()) {
    auto [b, c, d, path] = queue.front();
    queue.pop_front();
    ++verdict.states;
    if (d >= depth) continue;
    for (int k = 0; k < n; ++k) {
      ExchangeMatrix b2 = b.mutated(k);
      ExchangeMatrix c2 = composite_mutate(c, cand.partition, k);
      auto p = path;
      p.push_back(k);
      if (violates(b2, c2)) {
        verdict.verified = false;
        verdict.refutation = p;
        return verdict;
      }
      if (seen.insert({b2, c2}).second) queue.push_back({b2, c2, d + 1, std::move(p)});
    }
  }
  std::mt19937 rng(20240915);
  for (int s = 0; s < samples; ++s) {
    ExchangeMatrix b = cand.b, c = cand.c;
    std::vector<int> path;
    for (int step = 0; step < sample_length; ++step) {
      int k = static_cast<int>(rng() % n);
      b = b.mutated(k);
      c = composite_mutate(c, cand.partition, k);
      path.push_back(k);
      if (violates(b, c)) {
        verdict.verified = false;
        verdict.refutation = path;
        return verdict;
      }
    }
  }
  return verdict;
}

namespace detail {

// Doubles the chosen vertices, spreading each entry uniformly over the new
// rows; columns then sum back to the folded entries.
inline UnfoldingCandidate double_vertices(const ExchangeMatrix& b, const std::vector<char>& dbl) {
  int n = b.size();
  std::vector<std::vector<int>> part(n);
  int m = 0;
  for (int i = 0; i < n; ++i) {
    part[i].push_back(m++);
    if (dbl[i]) part[i].push_back(m++);
  }
  ExchangeMatrix c(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Int rows = static_cast<int>(part[i].size());
      if (b.at(i, j) % rows != 0)
        throw not_applicable("entry not divisible by the unfolded block height");
      for (int ii : part[i])
        for (int jj : part[j]) c.at(ii, jj) = b.at(i, j) / rows;
    }
  return UnfoldingCandidate{b, c, part};
}

struct RoleInfo {
  Int w = 1;                   // regular-part weight
  std::vector<char> pending;   // vertex is a pending arc of the decomposition
  BlockDecomposition dec;
};

inline RoleInfo roles_of(const ExchangeMatrix& b, const SearchLimits& lim = {}) {
  WeightedDiagram dw = diagram_of(b);
  auto dec = find_s_decomposition(dw, lim);
  if (!dec) throw not_s_decomposable("matrix is not s-decomposable");
  RoleInfo info;
  info.dec = *dec;
  info.pending.assign(b.size(), 0);
  for (auto& blk : info.dec.blocks) {
    const BlockTemplate& tpl = block_template(blk.kind);
    for (int a = 0; a < tpl.size(); ++a)
      if (tpl.roles[a] == VertexRole::Pending) info.pending[blk.verts[a]] = 1;
  }
  info.w = 1;
  for (int v = 0; v < b.size(); ++v)
    if (!info.pending[v]) {
      info.w = dw.vertex_weights[v];
      break;
    }
  return info;
}

} // namespace detail

// Replaces every weight-2w pending vertex by a pair; defined when the
// regular part has weight one.
inline UnfoldingCandidate local_unfolding(const ExchangeMatrix& b) {
  auto info = detail::roles_of(b);
  if (info.w != 1) throw not_applicable("local unfolding needs regular-part weight one");
  WeightedDiagram dw = diagram_of(b);
  std::vector<char> dbl(b.size(), 0);
  for (int v = 0; v < b.size(); ++v)
    if (info.pending[v]) {
      if (dw.vertex_weights[v] != 2)
        throw not_applicable("pending vertex of weight other than two");
      dbl[v] = 1;
    }
  return detail::double_vertices(b, dbl);
}

// Full pipeline: partial local unfolding at all weight-2 orbifold points,
// then a branched double cover (twice for an odd closed branch locus) at the
// remaining weight-1/2 points.
inline UnfoldingCandidate unfold(const ExchangeMatrix& b) {
  auto info = detail::roles_of(b);
  WeightedDiagram dw = diagram_of(b);
  // split pendings into heavy (weight 2w) and light (weight w/2) ones
  std::vector<char> heavy(b.size(), 0);
  bool any_light = false;
  for (int v = 0; v < b.size(); ++v) {
    if (!info.pending[v]) continue;
    if (dw.vertex_weights[v] == 2 * info.w)
      heavy[v] = 1;
    else
      any_light = true;
  }
  UnfoldingCandidate stage1 = detail::double_vertices(b, heavy);
  if (!any_light) return stage1;

  // realize the intermediate matrix as a triangulated orbifold
  ExchangeMatrix b1 = stage1.c.is_skew_symmetric() && !any_light ? stage1.c : stage1.c;
  WeightedDiagram dw1 = diagram_of(b1);
  auto dec1 = find_s_decomposition(dw1);
  if (!dec1) throw not_s_decomposable("intermediate matrix is not s-decomposable");
  Triangulation t = orbifold_of_decomposition(*dec1, b1.size(), &dw1);
  // matrix indices of the rebuilt orbifold coincide with b1's indices
  if (!(signed_adjacency(t) == b1))
    throw not_realizable("rebuilt orbifold does not reproduce the matrix");
  std::vector<int> branch;
  for (int a = 0; a < t.arc_count(); ++a)
    if (t.arcs[a].kind == ArcKind::Pending &&
        t.point_weights[t.arcs[a].orb_point] == PointWeight::Half)
      branch.push_back(a);
  OrbifoldSignature sig = signature(t);
  bool closed = sig.boundary.empty();
  std::vector<std::vector<int>> lifts1(b1.size());
  Triangulation cover;
  if (closed && branch.size() % 2 == 1) {
    if (branch.size() == 1) {
      if (sig.genus == 0)
        throw excluded_family("closed sphere with a single weight-1/2 orbifold point");
      throw not_applicable("closed positive-genus orbifold with a single weight-1/2 point");
    }
    // branch at all but one point, then at the two lifts of the last one
    std::vector<int> first(branch.begin(), std::prev(branch.end()));
    auto step1 = branched_double_cover(t, first);
    int last = branch.back();
    auto step2 = branched_double_cover(step1.cover, step1.lifts[last]);
    cover = step2.cover;
    for (int a = 0; a < b1.size(); ++a)
      for (int mid : step1.lifts[a])
        for (int fin : step2.lifts[mid]) lifts1[a].push_back(fin);
  } else {
    auto step = branched_double_cover(t, branch);
    cover = step.cover;
    for (int a = 0; a < b1.size(); ++a) lifts1[a] = step.lifts[a];
  }
  std::vector<int> index;
  Diagram cover_diagram = diagram_of_triangulation(cover, &index);
  (void)cover_diagram;
  ExchangeMatrix c = signed_adjacency(cover);
  UnfoldingCandidate cand;
  cand.b = b;
  cand.c = c;
  cand.partition.assign(b.size(), {});
  for (int v = 0; v < b.size(); ++v)
    for (int mid : stage1.partition[v])
      for (int fin : lifts1[mid]) cand.partition[v].push_back(index[fin]);
  for (auto& e : cand.partition) std::sort(e.begin(), e.end());
  if (!check_conditions(cand.b, cand.c, cand.partition))
    throw not_realizable("constructed cover fails the unfolding conditions");
  return cand;
}

// Diagram-level construction for a weighted diagram whose irregular blocks
// are already in normal form: pairs of weight-1/2 points in monogons, plus
// at most one digon block when the count is odd.
inline Diagram prime_unfolding_diagram(const WeightedDiagram& dw) {
  ExchangeMatrix b = matrices_for_weighted_diagram(dw);
  auto info = detail::roles_of(b);
  if (info.w != 2) throw wrong_normal_form("prime unfolding needs regular-part weight two");
  int digons = 0;
  for (auto& blk : info.dec.blocks) {
    bool has_light = false;
    const BlockTemplate& tpl = block_template(blk.kind);
    for (int a = 0; a < tpl.size(); ++a)
      if (tpl.roles[a] == VertexRole::Pending && dw.vertex_weights[blk.verts[a]] == 1)
        has_light = true;
    if (!has_light) continue;
    if (blk.kind == BlockKind::TV12) continue;
    if ((blk.kind == BlockKind::TIIIa || blk.kind == BlockKind::TIIIb) && digons == 0) {
      ++digons;
      continue;
    }
    throw wrong_normal_form("irregular blocks are not paired into monogons");
  }
  UnfoldingCandidate cand = unfold(b);
  return diagram_of_matrix(cand.c);
}

// Searches short mutation sequences for a representative in the normal form
// required by the diagram-level prime unfolding.
inline std::optional<std::pair<ExchangeMatrix, std::vector<int>>> normalize_for_prime(
    const ExchangeMatrix& b, long budget = 20000) {
  auto in_form = [&](const ExchangeMatrix& m) {
    try {
      prime_unfolding_diagram(diagram_of(m));
      return true;
    } catch (const domain_error&) {
      return false;
    }
  };
  std::set<ExchangeMatrix> seen{b};
  std::deque<std::pair<ExchangeMatrix, std::vector<int>>> queue{{b, {}}};
  long nodes = 0;
  while (!queue.empty()) {
    auto [m, path] = queue.front();
    queue.pop_front();
    if (++nodes > budget) return std::nullopt;
    if (in_form(m)) return std::make_pair(m, path);
    for (int k = 0; k < b.size(); ++k) {
      ExchangeMatrix t = m.mutated(k);
      if (seen.insert(t).second) {
        auto p = path;
        p.push_back(k);
        queue.push_back({t, std::move(p)});
      }
    }
  }
  return std::nullopt;
}

// Collapses cover variables onto base variables along the partition; used to
// compare cluster variables of a matrix with those of its unfolding.
inline LaurentPoly collapse_variables(const LaurentPoly& p,
                                      const std::vector<std::vector<int>>& partition, int nvars) {
  LaurentPoly out(nvars);
  for (auto& [e, c] : p.terms()) {
    std::vector<int> shrunk(nvars, 0);
    for (int i = 0; i < nvars; ++i)
      for (int j : partition[i]) shrunk[i] += e[j];
    out += LaurentPoly::monomial(nvars, shrunk, c);
  }
  return out;
}

} // namespace mutorb
