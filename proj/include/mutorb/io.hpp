#pragma once

#include "mutorb/growth.hpp"
#include "mutorb/orbifold.hpp"
#include "mutorb/seed.hpp"
#include "mutorb/unfolding.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace mutorb {

// JSON formats; nlohmann::json with std::map ordering keeps keys sorted, so
// serialization is byte-stable. All indices in files are 1-based. Integers
// beyond 64 bits are written as decimal strings.
using json = nlohmann::json;

namespace io {

inline json int_to_json(const Int& v) {
  static const Int lo = std::numeric_limits<long long>::min();
  static const Int hi = std::numeric_limits<long long>::max();
  if (v >= lo && v <= hi) return static_cast<long long>(v);
  return v.str();
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw domain_error("expected an integer or a decimal string");
}

inline json matrix_to_json(const ExchangeMatrix& b) {
  json rows = json::array();
  for (int i = 0; i < b.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < b.size(); ++j) row.push_back(int_to_json(b.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"b", std::move(rows)}, {"n", b.size()}};
}

inline ExchangeMatrix matrix_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("b")) throw domain_error("matrix file needs fields n and b");
  int n = j.at("n").get<int>();
  std::vector<std::vector<Int>> rows;
  for (auto& r : j.at("b")) {
    rows.push_back({});
    for (auto& x : r) rows.back().push_back(int_from_json(x));
  }
  if (static_cast<int>(rows.size()) != n) throw domain_error("matrix rows do not match n");
  return ExchangeMatrix::from_rows(std::move(rows));
}

inline json diagram_to_json(const Diagram& d, const std::vector<Int>* weights = nullptr) {
  json edges = json::array();
  for (auto& [f, t, w] : d.edges())
    edges.push_back(json::array({f + 1, t + 1, int_to_json(w)}));
  json out{{"edges", std::move(edges)}, {"n", d.size()}};
  if (weights) {
    json vw = json::array();
    for (auto& w : *weights) vw.push_back(int_to_json(w));
    out["vertex_weights"] = std::move(vw);
  }
  return out;
}

inline json diagram_to_json(const WeightedDiagram& dw) {
  return diagram_to_json(dw.diagram, &dw.vertex_weights);
}

struct DiagramFile {
  Diagram diagram;
  std::optional<std::vector<Int>> weights;

  WeightedDiagram weighted() const {
    if (!weights) throw domain_error("diagram file has no vertex weights");
    return WeightedDiagram{diagram, *weights};
  }
};

inline DiagramFile diagram_from_json(const json& j) {
  int n = j.at("n").get<int>();
  DiagramFile f;
  f.diagram = Diagram(n);
  for (auto& e : j.at("edges")) {
    int from = e.at(0).get<int>() - 1;
    int to = e.at(1).get<int>() - 1;
    if (from < 0 || from >= n || to < 0 || to >= n)
      throw domain_error("edge endpoint out of range");
    f.diagram.set_edge(from, to, int_from_json(e.at(2)));
  }
  if (j.contains("vertex_weights")) {
    f.weights = std::vector<Int>{};
    for (auto& w : j.at("vertex_weights")) f.weights->push_back(int_from_json(w));
    if (static_cast<int>(f.weights->size()) != n)
      throw domain_error("vertex weight count does not match n");
  }
  return f;
}

inline const char* arc_kind_name(ArcKind k) {
  switch (k) {
    case ArcKind::Ordinary: return "ordinary";
    case ArcKind::Pending: return "pending";
    case ArcKind::Boundary: return "boundary";
  }
  return "?";
}

inline json signature_to_json(const OrbifoldSignature& s) {
  json pts = json::array();
  for (auto w : s.orbifold_points) pts.push_back(w == PointWeight::Half ? "1/2" : "2");
  return json{{"boundary", s.boundary},
              {"genus", s.genus},
              {"orbifold_points", std::move(pts)},
              {"punctures", s.punctures}};
}

inline json triangulation_to_json(const Triangulation& t) {
  json arcs = json::array();
  for (int a = 0; a < t.arc_count(); ++a)
    arcs.push_back(json{{"id", a + 1}, {"kind", arc_kind_name(t.arcs[a].kind)}});
  json tris = json::array();
  for (auto& tri : t.tris) tris.push_back(json::array({tri[0] + 1, tri[1] + 1, tri[2] + 1}));
  json pending = json::object();
  for (int a = 0; a < t.arc_count(); ++a)
    if (t.arcs[a].kind == ArcKind::Pending)
      pending[std::to_string(a + 1)] = t.arcs[a].orb_point + 1;
  json pw = json::array();
  for (auto w : t.point_weights) pw.push_back(w == PointWeight::Half ? "1/2" : "2");
  return json{{"arcs", std::move(arcs)},
              {"pending_at", std::move(pending)},
              {"point_weights", std::move(pw)},
              {"regular_weight", int_to_json(t.regular_weight)},
              {"signature", signature_to_json(signature(t))},
              {"triangles", std::move(tris)}};
}

inline Triangulation triangulation_from_json(const json& j) {
  Triangulation t;
  for (auto& a : j.at("arcs")) {
    std::string kind = a.at("kind").get<std::string>();
    Triangulation::Arc arc;
    if (kind == "ordinary")
      arc.kind = ArcKind::Ordinary;
    else if (kind == "pending")
      arc.kind = ArcKind::Pending;
    else if (kind == "boundary")
      arc.kind = ArcKind::Boundary;
    else
      throw domain_error("unknown arc kind " + kind);
    t.arcs.push_back(arc);
  }
  for (auto& tri : j.at("triangles"))
    t.tris.push_back({tri.at(0).get<int>() - 1, tri.at(1).get<int>() - 1, tri.at(2).get<int>() - 1});
  int npts = 0;
  for (auto& [key, val] : j.at("pending_at").items()) {
    int arc = std::stoi(key) - 1;
    int pt = val.get<int>() - 1;
    if (arc < 0 || arc >= t.arc_count()) throw domain_error("pending arc id out of range");
    t.arcs[arc].orb_point = pt;
    npts = std::max(npts, pt + 1);
  }
  t.point_weights.assign(npts, PointWeight::Two);
  if (j.contains("point_weights")) {
    auto& pts = j.at("point_weights");
    if (static_cast<int>(pts.size()) != npts)
      throw domain_error("orbifold point count mismatch");
    for (int q = 0; q < npts; ++q)
      t.point_weights[q] = pts[q].get<std::string>() == "1/2" ? PointWeight::Half : PointWeight::Two;
  }
  if (j.contains("regular_weight")) t.regular_weight = int_from_json(j.at("regular_weight"));
  validate(t);
  return t;
}

inline json decomposition_to_json(const BlockDecomposition& dec, int n) {
  json blocks = json::array();
  for (auto& b : dec.blocks) {
    json verts = json::array();
    for (int v : b.verts) verts.push_back(v + 1);
    blocks.push_back(json{{"kind", block_kind_name(b.kind)}, {"vertices", std::move(verts)}});
  }
  json matching = json::array();
  for (auto& [a, b] : dec.matching)
    matching.push_back(json::array(
        {json::array({a.block + 1, a.vertex + 1}), json::array({b.block + 1, b.vertex + 1})}));
  return json{{"blocks", std::move(blocks)}, {"matching", std::move(matching)}, {"n", n}};
}

inline std::pair<BlockDecomposition, int> decomposition_from_json(const json& j) {
  BlockDecomposition dec;
  for (auto& b : j.at("blocks")) {
    auto kind = block_kind_from_name(b.at("kind").get<std::string>());
    if (!kind) throw domain_error("unknown block kind " + b.at("kind").get<std::string>());
    BlockInstance inst;
    inst.kind = *kind;
    for (auto& v : b.at("vertices")) inst.verts.push_back(v.get<int>() - 1);
    if (static_cast<int>(inst.verts.size()) != block_template(*kind).size())
      throw domain_error("block vertex count mismatch");
    dec.blocks.push_back(std::move(inst));
  }
  if (j.contains("matching"))
    for (auto& m : j.at("matching"))
      dec.matching.push_back({OutletRef{m.at(0).at(0).get<int>() - 1, m.at(0).at(1).get<int>() - 1},
                              OutletRef{m.at(1).at(0).get<int>() - 1, m.at(1).at(1).get<int>() - 1}});
  int n = j.at("n").get<int>();
  return {dec, n};
}

inline json candidate_to_json(const UnfoldingCandidate& cand) {
  json part = json::array();
  for (auto& e : cand.partition) {
    json idx = json::array();
    for (int i : e) idx.push_back(i + 1);
    part.push_back(std::move(idx));
  }
  return json{{"B", matrix_to_json(cand.b)},
              {"C", matrix_to_json(cand.c)},
              {"partition", std::move(part)}};
}

inline UnfoldingCandidate candidate_from_json(const json& j) {
  UnfoldingCandidate cand;
  cand.b = matrix_from_json(j.at("B"));
  cand.c = matrix_from_json(j.at("C"));
  for (auto& e : j.at("partition")) {
    cand.partition.push_back({});
    for (auto& i : e) cand.partition.back().push_back(i.get<int>() - 1);
  }
  return cand;
}

inline json laurent_to_json(const LaurentPoly& p) {
  json terms = json::array();
  for (auto& [e, c] : p.terms())
    terms.push_back(json{{"coef", c.str()}, {"exp", e}});
  return json{{"terms", std::move(terms)}, {"vars", p.vars()}};
}

inline LaurentPoly laurent_from_json(const json& j) {
  int vars = j.at("vars").get<int>();
  LaurentPoly p(vars);
  for (auto& t : j.at("terms")) {
    std::vector<int> e = t.at("exp").get<std::vector<int>>();
    if (static_cast<int>(e.size()) != vars) throw domain_error("exponent length mismatch");
    p += LaurentPoly::monomial(vars, std::move(e), Int(t.at("coef").get<std::string>()));
  }
  return p;
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline std::string dump(const json& j) { return j.dump(); }

} // namespace io
} // namespace mutorb
