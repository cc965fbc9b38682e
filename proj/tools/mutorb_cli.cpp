// Command-line front door: matrix and diagram mutation, block decomposition,
// triangulated orbifolds and flips, mutation-class enumeration, growth
// classification, Laurent expansion, positivity and sign-coherence audits,
// unfoldings. All indices on the command line and in files are 1-based.

#include "mutorb/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

using namespace mutorb;

namespace {

long search_budget() {
  if (const char* env = std::getenv("MUTORB_BUDGET")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 1000000;
}

std::vector<int> parse_seq(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--seq", "sequence must be comma-separated 1-based indices");
    out.push_back(std::stoi(tok) - 1);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void emit(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << io::dump(j) << "\n";
  else
    std::cout << text << "\n";
}

WeightedDiagram realize_weights(const io::DiagramFile& f) {
  if (f.weights) return f.weighted();
  auto dec = find_s_decomposition(f.diagram, {search_budget()});
  if (!dec) throw not_s_decomposable("diagram is not s-decomposable; give vertex weights");
  std::vector<Int> w(f.diagram.size(), 1);
  for (auto& blk : dec->blocks) {
    const BlockTemplate& tpl = block_template(blk.kind);
    for (int a = 0; a < tpl.size(); ++a)
      if (tpl.roles[a] == VertexRole::Pending) w[blk.verts[a]] = 2;
  }
  return WeightedDiagram{f.diagram, std::move(w)};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster algebras from triangulated orbifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  int threads = 1;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_option("--threads", threads, "worker threads for breadth-first searches")
      ->check(CLI::PositiveNumber);

  std::string matrix_file, diagram_file, tri_file, dec_file, cand_file, seq_str, mode = "auto";
  int arc = 0, depth = 8, cap_radius = 12;
  long cap = 100000;
  bool positivity = false, sign_coherence = false, show_keys = false, principal = false;

  auto* cmd_mutate = app.add_subcommand("mutate", "mutate an exchange matrix along a sequence");
  cmd_mutate->add_option("--matrix", matrix_file)->required();
  cmd_mutate->add_option("--seq", seq_str)->required();

  auto* cmd_diagram = app.add_subcommand("diagram", "weighted diagram of a matrix");
  cmd_diagram->add_option("--matrix", matrix_file)->required();

  auto* cmd_decompose = app.add_subcommand("decompose", "search a block decomposition");
  cmd_decompose->add_option("--diagram", diagram_file)->required();

  auto* cmd_triangulate =
      app.add_subcommand("triangulate", "build the triangulated orbifold of a decomposition");
  cmd_triangulate->add_option("--decomposition", dec_file)->required();
  cmd_triangulate->add_option("--diagram", diagram_file, "weighted diagram fixing point weights");

  auto* cmd_flip = app.add_subcommand("flip", "flip one arc of a triangulation");
  cmd_flip->add_option("--triangulation", tri_file)->required();
  cmd_flip->add_option("--arc", arc)->required();

  auto* cmd_class = app.add_subcommand("class", "enumerate the mutation class of a diagram");
  cmd_class->add_option("--diagram", diagram_file)->required();
  cmd_class->add_option("--cap", cap);
  cmd_class->add_flag("--keys", show_keys, "list canonical keys as hex");

  auto* cmd_growth = app.add_subcommand("growth", "growth classification of a diagram");
  cmd_growth->add_option("--diagram", diagram_file)->required();
  cmd_growth->add_option("--cap", cap);
  cmd_growth->add_option("--radius", cap_radius, "ball radius");

  auto* cmd_laurent = app.add_subcommand("laurent", "cluster variables after a mutation sequence");
  cmd_laurent->add_option("--matrix", matrix_file)->required();
  cmd_laurent->add_option("--seq", seq_str)->required();
  cmd_laurent->add_flag("--principal", principal, "principal coefficients");

  auto* cmd_audit = app.add_subcommand("audit", "Laurent, positivity and sign-coherence audits");
  cmd_audit->add_option("--matrix", matrix_file)->required();
  cmd_audit->add_option("--depth", depth);
  cmd_audit->add_flag("--positivity", positivity);
  cmd_audit->add_flag("--sign-coherence", sign_coherence);

  auto* cmd_unfold = app.add_subcommand("unfold", "unfold a skew-symmetrizable matrix");
  cmd_unfold->add_option("--matrix", matrix_file)->required();
  cmd_unfold->add_option("--mode", mode)->check(CLI::IsMember({"local", "prime", "auto"}));

  auto* cmd_verify = app.add_subcommand("verify-unfolding", "bounded unfolding verification");
  cmd_verify->add_option("--candidate", cand_file)->required();
  cmd_verify->add_option("--depth", depth)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  (void)threads;

  try {
    if (*cmd_mutate) {
      auto b = io::matrix_from_json(io::load_file(matrix_file));
      auto r = b.mutated(parse_seq(seq_str));
      emit(io::matrix_to_json(r), as_json, r.to_string());
    } else if (*cmd_diagram) {
      auto b = io::matrix_from_json(io::load_file(matrix_file));
      auto dw = diagram_of(b);
      std::string text;
      for (auto& [f, t, w] : dw.diagram.edges())
        text += std::to_string(f + 1) + " -> " + std::to_string(t + 1) + "  weight " + w.str() + "\n";
      text += "vertex weights:";
      for (auto& w : dw.vertex_weights) text += " " + w.str();
      emit(io::diagram_to_json(dw), as_json, text);
    } else if (*cmd_decompose) {
      auto f = io::diagram_from_json(io::load_file(diagram_file));
      std::optional<BlockDecomposition> dec;
      if (f.weights)
        dec = find_s_decomposition(f.weighted(), {search_budget()});
      else
        dec = find_s_decomposition(f.diagram, {search_budget()});
      if (!dec) {
        emit(json{{"decomposable", false}}, as_json, "not s-decomposable");
      } else {
        json j = io::decomposition_to_json(*dec, f.diagram.size());
        j["decomposable"] = true;
        std::string text;
        for (auto& b : dec->blocks) {
          text += std::string(block_kind_name(b.kind)) + " on";
          for (int v : b.verts) text += " " + std::to_string(v + 1);
          text += "\n";
        }
        text.pop_back();
        emit(j, as_json, text);
      }
    } else if (*cmd_triangulate) {
      auto [dec, n] = io::decomposition_from_json(io::load_file(dec_file));
      std::optional<WeightedDiagram> dw;
      if (!diagram_file.empty()) dw = io::diagram_from_json(io::load_file(diagram_file)).weighted();
      Triangulation t = orbifold_of_decomposition(dec, n, dw ? &*dw : nullptr);
      auto sig = signature(t);
      std::string text = "arcs " + std::to_string(t.arc_count()) + ", triangles " +
                         std::to_string(t.tris.size()) + ", genus " + std::to_string(sig.genus) +
                         ", punctures " + std::to_string(sig.punctures);
      emit(io::triangulation_to_json(t), as_json, text);
    } else if (*cmd_flip) {
      auto t = io::triangulation_from_json(io::load_file(tri_file));
      auto f = flip(t, arc - 1);
      auto b = signed_adjacency(f);
      emit(io::triangulation_to_json(f), as_json, "flipped; matrix " + b.to_string());
    } else if (*cmd_class) {
      auto f = io::diagram_from_json(io::load_file(diagram_file));
      auto cls = enumerate_mutation_class(f.diagram, cap);
      json j{{"class_size", cls.exceeded ? json("exceeded") : json(cls.keys.size())},
             {"exceeded", cls.exceeded}};
      if (show_keys) {
        json keys = json::array();
        for (auto& k : cls.keys) keys.push_back(to_hex_key(k));
        j["keys"] = std::move(keys);
      }
      emit(j, as_json,
           cls.exceeded ? "class size: exceeded" : "class size: " + std::to_string(cls.keys.size()));
    } else if (*cmd_growth) {
      auto f = io::diagram_from_json(io::load_file(diagram_file));
      auto rep = classify_growth(f.diagram, cap);
      json j{{"classification", growth_name(rep.growth)},
             {"class_size", rep.class_exceeded ? json("exceeded") : json(rep.class_size)}};
      try {
        auto b = matrices_for_weighted_diagram(realize_weights(f));
        j["ball_sizes"] = ball_sizes(b, cap_radius);
      } catch (const domain_error&) {
        j["ball_sizes"] = json::array();
      }
      emit(j, as_json, growth_name(rep.growth));
    } else if (*cmd_laurent) {
      auto b = io::matrix_from_json(io::load_file(matrix_file));
      Seed s = principal ? principal_initial_seed(b) : initial_seed(b);
      s = mutate_seed(s, parse_seq(seq_str));
      json cluster = json::array();
      std::string text;
      bool positive = true;
      for (auto& p : s.cluster) {
        cluster.push_back(io::laurent_to_json(p));
        positive = positive && p.nonnegative();
        text += p.to_string() + "\n";
      }
      text += positive ? "all coefficients nonnegative" : "negative coefficient present";
      emit(json{{"cluster", std::move(cluster)}, {"positive", positive}}, as_json, text);
    } else if (*cmd_audit) {
      auto b = io::matrix_from_json(io::load_file(matrix_file));
      json j;
      std::string text;
      if (positivity || !sign_coherence) {
        auto audit = audit_laurent_positivity(b, depth);
        j["laurent"] = audit.all_laurent;
        j["positive"] = audit.all_positive;
        j["seeds"] = audit.seeds;
        text += "laurent: " + std::string(audit.all_laurent ? "true" : "false") +
                "\npositive: " + (audit.all_positive ? "true" : "false") + "\nseeds: " +
                std::to_string(audit.seeds);
      }
      if (sign_coherence) {
        auto rep = check_sign_coherence(b, depth);
        j["coherent"] = rep.coherent;
        j["states"] = rep.states;
        if (!text.empty()) text += "\n";
        text += "coherent: " + std::string(rep.coherent ? "true" : "false");
        if (!rep.coherent) {
          json seq = json::array();
          std::string s;
          for (int k : rep.violation_sequence) {
            seq.push_back(k + 1);
            s += (s.empty() ? "" : ",") + std::to_string(k + 1);
          }
          j["violation"] = std::move(seq);
          text += "\nviolation: " + s;
        }
      }
      emit(j, as_json, text);
    } else if (*cmd_unfold) {
      auto b = io::matrix_from_json(io::load_file(matrix_file));
      UnfoldingCandidate cand;
      if (mode == "local") {
        cand = local_unfolding(b);
      } else if (mode == "prime") {
        auto info = detail::roles_of(b);
        WeightedDiagram dw = diagram_of(b);
        for (int v = 0; v < b.size(); ++v)
          if (info.pending[v] && dw.vertex_weights[v] == 2 * info.w)
            throw not_applicable("prime unfolding needs all points of weight 1/2");
        cand = unfold(b);
      } else {
        cand = unfold(b);
      }
      emit(io::candidate_to_json(cand), as_json, cand.c.to_string());
    } else if (*cmd_verify) {
      auto cand = io::candidate_from_json(io::load_file(cand_file));
      auto v = verify_unfolding(cand, depth);
      json j{{"depth", depth}, {"states", v.states}, {"verified", v.verified}};
      std::string text = v.verified ? "verified to depth " + std::to_string(depth)
                                    : "refuted";
      if (!v.verified) {
        json seq = json::array();
        std::string s;
        for (int k : v.refutation) {
          seq.push_back(k + 1);
          s += (s.empty() ? "" : ",") + std::to_string(k + 1);
        }
        j["refutation"] = std::move(seq);
        text += s.empty() ? " at the initial pair" : " by sequence " + s;
      }
      emit(j, as_json, text);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
