#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/fock.hpp"
#include "amalgam/io.hpp"
#include "amalgam/report.hpp"
#include "amalgam/triangle.hpp"

using namespace amalgam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

json angle_json(const AngleReport& a) {
  json j;
  j["status"] = a.status_str();
  j["theta"] = a.theta_str();
  j["searched_length"] = a.searched;
  if (a.kernel_length) j["kernel_length"] = a.kernel_length;
  return j;
}

std::string group_element(const FiniteGroup& g, int x) { return g.label(x); }

Report group_validate(const std::string& path) {
  Report rep;
  rep.command = "group validate";
  io::Loader ld;
  const json doc = ld.load(path);
  const GroupPtr g = ld.group(doc, fs::path(path).parent_path());
  rep.inputs = ld.digests();
  rep.verdicts["ok"] = true;
  rep.verdicts["order"] = g->order();
  rep.verdicts["abelian"] = g->is_abelian();
  rep.verdicts["identity"] = g->label(g->identity());
  rep.verdicts["laws"] = {{"associative", true}, {"identity", true}, {"inverses", true}, {"closed", true}};
  return rep;
}

Report triangle_analyze(const std::string& path, const RealizeOptions& opt) {
  Report rep;
  rep.command = "triangle analyze";
  io::Loader ld;
  Clock clk;
  const GroupTriangle t = ld.group_triangle(ld.load(path), fs::path(path).parent_path());
  rep.inputs = ld.digests();
  rep.verdicts["bounds"] = {{"depth", opt.depth}, {"max_cosets", opt.max_cosets}, {"angle_bound", opt.angle_bound}};
  const Realization r = realize_triangle(t, opt);
  rep.timings["realize"] = clk.ms();
  json& v = rep.verdicts;
  v["fillable"] = r.fillable;
  v["minimal"] = r.minimal;
  v["orders"] = r.orders;
  v["reduced_orders"] = r.reduced_orders;
  v["reduced_differs"] = r.reduced_differs;
  for (int k = 0; k < 3; ++k) {
    const std::string key = "vertex_" + std::to_string(k + 1);
    v["angles"][key] = angle_json(r.angles.angles[k]);
    v["edge_pair_normal_forms"][key] = r.edge_pair_counts[k];
  }
  v["angle_sum"] = {{"sufficient", r.angles.sufficient},
                    {"bound_sum_over_pi", r.angles.bounds_usable ? r.angles.bound_sum.get_str() : "unusable"}};
  v["retri_i"] = r.retri_i.ok;
  v["retri_ii"] = r.retri_ii.ok;
  v["enumeration"] = {{"complete", r.enumeration_complete},
                      {"cosets", r.enumeration_cosets},
                      {"peak", r.enumeration_peak}};
  if (r.reduced_enumeration_run)
    v["reduced_enumeration"] = {{"complete", r.reduced_enumeration_complete}, {"cosets", r.reduced_enumeration_cosets}};
  v["verdict"] = verdict_str(r.verdict);
  v["reason"] = r.reason;
  if (r.group) {
    v["group_order"] = r.group->order();
    v["injective"] = r.injective;
    v["diagrams_commute"] = r.diagrams_commute;
    v["maps_from_reduced"] = r.psi_from_reduced;
  }
  if (r.verdict == Verdict::Collapsed && r.witness_vertex >= 0) {
    const FiniteGroup& g = *t.family.vertices[r.witness_vertex];
    rep.witnesses["collapse"] = {{"vertex", r.witness_vertex + 1},
                                 {"g", group_element(g, r.witness_g)},
                                 {"h", group_element(g, r.witness_g2)}};
  }
  if (!r.notes.empty()) v["notes"] = r.notes;
  return rep;
}

Report angle(const std::string& path, int bound) {
  Report rep;
  rep.command = "angle";
  io::Loader ld;
  const json doc = ld.load(path);
  const fs::path dir = fs::path(path).parent_path();
  rep.verdicts["bounds"] = {{"angle_bound", bound}};
  if (doc.contains("vertices")) {
    const GroupTriangle t = ld.group_triangle(doc, dir);
    const AngleSumReport s = angle_sum_check(t, bound);
    for (int k = 0; k < 3; ++k) rep.verdicts["vertex_" + std::to_string(k + 1)] = angle_json(s.angles[k]);
    rep.verdicts["angle_sum"] = s.sufficient ? "SUFFICIENT" : "INSUFFICIENT";
    rep.verdicts["bound_sum_over_pi"] = s.bounds_usable ? s.bound_sum.get_str() : "unusable";
  } else {
    const GroupPtr g = ld.group(doc.at("group"), dir);
    auto sub = [&](const char* key) {
      return doc.contains(key) ? subgroup_generated(g, doc.at(key).get<std::vector<int>>()) : trivial_subgroup(g);
    };
    const AngleReport a = stallings_angle(sub("h1"), sub("h2"), sub("core"), bound);
    rep.verdicts["angle"] = angle_json(a);
  }
  rep.inputs = ld.digests();
  return rep;
}

Report algebra_amalgam(const std::string& path) {
  Report rep;
  rep.command = "algebra amalgam";
  io::Loader ld;
  Clock clk;
  std::vector<int> order;
  const AlgebraTriangle t = ld.algebra_triangle(ld.load(path), fs::path(path).parent_path(), &order);
  rep.inputs = ld.digests();
  json& v = rep.verdicts;
  RuleSet rules;
  try {
    rules = discover_rules(t, order);
  } catch (const Error& e) {
    if (e.kind() != "SpanDeficient") throw;
    v["status"] = "SpanDeficient";
    rep.witnesses["span_deficient"] = e.what();
    return rep;
  }
  v["rules"] = rules.rules.size();
  RelationAlgebra r;
  try {
    r = build_relation_algebra(t, rules);
  } catch (const Error& e) {
    if (e.kind() != "NotConfluent" && e.kind() != "StarNotClosed") throw;
    v["status"] = e.kind();
    rep.witnesses["relation_algebra"] = e.what();
    return rep;
  }
  rep.timings["relation_algebra"] = clk.ms();
  v["status"] = "ok";
  v["confluence"] = {{"ok", r.confluence.ok}, {"triples", r.confluence.triples}};
  v["dim"] = r.algebra->dim;
  const auto z = center(*r.algebra, family_generators(r));
  v["center_dim"] = z.dim();
  v["simple"] = z.dim() == 1;
  try {
    const MatrixUnits mu = matrix_units_discovery(*r.algebra, family_projections(r), family_generators(r));
    v["matrix_size"] = mu.n;
    v["matrix_units"] = "verified";
  } catch (const Error& e) {
    v["matrix_units"] = e.kind();
  }
  const EmbeddingReport emb = embed_vertices(t, r);
  v["embeddings"] = {{"ranks", emb.ranks},
                     {"injective", emb.injective},
                     {"unital", emb.unital},
                     {"multiplicative", emb.multiplicative},
                     {"star", emb.star},
                     {"diagrams", emb.diagrams},
                     {"ok", emb.ok()}};
  rep.timings["total"] = clk.ms();
  return rep;
}

Report square_check(const std::string& path) {
  Report rep;
  rep.command = "algebra square-check";
  io::Loader ld;
  const io::SquareRequest req = io::square_request(ld, ld.load(path), fs::path(path).parent_path());
  rep.inputs = ld.digests();
  const SquareReport s = commuting_square_check(req.first, req.second);
  rep.verdicts["commuting_square"] = s.ok;
  rep.verdicts["intersection_dim"] = s.intersection_dim;
  if (!s.ok) {
    const Vec b = req.algebra->basis(s.witness);
    rep.witnesses["basis_element"] = req.algebra->labels[s.witness];
    rep.witnesses["first_then_second"] = io::vector_json(req.second(req.first(b)));
    rep.witnesses["second_then_first"] = io::vector_json(req.first(req.second(b)));
    rep.witnesses["reason"] = s.reason;
  }
  return rep;
}

std::string word_key(const FockWord& w, const std::vector<PointedAlgebra>& f) {
  std::string s;
  for (const auto& [i, a] : w) {
    int k = 0;
    while (k < static_cast<int>(a.size()) && a[k].is_zero()) ++k;
    s += (s.empty() ? "" : ",") + std::to_string(i + 1) + ":" + f[i].algebra->labels[k];
  }
  return s.empty() ? "(empty)" : s;
}

Report fock_moments(const std::string& path, int depth, const std::optional<std::string>& word) {
  Report rep;
  rep.command = "fock moments";
  io::Loader ld;
  Clock clk;
  io::FockRequest req = io::fock_request(ld, ld.load(path), fs::path(path).parent_path());
  rep.inputs = ld.digests();
  if (depth > 0) req.depth = depth;
  const TruncatedFockModule f = fock_from_algebras(req.factors, req.depth);
  rep.timings["module"] = clk.ms();
  json& v = rep.verdicts;
  v["bounds"] = {{"depth", req.depth}};
  v["module_dim"] = f.dim;
  v["gram_psd"] = f.psd();
  if (word) {
    const FockWord w = io::parse_word(*word, req.factors);
    v["word"] = *word;
    v["moment"] = io::vector_json(free_expectation(f, w));
    return rep;
  }
  // freeness suite over alternating centered basis words
  std::vector<std::vector<Vec>> centered;
  for (const auto& p : req.factors) centered.push_back(centered_basis(p));
  long total = 0, zero = 0;
  json first_nonzero;
  for (const auto& t : alternating_tuples(static_cast<int>(req.factors.size()), req.depth)) {
    std::vector<std::size_t> idx(t.size(), 0);
    bool empty = false;
    for (int i : t) empty = empty || centered[i].empty();
    if (empty) continue;
    while (true) {
      FockWord w;
      for (std::size_t k = 0; k < t.size(); ++k) w.push_back({t[k], centered[t[k]][idx[k]]});
      const Vec m = free_expectation(f, w);
      ++total;
      if (linalg::is_zero(m)) {
        ++zero;
      } else if (first_nonzero.is_null()) {
        first_nonzero = io::vector_json(m);
      }
      std::size_t k = 0;
      while (k < t.size() && ++idx[k] == centered[t[k]].size()) idx[k++] = 0;
      if (k == t.size()) break;
    }
  }
  v["freeness"] = {{"centered_words", total}, {"vanishing", zero}, {"all_vanish", total == zero}};
  if (!first_nonzero.is_null()) rep.witnesses["nonvanishing_moment"] = first_nonzero;
  if (!req.words.empty()) {
    json table = json::object();
    for (const auto& w : req.words) table[word_key(w, req.factors)] = io::vector_json(free_expectation(f, w));
    v["word_table"] = table;
  }
  rep.timings["total"] = clk.ms();
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized amalgams of groups and finite-dimensional algebras"};
  app.require_subcommand(1);
  bool as_json = false, timings = false;
  app.add_flag("--json", as_json, "emit the report as JSON");
  app.add_flag("--timings", timings, "include timings in milliseconds");

  std::function<Report()> run;
  std::string file;

  auto* group = app.add_subcommand("group", "finite groups")->require_subcommand(1);
  auto* gv = group->add_subcommand("validate", "check a group document");
  gv->add_option("file", file)->required();
  gv->callback([&] { run = [&] { return group_validate(file); }; });

  RealizeOptions ropt;
  auto* tri = app.add_subcommand("triangle", "triangles of groups")->require_subcommand(1);
  auto* ta = tri->add_subcommand("analyze", "fillability, angles, enumeration and verdict");
  ta->add_option("file", file)->required();
  ta->add_option("--depth", ropt.depth, "normal-form length tabulated for edge-pair amalgams")->capture_default_str();
  ta->add_option("--max-cosets", ropt.max_cosets, "coset enumeration bound")->capture_default_str();
  ta->add_option("--angle-bound", ropt.angle_bound, "syllable length searched for angles")->capture_default_str();
  ta->callback([&] { run = [&] { return triangle_analyze(file, ropt); }; });

  int bound = 12;
  auto* ang = app.add_subcommand("angle", "angle of two subgroups, or the angle sum of a triangle");
  ang->add_option("file", file)->required();
  ang->add_option("--bound", bound, "syllable length searched")->capture_default_str();
  ang->callback([&] { run = [&] { return angle(file, bound); }; });

  auto* alg = app.add_subcommand("algebra", "triangles of algebras")->require_subcommand(1);
  auto* aa = alg->add_subcommand("amalgam", "relation algebra of an algebra triangle");
  aa->add_option("file", file)->required();
  aa->callback([&] { run = [&] { return algebra_amalgam(file); }; });
  auto* sq = alg->add_subcommand("square-check", "commuting square test of two expectations");
  sq->add_option("file", file)->required();
  sq->callback([&] { run = [&] { return square_check(file); }; });

  int depth = 0;
  std::optional<std::string> word;
  auto* fock = app.add_subcommand("fock", "truncated Fock modules")->require_subcommand(1);
  auto* fm = fock->add_subcommand("moments", "moments of a word, or the freeness suite");
  fm->add_option("file", file)->required();
  fm->add_option("--depth", depth, "truncation depth (default from the document)");
  fm->add_option("--word", word, "letters factor:element separated by commas");
  fm->callback([&] { run = [&] { return fock_moments(file, depth, word); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    const Report rep = run();
    std::cout << (as_json ? rep.json_text(timings) : rep.text(timings));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
