#include "amalgam/triangle.hpp"

#include <algorithm>

#include "amalgam/errors.hpp"

namespace amalgam {

void GroupTriangle::validate() const {
  require(family.vertices.size() == 3, "BadTriangle", "a triangle has three vertices");
  require(family.edges.size() == 3, "BadTriangle", "a triangle has three edges");
  for (int e = 0; e < 3; ++e) {
    const Edge& ed = family.edges[e];
    require(ed.a == kEdgeEnds[e][0] && ed.b == kEdgeEnds[e][1], "BadTriangle", "edges must be listed as 12, 13, 23");
  }
  family.validate();
  require(core != nullptr, "BadTriangle", "missing core group");
  for (int e = 0; e < 3; ++e) {
    require(core_into[e].domain == core && core_into[e].codomain == family.edges[e].group, "BadMorphism",
            "core injection " + std::to_string(e) + " has the wrong domain or codomain");
    require_injective(core_into[e], "core into edge " + std::to_string(e));
  }
}

int GroupTriangle::edge_of(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 3; ++e)
    if (kEdgeEnds[e][0] == a && kEdgeEnds[e][1] == b) return e;
  throw Error("BadVertexIndex", "no edge between " + std::to_string(a) + " and " + std::to_string(b));
}

std::array<int, 2> GroupTriangle::edges_at(int v) {
  switch (v) {
    case 0: return {0, 1};
    case 1: return {0, 2};
    case 2: return {1, 2};
    default: throw Error("BadVertexIndex", std::to_string(v));
  }
}

Subgroup GroupTriangle::edge_image(int e, int v) const { return image(family.into(e, v)); }

GroupMorphism GroupTriangle::core_to_vertex(int e, int v) const { return compose(family.into(e, v), core_into[e]); }

FillableReport check_fillable(const GroupTriangle& t) {
  FillableReport r;
  for (int v = 0; v < 3; ++v) {
    const auto [e, f] = GroupTriangle::edges_at(v);
    const Subgroup inter = subgroup_intersect(t.edge_image(e, v), t.edge_image(f, v));
    const GroupMorphism ce = t.core_to_vertex(e, v);
    const GroupMorphism cf = t.core_to_vertex(f, v);
    const Subgroup ci = image(ce);
    if (!(inter == ci)) {
      r = {false, v, "edge images meet in a subgroup of order " + std::to_string(inter.order()) +
                         " but the core image has order " + std::to_string(ci.order()),
           inter, ci};
      return r;
    }
    if (ce.map != cf.map) {
      r = {false, v, "the core reaches the vertex differently through its two edges", inter, ci};
      return r;
    }
  }
  return r;
}

bool check_minimal(const GroupTriangle& t) {
  for (int v = 0; v < 3; ++v) {
    const auto [e, f] = GroupTriangle::edges_at(v);
    std::vector<int> gens = t.edge_image(e, v).members;
    const auto& g2 = t.edge_image(f, v).members;
    gens.insert(gens.end(), g2.begin(), g2.end());
    if (subgroup_generated(t.family.vertices[v], gens).order() != t.family.vertices[v]->order()) return false;
  }
  return true;
}

ReducedFamily reduce_family_with_inclusions(const AmalgamFamily& fam) {
  fam.validate();
  ReducedFamily out;
  std::vector<SubgroupGroup> sub;
  for (std::size_t v = 0; v < fam.vertices.size(); ++v) {
    std::vector<int> gens;
    for (int e : fam.edges_at(static_cast<int>(v))) {
      const auto m = image(fam.into(e, static_cast<int>(v))).members;
      gens.insert(gens.end(), m.begin(), m.end());
    }
    sub.push_back(subgroup_as_group(subgroup_generated(fam.vertices[v], gens)));
    out.family.vertices.push_back(sub.back().group);
    out.inclusion.push_back(sub.back().inclusion);
  }
  for (const Edge& e : fam.edges) {
    Edge r = e;
    r.into_a.codomain = out.family.vertices[e.a];
    r.into_b.codomain = out.family.vertices[e.b];
    for (auto& x : r.into_a.map) x = sub[e.a].index_of[x];
    for (auto& x : r.into_b.map) x = sub[e.b].index_of[x];
    out.family.edges.push_back(std::move(r));
  }
  return out;
}

AmalgamFamily reduce_family(const AmalgamFamily& fam) { return reduce_family_with_inclusions(fam).family; }

GroupTriangle reduce_triangle(const GroupTriangle& t) {
  GroupTriangle r = t;
  r.family = reduce_family(t.family);
  return r;
}

std::string AngleReport::theta_str() const {
  switch (status) {
    case AngleStatus::Exact: return n == 0 ? "0" : "pi/" + std::to_string(n);
    case AngleStatus::LowerBoundOnly: return "<= pi/" + std::to_string(bound_n);
    case AngleStatus::OddKernelLength: return "undefined (odd kernel length " + std::to_string(kernel_length) + ")";
  }
  return "";
}

std::string AngleReport::status_str() const {
  switch (status) {
    case AngleStatus::Exact: return "EXACT";
    case AngleStatus::LowerBoundOnly: return "LOWER_BOUND_ONLY";
    case AngleStatus::OddKernelLength: return "ODD_KERNEL_LENGTH";
  }
  return "";
}

std::optional<mpq_class> AngleReport::upper_bound() const {
  switch (status) {
    case AngleStatus::Exact: return n == 0 ? mpq_class(0) : mpq_class(1, n);
    case AngleStatus::LowerBoundOnly: return mpq_class(1, bound_n);
    case AngleStatus::OddKernelLength: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Minimum-index representatives of the right cosets K t inside H, identity excluded.
std::vector<int> nontrivial_reps(const Subgroup& h, const Subgroup& k) {
  const FiniteGroup& G = *h.parent;
  std::vector<char> covered(G.order(), 0);
  std::vector<int> reps;
  for (int t : h.members) {
    if (covered[t]) continue;
    if (!k.contains(t)) reps.push_back(t);
    for (int x : k.members) covered[G.mul(x, t)] = 1;
  }
  return reps;
}

}  // namespace

AngleReport stallings_angle(const Subgroup& h1, const Subgroup& h2, const Subgroup& k, int max_len) {
  require(h1.parent == h2.parent && h1.parent == k.parent, "ParentMismatch", "subgroups of different groups");
  require(max_len >= 2, "BadBound", "angle bound must be at least 2");
  for (int x : k.members)
    require(h1.contains(x) && h2.contains(x), "InvalidCore", "core element " + std::to_string(x) + " outside H1 and H2");
  const FiniteGroup& G = *h1.parent;
  AngleReport r;
  const std::vector<int> reps[2] = {nontrivial_reps(h1, k), nontrivial_reps(h2, k)};
  if (reps[0].empty() || reps[1].empty()) return r;  // amalgam is one factor; theta = 0

  std::vector<char> seen[2] = {std::vector<char>(G.order(), 0), std::vector<char>(G.order(), 0)};
  std::vector<std::pair<int, int>> frontier;  // (value, last side)
  for (int s = 0; s < 2; ++s)
    for (int t : reps[s])
      if (!seen[s][t]) {
        seen[s][t] = 1;
        frontier.emplace_back(t, s);
      }
  for (int len = 2; len <= max_len; ++len) {
    std::vector<std::pair<int, int>> next;
    for (const auto& [v, s] : frontier) {
      const int side = 1 - s;
      for (int t : reps[side]) {
        const int w = G.mul(v, t);
        if (k.contains(w)) {
          r.kernel_length = len;
          r.searched = len;
          if (len % 2 == 0) {
            r.n = len / 2;
          } else {
            r.status = AngleStatus::OddKernelLength;
          }
          return r;
        }
        if (!seen[side][w]) {
          seen[side][w] = 1;
          next.emplace_back(w, side);
        }
      }
    }
    if (next.empty()) {
      r.searched = len;
      return r;  // no kernel at any length
    }
    frontier = std::move(next);
  }
  r.status = AngleStatus::LowerBoundOnly;
  r.searched = max_len;
  r.bound_n = max_len / 2;
  return r;
}

AngleSumReport angle_sum_check(const GroupTriangle& t, int max_len) {
  AngleSumReport out;
  out.bound_sum = 0;
  for (int v = 0; v < 3; ++v) {
    const auto [e, f] = GroupTriangle::edges_at(v);
    out.angles[v] = stallings_angle(t.edge_image(e, v), t.edge_image(f, v), image(t.core_to_vertex(e, v)), max_len);
    if (auto b = out.angles[v].upper_bound())
      out.bound_sum += *b;
    else
      out.bounds_usable = false;
  }
  out.sufficient = out.bounds_usable && out.bound_sum <= 1;
  return out;
}

RetriReport check_retri_i(const GroupTriangle& t) {
  for (int v = 0; v < 3; ++v) {
    const auto [e, f] = GroupTriangle::edges_at(v);
    const Subgroup ie = t.edge_image(e, v), jf = t.edge_image(f, v);
    const Subgroup core = image(t.core_to_vertex(e, v));
    const Subgroup all = whole_group(t.family.vertices[v]);
    // with both indices over the core at least 2 the amalgam is infinite
    if ((ie == core && jf == all) || (jf == core && ie == all)) return {true, v, -1};
  }
  return {};
}

RetriReport check_retri_ii(const GroupTriangle& t) {
  auto commute_at = [&](int e, int v) {
    const auto [x, y] = GroupTriangle::edges_at(v);
    const int other = x == e ? y : x;
    const FiniteGroup& G = *t.family.vertices[v];
    const Subgroup a = t.edge_image(e, v), b = t.edge_image(other, v);
    for (int p : a.members)
      for (int q : b.members)
        if (G.mul(p, q) != G.mul(q, p)) return false;
    return true;
  };
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = GroupTriangle::kEdgeEnds[e];
    if (commute_at(e, a) && commute_at(e, b)) return {true, a, e};
  }
  return {};
}

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Realizable: return "REALIZABLE";
    case Verdict::Collapsed: return "COLLAPSED";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "";
}

std::vector<GroupMorphism> vertex_maps(const FamilyPresentation& fp, const CosetResult& r, const AmalgamFamily& fam) {
  require(r.complete && r.group, "BadEnumeration", "enumeration did not produce a group");
  std::vector<GroupMorphism> out;
  for (std::size_t v = 0; v < fam.vertices.size(); ++v) {
    const FiniteGroup& G = *fam.vertices[v];
    GroupMorphism m{fam.vertices[v], r.group, std::vector<int>(G.order())};
    for (int g = 0; g < G.order(); ++g)
      m.map[g] = g == G.identity() ? r.group->identity() : r.generator_image[fp.generator_of[v][g] - 1];
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

struct Enumerated {
  CosetResult result;
  std::vector<GroupMorphism> psi;
  std::array<bool, 3> injective{};
  bool diagrams = true;
  int vertex = -1, g = -1, g2 = -1;  // first collapse
};

Enumerated enumerate_family(const AmalgamFamily& fam, long max_cosets) {
  Enumerated out;
  const FamilyPresentation fp = presentation_of_family(fam);
  out.result = coset_enumeration(fp.presentation, {}, max_cosets);
  if (!out.result.complete || !out.result.group) return out;
  out.psi = vertex_maps(fp, out.result, fam);
  for (int v = 0; v < 3; ++v) {
    const auto& m = out.psi[v].map;
    out.injective[v] = true;
    for (int a = 0; a < static_cast<int>(m.size()) && out.injective[v]; ++a)
      for (int b = a + 1; b < static_cast<int>(m.size()); ++b)
        if (m[a] == m[b]) {
          out.injective[v] = false;
          if (out.vertex < 0) {
            out.vertex = v;
            out.g = a;
            out.g2 = b;
          }
          break;
        }
  }
  for (const Edge& e : fam.edges)
    for (int h = 0; h < e.group->order(); ++h)
      if (out.psi[e.a](e.into_a(h)) != out.psi[e.b](e.into_b(h))) out.diagrams = false;
  return out;
}

}  // namespace

Realization realize_triangle(const GroupTriangle& t, const RealizeOptions& opt) {
  t.validate();
  Realization r;
  const FillableReport fill = check_fillable(t);
  if (!fill.ok) throw Error("NotFillable", "vertex " + std::to_string(fill.vertex + 1) + ": " + fill.reason);
  r.minimal = check_minimal(t);
  const ReducedFamily red = reduce_family_with_inclusions(t.family);
  GroupTriangle rt = t;
  rt.family = red.family;
  for (int v = 0; v < 3; ++v) {
    r.orders[v] = t.family.vertices[v]->order();
    r.reduced_orders[v] = rt.family.vertices[v]->order();
    if (r.orders[v] != r.reduced_orders[v]) r.reduced_differs = true;
    const auto [e, f] = GroupTriangle::edges_at(v);
    const Subgroup core = image(t.core_to_vertex(e, v));
    const SubgroupGroup cg = subgroup_as_group(core);
    // the edge images as abstract groups, each containing the core
    const SubgroupGroup se = subgroup_as_group(t.edge_image(e, v));
    const SubgroupGroup sf = subgroup_as_group(t.edge_image(f, v));
    GroupMorphism i1{cg.group, se.group, {}}, i2{cg.group, sf.group, {}};
    for (int x : core.members) {
      i1.map.push_back(se.index_of[x]);
      i2.map.push_back(sf.index_of[x]);
    }
    const TwoFactor tf{se.group, sf.group, cg.group, i1, i2};
    for (int n = 0; n <= opt.depth; ++n) r.edge_pair_counts[v].push_back(count_normal_forms(tf, n));
  }

  r.retri_i = check_retri_i(rt);
  r.retri_ii = check_retri_ii(rt);
  r.angles = angle_sum_check(rt, opt.angle_bound);

  auto adopt = [&](const Enumerated& en, bool reduced) {
    r.group = en.result.group;
    r.psi = en.psi;
    r.psi_from_reduced = reduced;
    r.injective = en.injective;
    r.diagrams_commute = en.diagrams;
    const bool all = en.injective[0] && en.injective[1] && en.injective[2];
    const std::string via = reduced ? "reduction+enumeration" : "enumeration";
    if (all) {
      r.verdict = Verdict::Realizable;
      r.reason = via;
      return;
    }
    r.verdict = Verdict::Collapsed;
    r.reason = via;
    r.witness_vertex = en.vertex;
    r.witness_g = reduced ? red.inclusion[en.vertex](en.g) : en.g;
    r.witness_g2 = reduced ? red.inclusion[en.vertex](en.g2) : en.g2;
  };

  const Enumerated full = enumerate_family(t.family, opt.max_cosets);
  r.enumeration_complete = full.result.complete;
  r.enumeration_cosets = full.result.cosets;
  r.enumeration_peak = full.result.max_live;
  if (full.result.complete && full.result.group) {
    adopt(full, false);
    return r;
  }
  if (full.result.complete) r.notes.push_back("enumeration completed beyond the group order bound");
  if (r.reduced_differs) {
    const Enumerated part = enumerate_family(rt.family, opt.max_cosets);
    r.reduced_enumeration_run = true;
    r.reduced_enumeration_complete = part.result.complete;
    r.reduced_enumeration_cosets = part.result.cosets;
    if (part.result.complete && part.result.group) {
      adopt(part, true);
      return r;
    }
  }
  const std::string pre = r.reduced_differs ? "reduction+" : "";
  if (r.retri_i.ok) {
    r.verdict = Verdict::Realizable;
    r.reason = pre + "retri-i";
  } else if (r.retri_ii.ok) {
    r.verdict = Verdict::Realizable;
    r.reason = pre + "retri-ii";
    r.notes.push_back("the amalgam is a quotient of the two-vertex amalgam over the commuting edge");
  } else if (r.angles.sufficient) {
    r.verdict = Verdict::Realizable;
    r.reason = pre + "angle-sum";
  } else {
    r.verdict = Verdict::Unknown;
    r.reason = "enumeration overflow at " + std::to_string(opt.max_cosets) + " cosets; criteria inconclusive";
  }
  return r;
}

}  // namespace amalgam
