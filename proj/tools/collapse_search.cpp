// Exhaustive search for collapsing triangles with small vertex groups:
// trivial core, cyclic edge groups, each vertex generated by its two edge
// images meeting trivially.  Every triangle whose family presentation
// enumerates within the bound is classified as realizable or collapsed.
#include <chrono>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"

#include "amalgam/errors.hpp"
#include "amalgam/triangle.hpp"

using namespace amalgam;

namespace {

FiniteGroup quaternion() {
  // +-1, +-i, +-j, +-k as sign*4 + unit
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  Table mul(8, std::vector<int>(8));
  std::vector<std::string> labels;
  const char* names[4] = {"1", "i", "j", "k"};
  for (int x = 0; x < 8; ++x) labels.push_back(std::string(x >= 4 ? "-" : "") + names[x % 4]);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int sign = (x / 4 + y / 4 + unit_sign[x % 4][y % 4]) % 2;
      mul[x][y] = sign * 4 + unit_mul[x % 4][y % 4];
    }
  return FiniteGroup::from_table(mul, labels);
}

std::vector<GroupPtr> small_groups(int max_order) {
  std::vector<GroupPtr> out;
  for (int n = 2; n <= max_order; ++n) out.push_back(make_group(FiniteGroup::cyclic(n)));
  const auto z2 = FiniteGroup::cyclic(2);
  std::vector<FiniteGroup> more = {FiniteGroup::direct_product(z2, z2), FiniteGroup::symmetric(3),
                                   FiniteGroup::direct_product(z2, FiniteGroup::cyclic(4)),
                                   FiniteGroup::direct_product(z2, FiniteGroup::direct_product(z2, z2)),
                                   FiniteGroup::dihedral(4), quaternion()};
  for (auto& g : more)
    if (g.order() <= max_order) out.push_back(make_group(std::move(g)));
  return out;
}

struct VertexType {
  GroupPtr group;
  int a = 0;  // generator of the first incident edge image
  int b = 0;  // generator of the second
};

// Multiplication table relabelled by breadth-first discovery from (a, b);
// equal keys mean an isomorphism sending a to a' and b to b'.
std::vector<int> canonical_key(const FiniteGroup& g, int a, int b) {
  std::vector<int> label(g.order(), -1), order{g.identity()};
  label[g.identity()] = 0;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int s : {a, b}) {
      const int x = g.mul(order[q], s);
      if (label[x] < 0) {
        label[x] = static_cast<int>(order.size());
        order.push_back(x);
      }
    }
  std::vector<int> key;
  for (int x : order)
    for (int y : order) key.push_back(label[g.mul(x, y)]);
  return key;
}

std::vector<VertexType> vertex_types(const std::vector<GroupPtr>& groups) {
  std::vector<VertexType> out;
  std::set<std::vector<int>> seen;
  for (const auto& g : groups)
    for (int a = 0; a < g->order(); ++a)
      for (int b = 0; b < g->order(); ++b) {
        if (a == g->identity() || b == g->identity()) continue;
        const Subgroup ha = subgroup_generated(g, {a}), hb = subgroup_generated(g, {b});
        if (subgroup_intersect(ha, hb).order() != 1) continue;
        if (subgroup_generated(g, {a, b}).order() != g->order()) continue;
        if (seen.insert(canonical_key(*g, a, b)).second) out.push_back({g, a, b});
      }
  return out;
}

GroupMorphism cyclic_into(const GroupPtr& z, const GroupPtr& g, int gen) {
  GroupMorphism f{z, g, std::vector<int>(z->order())};
  for (int k = 0; k < z->order(); ++k) f.map[k] = g->power(gen, k);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search small triangles of groups for collapse"};
  int max_order = 8;
  long max_cosets = 2000;
  app.add_option("--max-order", max_order, "largest vertex order")->capture_default_str();
  app.add_option("--max-cosets", max_cosets, "coset bound per triangle")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  const auto types = vertex_types(small_groups(max_order));
  std::map<int, GroupPtr> cyclic;
  auto cyc = [&](int n) {
    auto& p = cyclic[n];
    if (!p) p = make_group(FiniteGroup::cyclic(n));
    return p;
  };
  const GroupPtr core = make_group(FiniteGroup::trivial());
  long searched = 0, realizable = 0, collapsed = 0, undecided = 0;
  for (std::size_t i = 0; i < types.size(); ++i)
    for (std::size_t j = 0; j < types.size(); ++j)
      for (std::size_t k = 0; k < types.size(); ++k) {
        const VertexType* v[3] = {&types[i], &types[j], &types[k]};
        // edge 12 uses a at both ends, 13 uses b at 1 and a at 3, 23 uses b at both
        const int o12 = v[0]->group->element_order(v[0]->a), o13 = v[0]->group->element_order(v[0]->b);
        if (v[1]->group->element_order(v[1]->a) != o12) continue;
        if (v[2]->group->element_order(v[2]->a) != o13) continue;
        const int o23 = v[1]->group->element_order(v[1]->b);
        if (v[2]->group->element_order(v[2]->b) != o23) continue;
        GroupTriangle t;
        for (auto* x : v) t.family.vertices.push_back(x->group);
        const GroupPtr e12 = cyc(o12), e13 = cyc(o13), e23 = cyc(o23);
        t.family.edges = {Edge{0, 1, e12, cyclic_into(e12, v[0]->group, v[0]->a), cyclic_into(e12, v[1]->group, v[1]->a)},
                          Edge{0, 2, e13, cyclic_into(e13, v[0]->group, v[0]->b), cyclic_into(e13, v[2]->group, v[2]->a)},
                          Edge{1, 2, e23, cyclic_into(e23, v[1]->group, v[1]->b), cyclic_into(e23, v[2]->group, v[2]->b)}};
        t.core = core;
        for (int e = 0; e < 3; ++e) t.core_into[e] = GroupMorphism{core, t.family.edges[e].group, {0}};
        ++searched;
        const FamilyPresentation fp = presentation_of_family(t.family);
        const CosetResult r = coset_enumeration(fp.presentation, {}, max_cosets);
        if (!r.complete) {
          ++undecided;
          continue;
        }
        bool inj = true;
        for (const auto& m : vertex_maps(fp, r, t.family)) inj = inj && morphism_check(m).injective;
        if (inj) {
          ++realizable;
        } else {
          ++collapsed;
          std::cout << "collapse:";
          for (auto* x : v)
            std::cout << " [order " << x->group->order() << (x->group->is_abelian() ? " abelian" : "") << ", "
                      << x->group->label(x->a) << ", " << x->group->label(x->b) << "]";
          std::cout << " edges " << o12 << "," << o13 << "," << o23 << " image order " << r.group->order() << "\n";
        }
      }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "vertex types: " << types.size() << "\n"
            << "triangles searched: " << searched << "\n"
            << "realizable (finite amalgam): " << realizable << "\n"
            << "collapsed: " << collapsed << "\n"
            << "undecided (enumeration overflow): " << undecided << "\n"
            << "seconds: " << secs << "\n";
  return 0;
}
