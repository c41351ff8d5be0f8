#include <algorithm>
#include <set>

#include "doctest.h"

#include "amalgam/errors.hpp"
#include "amalgam/group.hpp"

using namespace amalgam;

namespace {

std::vector<std::vector<int>> perms3() {
  std::vector<int> p{0, 1, 2};
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// S3 by composing permutations directly: (x*y)(k) = x(y(k)).
Table s3_by_hand() {
  const auto ps = perms3();
  Table t(6, std::vector<int>(6));
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[k] = ps[x][ps[y][k]];
      t[x][y] = static_cast<int>(std::find(ps.begin(), ps.end(), c) - ps.begin());
    }
  return t;
}

int parity(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  return inv % 2;
}

// All subgroups of a small group by testing every subset that contains the identity.
std::vector<std::vector<int>> all_subgroups(const FiniteGroup& g) {
  std::vector<std::vector<int>> out;
  const int n = g.order();
  for (long mask = 0; mask < (1L << n); ++mask) {
    if (!(mask >> g.identity() & 1)) continue;
    bool closed = true;
    for (int x = 0; x < n && closed; ++x)
      for (int y = 0; y < n && closed; ++y)
        if ((mask >> x & 1) && (mask >> y & 1) && !(mask >> g.mul(x, g.inv(y)) & 1)) closed = false;
    if (!closed) continue;
    std::vector<int> s;
    for (int x = 0; x < n; ++x)
      if (mask >> x & 1) s.push_back(x);
    out.push_back(s);
  }
  return out;
}

void check_closed(const Subgroup& s) {
  const auto& g = *s.parent;
  CHECK(std::is_sorted(s.members.begin(), s.members.end()));
  CHECK(s.contains(g.identity()));
  for (int x : s.members) {
    CHECK(s.contains(g.inv(x)));
    for (int y : s.members) CHECK(s.contains(g.mul(x, y)));
  }
}

}  // namespace

TEST_CASE("table validation") {
  const auto z2 = FiniteGroup::from_table({{0, 1}, {1, 0}});
  CHECK(z2.order() == 2);
  CHECK(z2.identity() == 0);
  try {
    FiniteGroup::from_table({{0, 1}, {0, 1}});
    FAIL("expected NoIdentity");
  } catch (const Error& e) {
    CHECK(e.kind() == "NoIdentity");
  }
  // identity need not be element 0
  const auto shifted = FiniteGroup::from_table({{1, 0}, {0, 1}});
  CHECK(shifted.identity() == 1);
  CHECK(shifted.inv(0) == 0);
  // a Latin square that is not associative
  const Table bad{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    FiniteGroup::from_table(bad);
    FAIL("expected NotAssociative");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotAssociative");
  }
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 2}, {1, 0}}), Error);
}

TEST_CASE("S3 from a hand-composed table") {
  const auto g = FiniteGroup::from_table(s3_by_hand());
  CHECK(g.order() == 6);
  CHECK_FALSE(g.is_abelian());
  CHECK(FiniteGroup::symmetric(3).order() == 6);
  CHECK(FiniteGroup::from_permutations({{1, 0, 2}, {0, 2, 1}}).order() == 6);
  CHECK(FiniteGroup::dihedral(4).order() == 8);
  CHECK(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)).is_abelian());
}

TEST_CASE("subgroup_generated") {
  const auto s = make_group(FiniteGroup::symmetric(3));
  const int t12 = s->find_label("(12)"), t13 = s->find_label("(13)"), c = s->find_label("(123)");
  REQUIRE(t12 >= 0);
  REQUIRE(t13 >= 0);
  REQUIRE(c >= 0);
  CHECK(subgroup_generated(s, {t12}).members == std::vector<int>{std::min(s->identity(), t12), std::max(s->identity(), t12)});
  CHECK(subgroup_generated(s, {t12, t13}).order() == 6);
  CHECK(subgroup_generated(s, {}).order() == 1);
  CHECK_THROWS_AS(subgroup_generated(s, {6}), Error);
  const Subgroup h12 = subgroup_generated(s, {t12}), h13 = subgroup_generated(s, {t13});
  CHECK(subgroup_intersect(h12, h13).order() == 1);
  CHECK(subgroup_intersect(h12, h12) == h12);
  const Subgroup a3 = subgroup_generated(s, {c});
  CHECK(subgroup_intersect(a3, whole_group(s)) == a3);
  const auto other = make_group(FiniteGroup::symmetric(3));
  CHECK_THROWS_AS(subgroup_intersect(h12, trivial_subgroup(other)), Error);
}

TEST_CASE("property: generated subgroup is the smallest containing the generators") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const std::vector<GroupPtr> groups{make_group(FiniteGroup::symmetric(3)), make_group(FiniteGroup::dihedral(4)),
                                     make_group(FiniteGroup::direct_product(z2, FiniteGroup::cyclic(4))),
                                     make_group(FiniteGroup::cyclic(6))};
  for (const auto& g : groups) {
    const auto subs = all_subgroups(*g);
    for (int x = 0; x < g->order(); ++x)
      for (int y = x; y < g->order(); ++y) {
        const Subgroup h = subgroup_generated(g, {x, y});
        check_closed(h);
        CHECK(std::find(subs.begin(), subs.end(), h.members) != subs.end());
        for (const auto& s : subs)
          if (std::binary_search(s.begin(), s.end(), x) && std::binary_search(s.begin(), s.end(), y))
            CHECK(std::includes(s.begin(), s.end(), h.members.begin(), h.members.end()));
      }
  }
}

TEST_CASE("morphism_check") {
  const auto s = make_group(FiniteGroup::from_table(s3_by_hand()));
  const auto z2 = make_group(FiniteGroup::cyclic(2));
  const auto id = morphism_check(identity_morphism(s));
  CHECK(id.ok);
  CHECK(id.injective);
  CHECK(id.surjective);
  const auto trivial_map = morphism_check(GroupMorphism{z2, z2, {0, 0}});
  CHECK(trivial_map.ok);
  CHECK_FALSE(trivial_map.injective);
  GroupMorphism sign{s, z2, {}};
  for (const auto& p : perms3()) sign.map.push_back(parity(p));
  const auto sg = morphism_check(sign);
  CHECK(sg.ok);
  CHECK(sg.surjective);
  CHECK_FALSE(sg.injective);
  // "sign" with one value flipped breaks the law
  GroupMorphism broken = sign;
  broken.map[1] ^= 1;
  const auto b = morphism_check(broken);
  CHECK_FALSE(b.ok);
  CHECK(broken(s->mul(b.x, b.y)) != z2->mul(broken(b.x), broken(b.y)));
  CHECK_THROWS_AS(require_morphism(broken), Error);
}

TEST_CASE("property: morphism_check agrees with the exhaustive law") {
  const auto z4 = make_group(FiniteGroup::cyclic(4));
  const auto z2 = make_group(FiniteGroup::cyclic(2));
  // every map Z4 -> Z2 sending the identity to the identity
  for (int m = 0; m < 8; ++m) {
    GroupMorphism f{z4, z2, {0, m & 1, m >> 1 & 1, m >> 2 & 1}};
    bool law = true;
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) law = law && f(z4->mul(x, y)) == z2->mul(f(x), f(y));
    CHECK(morphism_check(f).ok == law);
  }
}
