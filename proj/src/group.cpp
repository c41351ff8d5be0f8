#include "amalgam/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "amalgam/errors.hpp"
#include "amalgam/kernels.hpp"

namespace amalgam {

namespace {

std::string cycle_label(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  std::string out;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s] || p[s] == static_cast<int>(s)) continue;
    out += '(';
    std::size_t k = s;
    bool first = true;
    while (!seen[k]) {
      seen[k] = true;
      if (!first && p.size() > 9) out += ' ';
      out += std::to_string(k + 1);
      first = false;
      k = static_cast<std::size_t>(p[k]);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(const Table& mul, std::vector<std::string> labels) {
  return build(mul, std::move(labels), true);
}

FiniteGroup FiniteGroup::from_action_table(const Table& mul, std::vector<std::string> labels) {
  return build(mul, std::move(labels), false);
}

FiniteGroup FiniteGroup::build(const Table& mul, std::vector<std::string> labels, bool check_assoc) {
  const auto n = static_cast<int>(mul.size());
  require(n >= 1, "BadTable", "empty multiplication table");
  require(n <= kMaxOrder, "TooLarge", "order " + std::to_string(n) + " exceeds " + std::to_string(kMaxOrder));
  FiniteGroup g;
  g.n_ = n;
  g.mul_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    require(static_cast<int>(mul[a].size()) == n, "BadTable", "row " + std::to_string(a) + " has wrong length");
    for (int b = 0; b < n; ++b) {
      const int c = mul[a][b];
      require(c >= 0 && c < n, "IndexOutOfRange",
              "entry (" + std::to_string(a) + "," + std::to_string(b) + ") = " + std::to_string(c));
      g.mul_[static_cast<std::size_t>(a) * n + b] = c;
    }
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = g.mul(a, b) == b && g.mul(b, a) == b;
    if (ok) e = a;
  }
  if (e < 0) {
    // name the element that fails as a left identity candidate first
    int witness = 0;
    for (int a = 0; a < n; ++a)
      if (g.mul(a, a) == a) {
        witness = a;
        break;
      }
    throw Error("NoIdentity", "no two-sided identity; element " + std::to_string(witness) + " is not one");
  }
  g.e_ = e;
  g.inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == e && g.mul(b, a) == e) {
        g.inv_[a] = b;
        break;
      }
    if (g.inv_[a] < 0) throw Error("NoInverse", "element " + std::to_string(a) + " has no two-sided inverse");
  }
  if (auto w = check_assoc ? kernels::group_assoc_parallel(g.mul_, n) : kernels::Witness{}) {
    const auto [a, b, c] = *w;
    throw Error("NotAssociative", "triple (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
  }
  if (labels.empty()) {
    labels.resize(n);
    for (int a = 0; a < n; ++a) labels[a] = a == e ? "e" : "g" + std::to_string(a);
  }
  require(static_cast<int>(labels.size()) == n, "BadTable", "label count differs from order");
  g.labels_ = std::move(labels);
  return g;
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<int>>& gens) {
  std::size_t deg = 0;
  for (const auto& p : gens) deg = std::max(deg, p.size());
  if (deg == 0) return trivial();
  auto pad = [deg](std::vector<int> p) {
    for (std::size_t k = p.size(); k < deg; ++k) p.push_back(static_cast<int>(k));
    std::vector<bool> hit(deg, false);
    for (int x : p) {
      require(x >= 0 && static_cast<std::size_t>(x) < deg && !hit[x], "BadPermutation", "image list is not a permutation");
      hit[x] = true;
    }
    return p;
  };
  std::vector<std::vector<int>> gp;
  for (const auto& p : gens) gp.push_back(pad(p));
  std::vector<int> id(deg);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  // right multiplication by generators; x*y means apply x then y
  auto compose = [deg](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> r(deg);
    for (std::size_t k = 0; k < deg; ++k) r[k] = y[x[k]];
    return r;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& s : gp) {
      auto r = compose(elems[i], s);
      if (!index.count(r)) {
        require(static_cast<int>(elems.size()) < kMaxOrder, "TooLarge", "permutation closure exceeds order bound");
        index.emplace(r, static_cast<int>(elems.size()));
        elems.push_back(std::move(r));
      }
    }
  }
  const auto n = static_cast<int>(elems.size());
  Table mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mul[a][b] = index.at(compose(elems[a], elems[b]));
  std::vector<std::string> labels;
  for (const auto& p : elems) labels.push_back(cycle_label(p));
  return from_table(mul, labels);
}

FiniteGroup FiniteGroup::trivial() { return from_table({{0}}, {"e"}); }

FiniteGroup FiniteGroup::cyclic(int n) {
  require(n >= 1, "BadOrder", "cyclic group of order < 1");
  Table mul(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = a == 0 ? "e" : (a == 1 ? "a" : "a^" + std::to_string(a));
    for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  return from_table(mul, labels);
}

FiniteGroup FiniteGroup::symmetric(int n) {
  require(n >= 1, "BadOrder", "symmetric group on < 1 point");
  std::vector<std::vector<int>> gens;
  if (n >= 2) {
    std::vector<int> t(n), c(n);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[0], t[1]);
    for (int k = 0; k < n; ++k) c[k] = (k + 1) % n;
    gens = {t, c};
  } else {
    gens = {{0}};
  }
  return from_permutations(gens);
}

FiniteGroup FiniteGroup::dihedral(int n) {
  require(n >= 1, "BadOrder", "dihedral group with n < 1");
  // elements r^k s^f encoded as k + n*f
  const int N = 2 * n;
  Table mul(N, std::vector<int>(N));
  std::vector<std::string> labels(N);
  for (int x = 0; x < N; ++x) {
    const int k = x % n, f = x / n;
    std::string r = k == 0 ? "" : (k == 1 ? "r" : "r^" + std::to_string(k));
    labels[x] = f ? r + "s" : (r.empty() ? "e" : r);
    for (int y = 0; y < N; ++y) {
      const int l = y % n, h = y / n;
      // r^k s^f r^l s^h = r^(k + (-1)^f l) s^(f+h)
      const int kk = ((k + (f ? -l : l)) % n + n) % n;
      mul[x][y] = kk + n * ((f + h) % 2);
    }
  }
  return from_table(mul, labels);
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  require(static_cast<long>(na) * nb <= kMaxOrder, "TooLarge", "direct product exceeds order bound");
  const int n = na * nb;
  Table mul(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    labels[x] = "(" + a.label(x / nb) + "," + b.label(x % nb) + ")";
    for (int y = 0; y < n; ++y) mul[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  return from_action_table(mul, labels);
}

Table FiniteGroup::table() const {
  Table t(n_, std::vector<int>(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) t[a][b] = mul(a, b);
  return t;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

int FiniteGroup::power(int a, long k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  int r = e_;
  int base = a;
  while (k) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

int FiniteGroup::element_order(int a) const {
  int k = 1;
  for (int x = a; x != e_; x = mul(x, a)) ++k;
  return k;
}

int FiniteGroup::find_label(const std::string& s) const {
  for (int a = 0; a < n_; ++a)
    if (labels_[a] == s) return a;
  return -1;
}

bool Subgroup::contains(int g) const { return std::binary_search(members.begin(), members.end(), g); }

Subgroup subgroup_generated(const GroupPtr& g, const std::vector<int>& gens) {
  for (int x : gens)
    require(x >= 0 && x < g->order(), "IndexOutOfRange", "generator " + std::to_string(x) + " outside group");
  std::vector<bool> in(g->order(), false);
  std::vector<int> members{g->identity()};
  in[g->identity()] = true;
  // closure under right multiplication by generators suffices in a finite group
  for (std::size_t i = 0; i < members.size(); ++i)
    for (int s : gens) {
      const int y = g->mul(members[i], s);
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  std::sort(members.begin(), members.end());
  return {g, members};
}

Subgroup subgroup_intersect(const Subgroup& a, const Subgroup& b) {
  require(a.parent == b.parent, "ParentMismatch", "subgroups of different groups");
  Subgroup out{a.parent, {}};
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(out.members));
  return out;
}

Subgroup whole_group(const GroupPtr& g) {
  Subgroup s{g, std::vector<int>(g->order())};
  std::iota(s.members.begin(), s.members.end(), 0);
  return s;
}

Subgroup trivial_subgroup(const GroupPtr& g) { return {g, {g->identity()}}; }

Subgroup make_subgroup(const GroupPtr& g, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (int x : members) require(x >= 0 && x < g->order(), "IndexOutOfRange", "member " + std::to_string(x));
  Subgroup s{g, members};
  require(s.contains(g->identity()), "NotSubgroup", "identity missing");
  for (int x : members) {
    require(s.contains(g->inv(x)), "NotSubgroup", "inverse of " + std::to_string(x) + " missing");
    for (int y : members)
      require(s.contains(g->mul(x, y)), "NotSubgroup",
              "product of " + std::to_string(x) + " and " + std::to_string(y) + " missing");
  }
  return s;
}

MorphismCheck morphism_check(const GroupMorphism& f) {
  const FiniteGroup& D = *f.domain;
  const FiniteGroup& C = *f.codomain;
  require(static_cast<int>(f.map.size()) == D.order(), "BadMorphism", "map table is not total");
  for (int x : f.map) require(x >= 0 && x < C.order(), "IndexOutOfRange", "image " + std::to_string(x));
  MorphismCheck r;
  for (int x = 0; x < D.order() && r.ok; ++x)
    for (int y = 0; y < D.order(); ++y)
      if (f(D.mul(x, y)) != C.mul(f(x), f(y))) {
        r.ok = false;
        r.x = x;
        r.y = y;
        break;
      }
  std::vector<bool> hit(C.order(), false);
  int distinct = 0;
  for (int x : f.map)
    if (!hit[x]) {
      hit[x] = true;
      ++distinct;
    }
  r.injective = distinct == D.order();
  r.surjective = distinct == C.order();
  return r;
}

void require_morphism(const GroupMorphism& f) {
  auto r = morphism_check(f);
  if (!r.ok) throw Error("NotHomomorphism", "pair (" + std::to_string(r.x) + "," + std::to_string(r.y) + ")");
}

void require_injective(const GroupMorphism& f, const std::string& what) {
  auto r = morphism_check(f);
  if (!r.ok)
    throw Error("NotHomomorphism", what + ": pair (" + std::to_string(r.x) + "," + std::to_string(r.y) + ")");
  if (!r.injective) throw Error("NotInjective", what);
}

GroupMorphism identity_morphism(const GroupPtr& g) {
  GroupMorphism f{g, g, std::vector<int>(g->order())};
  std::iota(f.map.begin(), f.map.end(), 0);
  return f;
}

GroupMorphism compose(const GroupMorphism& second, const GroupMorphism& first) {
  require(first.codomain == second.domain || first.codomain->table() == second.domain->table(), "BadComposition",
          "codomain and domain differ");
  GroupMorphism f{first.domain, second.codomain, std::vector<int>(first.map.size())};
  for (std::size_t x = 0; x < first.map.size(); ++x) f.map[x] = second.map[first.map[x]];
  return f;
}

Subgroup image(const GroupMorphism& f) {
  std::vector<int> m(f.map);
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return {f.codomain, m};
}

SubgroupGroup subgroup_as_group(const Subgroup& s) {
  const FiniteGroup& G = *s.parent;
  const auto n = s.order();
  std::vector<int> index_of(G.order(), -1);
  for (int k = 0; k < n; ++k) index_of[s.members[k]] = k;
  Table mul(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = G.label(s.members[a]);
    for (int b = 0; b < n; ++b) {
      const int c = index_of[G.mul(s.members[a], s.members[b])];
      require(c >= 0, "NotSubgroup", "member set not closed");
      mul[a][b] = c;
    }
  }
  GroupPtr h = make_group(FiniteGroup::from_table(mul, labels));
  return {h, GroupMorphism{h, s.parent, s.members}, index_of};
}

}  // namespace amalgam
