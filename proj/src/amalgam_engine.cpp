#include "amalgam/amalgam_engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "amalgam/errors.hpp"

namespace amalgam {

void AmalgamFamily::validate() const {
  const auto nv = static_cast<int>(vertices.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const std::string name = "edge " + std::to_string(e.a) + "-" + std::to_string(e.b);
    require(e.a >= 0 && e.b >= 0 && e.a < nv && e.b < nv && e.a != e.b, "BadVertexIndex", name);
    require(e.into_a.domain == e.group && e.into_b.domain == e.group, "BadMorphism", name + ": domain is not the edge group");
    require(e.into_a.codomain == vertices[e.a] && e.into_b.codomain == vertices[e.b], "BadMorphism",
            name + ": codomain is not the vertex group");
    require_injective(e.into_a, name + " into " + std::to_string(e.a));
    require_injective(e.into_b, name + " into " + std::to_string(e.b));
    for (std::size_t l = 0; l < k; ++l) {
      const Edge& f = edges[l];
      require(!(std::min(f.a, f.b) == std::min(e.a, e.b) && std::max(f.a, f.b) == std::max(e.a, e.b)), "DuplicateEdge", name);
    }
  }
}

std::vector<int> AmalgamFamily::edges_at(int v) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < edges.size(); ++k)
    if (edges[k].a == v || edges[k].b == v) out.push_back(static_cast<int>(k));
  return out;
}

const GroupMorphism& AmalgamFamily::into(int e, int v) const {
  const Edge& ed = edges[e];
  if (ed.a == v) return ed.into_a;
  require(ed.b == v, "BadVertexIndex", "vertex is not an endpoint of the edge");
  return ed.into_b;
}

std::string word_str(const AmalgamWord& w, const std::vector<GroupPtr>& vertices) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += " ";
    const Letter& l = w[k];
    out += std::to_string(l.vertex) + ":" + vertices.at(l.vertex)->label(l.element);
  }
  return out;
}

Transversal right_transversal(const Subgroup& h) {
  const FiniteGroup& G = *h.parent;
  Transversal t;
  t.subgroup = h;
  t.coset_of.assign(G.order(), -1);
  t.h_part.assign(G.order(), -1);
  auto claim = [&](int rep) {
    const int idx = static_cast<int>(t.reps.size());
    t.reps.push_back(rep);
    for (int x : h.members) {
      const int g = G.mul(x, rep);
      t.coset_of[g] = idx;
      t.h_part[g] = x;
    }
  };
  claim(G.identity());
  for (int g = 0; g < G.order(); ++g)
    if (t.coset_of[g] < 0) claim(g);
  return t;
}

TwoFactor TwoFactor::from_edge(const AmalgamFamily& fam, int edge) {
  const Edge& e = fam.edges.at(edge);
  return {fam.vertices[e.a], fam.vertices[e.b], e.group, e.into_a, e.into_b};
}

TwoFactor TwoFactor::trivial_over(GroupPtr g1, GroupPtr g2) {
  GroupPtr h = make_group(FiniteGroup::trivial());
  GroupMorphism i1{h, g1, {g1->identity()}};
  GroupMorphism i2{h, g2, {g2->identity()}};
  return {std::move(g1), std::move(g2), h, i1, i2};
}

TwoFactorReducer::TwoFactorReducer(TwoFactor data) : d_(std::move(data)) {
  require_injective(d_.into1, "amalgamated subgroup into first factor");
  require_injective(d_.into2, "amalgamated subgroup into second factor");
  const GroupMorphism* into[2] = {&d_.into1, &d_.into2};
  const GroupPtr g[2] = {d_.g1, d_.g2};
  for (int s = 0; s < 2; ++s) {
    t_[s] = right_transversal(image(*into[s]));
    back_[s].assign(g[s]->order(), -1);
    for (int x = 0; x < d_.h->order(); ++x) back_[s][(*into[s])(x)] = x;
  }
}

void TwoFactorReducer::left_multiply(State& s, const Letter& x) const {
  require(x.vertex == 0 || x.vertex == 1, "BadVertexIndex", "letter vertex " + std::to_string(x.vertex));
  const int side = x.vertex;
  const FiniteGroup& G = side == 0 ? *d_.g1 : *d_.g2;
  require(x.element >= 0 && x.element < G.order(), "IndexOutOfRange", "letter element " + std::to_string(x.element));
  const GroupMorphism& into = side == 0 ? d_.into1 : d_.into2;
  int y = G.mul(x.element, into(s.h));
  if (!s.t.empty() && s.t.front().vertex == side) {
    y = G.mul(y, s.t.front().element);
    s.t.erase(s.t.begin());
  }
  const Transversal& tr = t_[side];
  const int rep = tr.reps[tr.coset_of[y]];
  s.h = back_[side][tr.h_part[y]];
  if (rep != G.identity()) s.t.insert(s.t.begin(), Letter{side, rep});
}

AmalgamWord TwoFactorReducer::reduce(const AmalgamWord& w) const {
  State s{d_.h->identity(), {}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) left_multiply(s, *it);
  AmalgamWord out;
  if (s.h != d_.h->identity()) out.push_back(Letter{0, d_.into1(s.h)});
  out.insert(out.end(), s.t.begin(), s.t.end());
  return out;
}

int TwoFactorReducer::syllables(const AmalgamWord& normal, const TwoFactor& data) {
  if (normal.empty()) return 0;
  const auto img = image(data.into1);
  const bool has_h = normal.front().vertex == 0 && img.contains(normal.front().element);
  return static_cast<int>(normal.size()) - (has_h ? 1 : 0);
}

AmalgamWord reduce_two_factor(const TwoFactor& data, const AmalgamWord& w) { return TwoFactorReducer(data).reduce(w); }

long long count_normal_forms(const TwoFactor& data, int n) {
  require(n >= 0, "BadLength", "negative syllable length");
  const long long h = data.h->order();
  if (n == 0) return h;
  const long long i1 = data.g1->order() / h - 1;
  const long long i2 = data.g2->order() / h - 1;
  long long total = 0;
  for (int start = 0; start < 2; ++start) {
    long long p = 1;
    for (int k = 0; k < n; ++k) p *= ((start + k) % 2 == 0) ? i1 : i2;
    total += p;
  }
  return h * total;
}

std::string Presentation::str() const {
  std::ostringstream os;
  os << "gens:";
  for (const auto& g : generators) os << ' ' << g;
  os << '\n';
  for (const auto& r : relators) {
    os << "rel:";
    for (int x : r) os << ' ' << generators.at(std::abs(x) - 1) << (x < 0 ? "^-1" : "");
    os << '\n';
  }
  return os.str();
}

Presentation Presentation::parse(const std::string& text) {
  Presentation p;
  std::map<std::string, int> index;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    if (head == "gens:") {
      std::string g;
      while (ls >> g) {
        require(!index.count(g), "ParseError", "duplicate generator " + g);
        p.generators.push_back(g);
        index[g] = static_cast<int>(p.generators.size());
      }
    } else if (head == "rel:") {
      std::vector<int> r;
      std::string tok;
      while (ls >> tok) {
        int sign = 1;
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
          sign = -1;
          tok.resize(tok.size() - 3);
        }
        auto it = index.find(tok);
        require(it != index.end(), "ParseError", "undeclared generator " + tok);
        r.push_back(sign * it->second);
      }
      p.relators.push_back(std::move(r));
    } else {
      throw Error("ParseError", "unknown line '" + line + "'");
    }
  }
  return p;
}

FamilyPresentation presentation_of_family(const AmalgamFamily& fam) {
  fam.validate();
  FamilyPresentation out;
  Presentation& p = out.presentation;
  out.generator_of.resize(fam.vertices.size());
  for (std::size_t v = 0; v < fam.vertices.size(); ++v) {
    const FiniteGroup& G = *fam.vertices[v];
    out.generator_of[v].assign(G.order(), 0);
    for (int g = 0; g < G.order(); ++g) {
      if (g == G.identity()) continue;
      p.generators.push_back("v" + std::to_string(v) + "_" + std::to_string(g));
      out.generator_of[v][g] = static_cast<int>(p.generators.size());
    }
  }
  for (std::size_t v = 0; v < fam.vertices.size(); ++v) {
    const FiniteGroup& G = *fam.vertices[v];
    const auto& gen = out.generator_of[v];
    for (int x = 0; x < G.order(); ++x) {
      if (x == G.identity()) continue;
      for (int y = 0; y < G.order(); ++y) {
        if (y == G.identity()) continue;
        const int z = G.mul(x, y);
        if (z == G.identity())
          p.relators.push_back({gen[x], gen[y]});
        else
          p.relators.push_back({gen[x], gen[y], -gen[z]});
      }
    }
  }
  for (const Edge& e : fam.edges) {
    for (int h = 0; h < e.group->order(); ++h) {
      if (h == e.group->identity()) continue;
      p.relators.push_back({out.generator_of[e.a][e.into_a(h)], -out.generator_of[e.b][e.into_b(h)]});
    }
  }
  return out;
}

namespace {

std::vector<int> free_reduce(const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

std::vector<int> cyclic_reduce(std::vector<int> w) {
  w = free_reduce(w);
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  return std::vector<int>(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
}

std::vector<int> inverse_word(const std::vector<int>& w) {
  std::vector<int> r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

// Smallest rotation of the word or its inverse.
std::vector<int> canonical_cyclic(const std::vector<int>& w) {
  std::vector<int> best = w;
  for (const auto& base : {w, inverse_word(w)})
    for (std::size_t s = 0; s < base.size(); ++s) {
      std::vector<int> r(base.begin() + static_cast<std::ptrdiff_t>(s), base.end());
      r.insert(r.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(s));
      if (r < best) best = r;
    }
  return best;
}

std::vector<int> substitute(const std::vector<int>& w, int gen, const std::vector<int>& repl) {
  std::vector<int> out;
  const auto inv = inverse_word(repl);
  for (int x : w) {
    if (x == gen)
      out.insert(out.end(), repl.begin(), repl.end());
    else if (x == -gen)
      out.insert(out.end(), inv.begin(), inv.end());
    else
      out.push_back(x);
  }
  return out;
}

}  // namespace

Presentation simplify_presentation(const Presentation& p) {
  const auto n = static_cast<int>(p.generators.size());
  std::vector<bool> alive(n + 1, true);
  std::vector<std::vector<int>> rels = p.relators;
  auto normalize = [&]() {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    std::set<int> involutions;
    for (auto& r : rels) {
      r = cyclic_reduce(r);
      if (r.size() == 2 && std::abs(r[0]) == std::abs(r[1]) && r[0] == r[1]) involutions.insert(std::abs(r[0]));
    }
    for (auto r : rels) {
      // an involution equals its inverse, and squares of involutions vanish
      bool changed = true;
      while (changed && !(r.size() == 2 && r[0] == r[1] && involutions.count(std::abs(r[0])))) {
        changed = false;
        for (int& x : r)
          if (x < 0 && involutions.count(-x)) {
            x = -x;
            changed = true;
          }
        std::vector<int> t;
        for (int x : r) {
          if (!t.empty() && t.back() == x && involutions.count(x))
            t.pop_back();
          else if (!t.empty() && t.back() == -x)
            t.pop_back();
          else
            t.push_back(x);
        }
        while (t.size() >= 2 && (t.front() == -t.back() || (t.front() == t.back() && involutions.count(std::abs(t.front()))))) {
          t.erase(t.begin());
          t.pop_back();
        }
        if (t != r) changed = true;
        r = t;
      }
      if (r.empty()) continue;
      auto c = canonical_cyclic(r);
      if (seen.insert(c).second) out.push_back(c);
    }
    rels = std::move(out);
  };
  bool progress = true;
  while (progress) {
    progress = false;
    normalize();
    // x = 1, x = y^{+-1}
    for (const auto& r : rels) {
      int gen = 0;
      std::vector<int> repl;
      if (r.size() == 1) {
        gen = std::abs(r[0]);
      } else if (r.size() == 2 && std::abs(r[0]) != std::abs(r[1])) {
        // r0 r1 = 1 -> eliminate the larger generator
        const int a = r[0], b = r[1];
        const int big = std::abs(a) > std::abs(b) ? a : b;
        const int small = big == a ? b : a;
        gen = std::abs(big);
        // big = small^{-1} as signed letters
        repl = {big > 0 ? -small : small};
      }
      if (gen) {
        alive[gen] = false;
        for (auto& s : rels) s = substitute(s, gen, repl);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    // length-three definitions c = a b
    for (const auto& r : rels) {
      if (r.size() != 3) continue;
      int target = 0;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        int occ = 0;
        for (int x : r) occ += std::abs(x) == std::abs(r[k]);
        if (occ == 1 && std::abs(r[k]) > target) {
          target = std::abs(r[k]);
          pos = k;
        }
      }
      if (!target) continue;
      // rotate so the target is last: u v t = 1 -> t = (u v)^-1
      std::vector<int> rot;
      for (std::size_t k = 1; k <= 3; ++k) rot.push_back(r[(pos + k) % 3]);
      const int t = rot[2];
      std::vector<int> uv = {rot[0], rot[1]};
      std::vector<int> repl = t > 0 ? inverse_word(uv) : uv;
      const auto def = r;
      alive[target] = false;
      std::vector<std::vector<int>> next;
      for (auto& s : rels)
        if (s != def) next.push_back(substitute(s, target, repl));
      rels = std::move(next);
      progress = true;
      break;
    }
  }
  normalize();
  Presentation out;
  std::vector<int> renum(n + 1, 0);
  for (int g = 1; g <= n; ++g)
    if (alive[g]) {
      out.generators.push_back(p.generators[g - 1]);
      renum[g] = static_cast<int>(out.generators.size());
    }
  for (const auto& r : rels) {
    std::vector<int> w;
    for (int x : r) w.push_back(x > 0 ? renum[x] : -renum[-x]);
    out.relators.push_back(canonical_cyclic(w));
  }
  std::sort(out.relators.begin(), out.relators.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return out;
}

int evaluate_word(const AmalgamWord& w, const AmalgamFamily& fam, const std::vector<GroupMorphism>& maps) {
  require(maps.size() == fam.vertices.size(), "BadMorphism", "one map per vertex required");
  require(!maps.empty(), "BadMorphism", "no vertex maps");
  const GroupPtr K = maps[0].codomain;
  for (std::size_t v = 0; v < maps.size(); ++v) {
    require(maps[v].domain == fam.vertices[v], "BadMorphism", "map domain differs from vertex " + std::to_string(v));
    require(maps[v].codomain == K || maps[v].codomain->table() == K->table(), "BadMorphism", "maps have different targets");
    require_morphism(maps[v]);
  }
  for (const Edge& e : fam.edges)
    for (int h = 0; h < e.group->order(); ++h)
      if (maps[e.a](e.into_a(h)) != maps[e.b](e.into_b(h)))
        throw Error("EdgeCompatibilityViolation",
                    "(" + std::to_string(e.a) + "," + std::to_string(e.b) + "," + std::to_string(h) + ")");
  int acc = K->identity();
  for (const Letter& l : w) {
    require(l.vertex >= 0 && l.vertex < static_cast<int>(maps.size()), "BadVertexIndex", std::to_string(l.vertex));
    acc = K->mul(acc, maps[l.vertex](l.element));
  }
  return acc;
}

}  // namespace amalgam
