#include <algorithm>
#include <deque>

#include "amalgam/amalgam_engine.hpp"
#include "amalgam/errors.hpp"

namespace amalgam {

namespace {

class Enumerator {
public:
  Enumerator(int ngens, long max_live, long max_defined)
      : cols_(2 * ngens), max_live_(max_live), max_defined_(max_defined) {}

  static int col(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }
  static int inv_col(int c) { return c ^ 1; }

  bool overflow() const { return overflow_; }
  long live() const { return live_; }
  long peak() const { return peak_; }
  long defined() const { return static_cast<long>(parent_.size()); }
  bool alive(int c) const { return parent_[c] == c; }
  int entry(int c, int x) const { return table_[static_cast<std::size_t>(c) * cols_ + x]; }
  int cols() const { return cols_; }

  int define() {
    if (live_ >= max_live_ || defined() >= max_defined_) {
      overflow_ = true;
      return -1;
    }
    const int c = static_cast<int>(parent_.size());
    parent_.push_back(c);
    table_.resize(table_.size() + cols_, -1);
    ++live_;
    peak_ = std::max(peak_, live_);
    return c;
  }

  bool define_edge(int c, int x) {
    const int d = define();
    if (d < 0) return false;
    set(c, x, d);
    set(d, inv_col(x), c);
    return true;
  }

  // Returns false on overflow.
  bool scan_and_fill(int c, const std::vector<int>& w) {
    if (w.empty()) return true;
    int f = c, b = c;
    long i = 0, j = static_cast<long>(w.size()) - 1;
    for (;;) {
      while (i <= j && entry(f, col(w[i])) >= 0) f = entry(f, col(w[i++]));
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && entry(b, inv_col(col(w[j]))) >= 0) b = entry(b, inv_col(col(w[j--])));
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        set(f, col(w[i]), b);
        set(b, inv_col(col(w[i])), f);
        return true;
      }
      if (!define_edge(f, col(w[i]))) return false;
    }
  }

private:
  void set(int c, int x, int d) { table_[static_cast<std::size_t>(c) * cols_ + x] = d; }

  int rep(int c) {
    int r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      const int n = parent_[c];
      parent_[c] = r;
      c = n;
    }
    return r;
  }

  void merge(int a, int b, std::deque<int>& q) {
    const int p = rep(a), s = rep(b);
    if (p == s) return;
    const int lo = std::min(p, s), hi = std::max(p, s);
    parent_[hi] = lo;
    --live_;
    q.push_back(hi);
  }

  void coincidence(int a, int b) {
    std::deque<int> q;
    merge(a, b, q);
    while (!q.empty()) {
      const int g = q.front();
      q.pop_front();
      for (int x = 0; x < cols_; ++x) {
        const int d = entry(g, x);
        if (d < 0) continue;
        if (entry(d, inv_col(x)) == g) set(d, inv_col(x), -1);
        const int mu = rep(g), nu = rep(d);
        if (entry(mu, x) >= 0)
          merge(nu, entry(mu, x), q);
        else if (entry(nu, inv_col(x)) >= 0)
          merge(mu, entry(nu, inv_col(x)), q);
        else {
          set(mu, x, nu);
          set(nu, inv_col(x), mu);
        }
      }
    }
  }

  int cols_;
  long max_live_;
  long max_defined_;
  long live_ = 0;
  long peak_ = 0;
  bool overflow_ = false;
  std::vector<int> parent_;
  std::vector<int> table_;
};

}  // namespace

CosetResult coset_enumeration(const Presentation& p, const std::vector<std::vector<int>>& subgroup_gens,
                              long max_cosets) {
  require(max_cosets >= 1, "BadBound", "max_cosets must be positive");
  const auto ngens = static_cast<int>(p.generators.size());
  for (const auto* rels : {&p.relators, &subgroup_gens})
    for (const auto& r : *rels)
      for (int x : r) require(x != 0 && std::abs(x) <= ngens, "BadRelator", "letter " + std::to_string(x));

  CosetResult res;
  Enumerator en(ngens, max_cosets, std::max(64L, 20 * max_cosets));
  en.define();
  bool ok = true;
  for (const auto& w : subgroup_gens)
    if (!(ok = en.scan_and_fill(0, w))) break;
  for (int c = 0; ok && c < en.defined(); ++c) {
    for (const auto& r : p.relators) {
      if (!en.alive(c)) break;
      if (!(ok = en.scan_and_fill(c, r))) break;
    }
    for (int x = 0; ok && en.alive(c) && x < en.cols(); ++x)
      if (en.entry(c, x) < 0) ok = en.define_edge(c, x);
  }
  res.max_live = en.peak();
  res.defined = en.defined();
  if (!ok || en.overflow()) {
    res.complete = false;
    res.cosets = en.live();
    return res;
  }
  res.complete = true;
  std::vector<int> renum(en.defined(), -1);
  int n = 0;
  for (int c = 0; c < en.defined(); ++c)
    if (en.alive(c)) renum[c] = n++;
  res.cosets = n;
  res.table.assign(n, std::vector<int>(en.cols()));
  for (int c = 0; c < en.defined(); ++c)
    if (en.alive(c))
      for (int x = 0; x < en.cols(); ++x) {
        const int d = en.entry(c, x);
        require(d >= 0 && renum[d] >= 0, "InternalError", "incomplete coset table");
        res.table[renum[c]][x] = renum[d];
      }

  if (subgroup_gens.empty() || std::all_of(subgroup_gens.begin(), subgroup_gens.end(),
                                           [](const auto& w) { return w.empty(); })) {
    if (n > FiniteGroup::kMaxOrder) return res;
    // coset c <-> group element word(c); c1 * c2 = c1 acted on by word(c2)
    std::vector<std::vector<int>> word(n);
    std::vector<bool> seen(n, false);
    std::deque<int> q{0};
    seen[0] = true;
    while (!q.empty()) {
      const int c = q.front();
      q.pop_front();
      for (int x = 0; x < en.cols(); ++x) {
        const int d = res.table[c][x];
        if (seen[d]) continue;
        seen[d] = true;
        word[d] = word[c];
        word[d].push_back(x);
        q.push_back(d);
      }
    }
    Table mul(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int c = a;
        for (int x : word[b]) c = res.table[c][x];
        mul[a][b] = c;
      }
    std::vector<std::string> labels(n);
    for (int c = 0; c < n; ++c) {
      if (word[c].empty()) {
        labels[c] = "e";
        continue;
      }
      std::string s;
      for (int x : word[c]) {
        if (!s.empty()) s += ' ';
        s += p.generators[x / 2] + (x % 2 ? "^-1" : "");
      }
      labels[c] = s;
    }
    res.group = make_group(FiniteGroup::from_action_table(mul, labels));
    res.generator_image.resize(ngens);
    for (int g = 0; g < ngens; ++g) res.generator_image[g] = res.table[0][2 * g];
  }
  return res;
}

}  // namespace amalgam
