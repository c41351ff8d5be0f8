#include "amalgam/star_algebra.hpp"

#include <algorithm>
#include <numeric>

#include "amalgam/errors.hpp"

namespace amalgam {

using linalg::Mat;

Vec StarAlgebra::mul(const Vec& x, const Vec& y) const {
  Vec out(dim);
  const auto D = static_cast<std::size_t>(dim);
  for (int i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j].is_zero()) continue;
      const Scalar c = x[i] * y[j];
      for (const auto& [k, s] : structure[i * D + j]) out[k].add_product(c, s);
    }
  }
  return out;
}

Vec StarAlgebra::star_of(const Vec& x) const {
  Vec out(dim);
  for (int i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    const Scalar c = x[i].conj();
    for (const auto& [k, s] : star[i]) out[k].add_product(c, s);
  }
  return out;
}

Scalar StarAlgebra::tau(const Vec& x) const {
  require(trace.has_value(), "NoTrace", "algebra has no trace");
  Scalar s;
  for (int i = 0; i < dim; ++i)
    if (!x[i].is_zero()) s.add_product(x[i], (*trace)[i]);
  return s;
}

Mat StarAlgebra::left_mult(const Vec& x) const {
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j) m.set_col(j, mul(x, basis(j)));
  return m;
}

Mat StarAlgebra::right_mult(const Vec& x) const {
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j) m.set_col(j, mul(basis(j), x));
  return m;
}

void StarAlgebra::validate() const {
  require(dim >= 1, "BadAlgebra", "dimension must be positive");
  require(static_cast<int>(structure.size()) == dim * dim, "BadAlgebra", "structure table has the wrong size");
  require(static_cast<int>(unit.size()) == dim && static_cast<int>(star.size()) == dim, "BadAlgebra",
          "unit or star has the wrong size");
  for (const auto& row : structure)
    for (const auto& [k, c] : row) require(k >= 0 && k < dim, "IndexOutOfRange", "structure index " + std::to_string(k));
  if (auto w = kernels::algebra_assoc_parallel(structure, dim)) {
    const auto [a, b, c] = *w;
    throw Error("NotAssociative", "triple (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
  }
  for (int i = 0; i < dim; ++i) {
    const Vec bi = basis(i);
    require(mul(unit, bi) == bi && mul(bi, unit) == bi, "BadUnit", "unit law fails at basis element " + std::to_string(i));
    require(star_of(star_of(bi)) == bi, "BadStar", "star is not involutive at " + std::to_string(i));
  }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Vec lhs = star_of(mul(basis(i), basis(j)));
      const Vec rhs = mul(star_of(basis(j)), star_of(basis(i)));
      require(lhs == rhs, "BadStar", "(xy)* != y*x* at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  if (trace) require(static_cast<int>(trace->size()) == dim, "BadAlgebra", "trace has the wrong size");
}

int StarAlgebra::matrix_size() const {
  require(has_matrix_structure(), "NoTensorStructure", "algebra has no matrix structure");
  return std::accumulate(matrix_factors.begin(), matrix_factors.end(), 1, std::multiplies<>());
}

namespace {

// basis index -> (row, col) for a product of matrix algebras, factor-major
std::pair<int, int> decode(const std::vector<int>& factors, int index) {
  int row = 0, col = 0, rest = index, stride = 1;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const int n = *it;
    const int digit = rest % (n * n);
    rest /= n * n;
    row += (digit / n) * stride;
    col += (digit % n) * stride;
    stride *= n;
  }
  return {row, col};
}

}  // namespace

Mat StarAlgebra::to_matrix(const Vec& x) const {
  const int n = matrix_size();
  Mat m(n, n);
  for (int i = 0; i < dim; ++i) {
    const auto [r, c] = decode(matrix_factors, i);
    m(r, c) = x[i];
  }
  return m;
}

Vec StarAlgebra::from_matrix(const Mat& m) const {
  const int n = matrix_size();
  require(static_cast<int>(m.rows()) == n && static_cast<int>(m.cols()) == n, "BadMatrix", "matrix size mismatch");
  Vec x(dim);
  for (int i = 0; i < dim; ++i) {
    const auto [r, c] = decode(matrix_factors, i);
    x[i] = m(r, c);
  }
  return x;
}

StarAlgebra scalars() {
  StarAlgebra a;
  a.dim = 1;
  a.labels = {"1"};
  a.structure = {{{0, Scalar(1)}}};
  a.unit = {Scalar(1)};
  a.star = {{{0, Scalar(1)}}};
  a.trace = Vec{Scalar(1)};
  return a;
}

StarAlgebra matrix_algebra(int n) {
  require(n >= 1, "BadDimension", "matrix size must be positive");
  StarAlgebra a;
  a.dim = n * n;
  a.structure.resize(static_cast<std::size_t>(a.dim) * a.dim);
  a.unit.assign(a.dim, Scalar());
  a.star.resize(a.dim);
  a.trace = Vec(a.dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int ij = i * n + j;
      a.labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      a.star[ij] = {{j * n + i, Scalar(1)}};
      for (int l = 0; l < n; ++l) a.structure[static_cast<std::size_t>(ij) * a.dim + j * n + l] = {{i * n + l, Scalar(1)}};
    }
  for (int i = 0; i < n; ++i) {
    a.unit[i * n + i] = Scalar(1);
    (*a.trace)[i * n + i] = Scalar::rational(1, n);
  }
  a.matrix_factors = {n};
  return a;
}

StarAlgebra tensor(const StarAlgebra& a, const StarAlgebra& b) {
  StarAlgebra t;
  t.dim = a.dim * b.dim;
  const auto D = static_cast<std::size_t>(t.dim);
  t.structure.resize(D * D);
  t.star.resize(t.dim);
  t.unit.assign(t.dim, Scalar());
  auto idx = [&](int x, int y) { return x * b.dim + y; };
  for (int x = 0; x < a.dim; ++x)
    for (int y = 0; y < b.dim; ++y) {
      t.labels.push_back(a.labels[x] + "(x)" + b.labels[y]);
      for (const auto& [p, c] : a.star[x])
        for (const auto& [q, d] : b.star[y]) t.star[idx(x, y)].emplace_back(idx(p, q), c * d);
      std::sort(t.star[idx(x, y)].begin(), t.star[idx(x, y)].end(),
                [](const auto& l, const auto& r) { return l.first < r.first; });
      if (!a.unit[x].is_zero() && !b.unit[y].is_zero()) t.unit[idx(x, y)] = a.unit[x] * b.unit[y];
    }
  const auto DA = static_cast<std::size_t>(a.dim), DB = static_cast<std::size_t>(b.dim);
  for (int x1 = 0; x1 < a.dim; ++x1)
    for (int y1 = 0; y1 < b.dim; ++y1)
      for (int x2 = 0; x2 < a.dim; ++x2)
        for (int y2 = 0; y2 < b.dim; ++y2) {
          SparseVec& out = t.structure[idx(x1, y1) * D + idx(x2, y2)];
          for (const auto& [p, c] : a.structure[x1 * DA + x2])
            for (const auto& [q, d] : b.structure[y1 * DB + y2]) out.emplace_back(idx(p, q), c * d);
          std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        }
  if (a.trace && b.trace) {
    t.trace = Vec(t.dim);
    for (int x = 0; x < a.dim; ++x)
      for (int y = 0; y < b.dim; ++y) (*t.trace)[idx(x, y)] = (*a.trace)[x] * (*b.trace)[y];
  }
  if (a.has_matrix_structure() && b.has_matrix_structure()) {
    t.matrix_factors = a.matrix_factors;
    t.matrix_factors.insert(t.matrix_factors.end(), b.matrix_factors.begin(), b.matrix_factors.end());
  }
  return t;
}

StarAlgebra group_star_algebra(const FiniteGroup& g) {
  StarAlgebra a;
  a.dim = g.order();
  a.labels = g.labels();
  const auto D = static_cast<std::size_t>(a.dim);
  a.structure.resize(D * D);
  a.star.resize(a.dim);
  a.unit.assign(a.dim, Scalar());
  a.unit[g.identity()] = Scalar(1);
  a.trace = Vec(a.dim);
  (*a.trace)[g.identity()] = Scalar(1);
  for (int x = 0; x < a.dim; ++x) {
    a.star[x] = {{g.inv(x), Scalar(1)}};
    for (int y = 0; y < a.dim; ++y) a.structure[x * D + y] = {{g.mul(x, y), Scalar(1)}};
  }
  return a;
}

StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b) {
  StarAlgebra s;
  s.dim = a.dim + b.dim;
  const auto D = static_cast<std::size_t>(s.dim);
  s.structure.resize(D * D);
  s.star.resize(s.dim);
  s.unit = a.unit;
  s.unit.insert(s.unit.end(), b.unit.begin(), b.unit.end());
  for (int x = 0; x < a.dim; ++x) {
    s.labels.push_back(a.labels[x] + "+0");
    s.star[x] = a.star[x];
    for (int y = 0; y < a.dim; ++y) s.structure[x * D + y] = a.structure[static_cast<std::size_t>(x) * a.dim + y];
  }
  for (int x = 0; x < b.dim; ++x) {
    s.labels.push_back("0+" + b.labels[x]);
    for (const auto& [k, c] : b.star[x]) s.star[a.dim + x].emplace_back(a.dim + k, c);
    for (int y = 0; y < b.dim; ++y)
      for (const auto& [k, c] : b.structure[static_cast<std::size_t>(x) * b.dim + y])
        s.structure[(a.dim + x) * D + a.dim + y].emplace_back(a.dim + k, c);
  }
  if (a.trace && b.trace) {
    s.trace = Vec(s.dim);
    for (int x = 0; x < a.dim; ++x) (*s.trace)[x] = (*a.trace)[x] * Scalar::rational(1, 2);
    for (int x = 0; x < b.dim; ++x) (*s.trace)[a.dim + x] = (*b.trace)[x] * Scalar::rational(1, 2);
  }
  return s;
}

StarAlgebra algebra_from_structure(int dim, std::vector<std::string> labels, SparseTable structure, Vec unit,
                                   std::vector<SparseVec> star, std::optional<Vec> trace) {
  StarAlgebra a;
  a.dim = dim;
  if (labels.empty())
    for (int i = 0; i < dim; ++i) labels.push_back("b" + std::to_string(i));
  require(static_cast<int>(labels.size()) == dim, "BadAlgebra", "label count differs from dimension");
  a.labels = std::move(labels);
  a.structure = std::move(structure);
  a.unit = std::move(unit);
  a.star = std::move(star);
  a.trace = std::move(trace);
  a.validate();
  return a;
}

SubalgebraSpan span_closure(const AlgebraPtr& a, const std::vector<Vec>& gens) {
  std::vector<Vec> g = gens;
  for (const Vec& x : gens) g.push_back(a->star_of(x));
  linalg::Subspace s(a->dim);
  std::vector<Vec> words;
  s.insert(a->unit);
  words.push_back(a->unit);
  for (std::size_t i = 0; i < words.size(); ++i)
    for (const Vec& y : g) {
      Vec w = a->mul(words[i], y);
      if (s.insert(w)) words.push_back(std::move(w));
    }
  return {a, std::move(s)};
}

bool is_closed_subalgebra(const SubalgebraSpan& s) {
  const StarAlgebra& a = *s.parent;
  if (!s.space.contains(a.unit)) return false;
  const auto& b = s.space.basis();
  for (const Vec& x : b) {
    if (!s.space.contains(a.star_of(x))) return false;
    for (const Vec& y : b)
      if (!s.space.contains(a.mul(x, y))) return false;
  }
  return true;
}

SubalgebraSpan subalgebra_of(const AlgebraPtr& a, const std::vector<Vec>& vectors) {
  SubalgebraSpan s{a, linalg::span_of(vectors, a->dim)};
  require(is_closed_subalgebra(s), "NotSubalgebra", "span is not a unital *-subalgebra");
  return s;
}

ExpectationLaws expectation_laws(const ConditionalExpectation& e) {
  ExpectationLaws l;
  const StarAlgebra& A = *e.source;
  const Mat& M = e.matrix;
  l.idempotent = M * M == M;
  for (int j = 0; j < A.dim && l.idempotent; ++j)
    if (!e.target.contains(M.col(j))) l.idempotent = false;
  const auto& tb = e.target.space.basis();
  for (const Vec& t : tb)
    if (M * t != t) l.identity_on_target = false;
  for (int j = 0; j < A.dim; ++j) {
    const Vec x = A.basis(j);
    if (M * A.star_of(x) != A.star_of(M * x)) l.star = false;
    if (A.trace && A.tau(M * x) != A.tau(x)) l.trace_preserving = false;
  }
  for (std::size_t p = 0; p < tb.size() && l.bimodule; ++p)
    for (std::size_t q = 0; q < tb.size() && l.bimodule; ++q)
      for (int j = 0; j < A.dim; ++j) {
        const Vec x = A.basis(j);
        if (M * A.mul(A.mul(tb[p], x), tb[q]) != A.mul(A.mul(tb[p], M * x), tb[q])) {
          l.bimodule = false;
          break;
        }
      }
  return l;
}

void require_expectation(const ConditionalExpectation& e) {
  const ExpectationLaws l = expectation_laws(e);
  require(l.idempotent, "NotExpectation", "not an idempotent onto the target");
  require(l.identity_on_target, "NotExpectation", "not the identity on the target");
  require(l.bimodule, "NotExpectation", "bimodule law fails");
  require(l.star, "NotExpectation", "does not commute with the star");
  require(l.trace_preserving, "NotExpectation", "does not preserve the trace");
}

ConditionalExpectation trace_expectation(const AlgebraPtr& a, TensorSide side) {
  require(a->matrix_factors.size() == 2, "NoTensorStructure", "needs exactly two matrix factors");
  const int n = a->matrix_factors[0], k = a->matrix_factors[1];
  const int db = k * k;
  Mat m(a->dim, a->dim);
  std::vector<Vec> range;
  for (int x = 0; x < n * n; ++x)
    for (int y = 0; y < db; ++y) {
      const int col = x * db + y;
      if (side == TensorSide::Left) {
        if (x / n != x % n) continue;
        for (int r = 0; r < n; ++r) m(static_cast<std::size_t>((r * n + r) * db + y), col) = Scalar::rational(1, n);
      } else {
        if (y / k != y % k) continue;
        for (int r = 0; r < k; ++r) m(static_cast<std::size_t>(x * db + r * k + r), col) = Scalar::rational(1, k);
      }
    }
  for (int j = 0; j < a->dim; ++j) range.push_back(m.col(j));
  return {a, {a, linalg::span_of(range, a->dim)}, std::move(m)};
}

bool is_unitary(const StarAlgebra& a, const Vec& u) {
  const Vec us = a.star_of(u);
  return a.mul(us, u) == a.unit && a.mul(u, us) == a.unit;
}

ConditionalExpectation conjugate_expectation(const ConditionalExpectation& e, const Vec& u) {
  const StarAlgebra& A = *e.source;
  require(is_unitary(A, u), "NotUnitary", "conjugating element is not unitary");
  const Vec us = A.star_of(u);
  Mat m(A.dim, A.dim);
  for (int j = 0; j < A.dim; ++j) m.set_col(j, A.mul(A.mul(u, e(A.mul(A.mul(us, A.basis(j)), u))), us));
  std::vector<Vec> t;
  for (const Vec& b : e.target.space.basis()) t.push_back(A.mul(A.mul(u, b), us));
  return {e.source, {e.source, linalg::span_of(t, A.dim)}, std::move(m)};
}

ConditionalExpectation scalar_expectation(const AlgebraPtr& a) {
  Mat m(a->dim, a->dim);
  for (int j = 0; j < a->dim; ++j) m.set_col(j, linalg::scale(a->tau(a->basis(j)), a->unit));
  return {a, {a, linalg::span_of({a->unit}, a->dim)}, std::move(m)};
}

ConditionalExpectation subgroup_expectation(const AlgebraPtr& ga, const Subgroup& h) {
  require(ga->dim == h.parent->order(), "BadAlgebra", "group algebra dimension differs from the group order");
  Mat m(ga->dim, ga->dim);
  std::vector<Vec> t;
  for (int g : h.members) {
    m(g, g) = Scalar(1);
    t.push_back(ga->basis(g));
  }
  return {ga, {ga, linalg::span_of(t, ga->dim)}, std::move(m)};
}

SquareReport commuting_square_check(const ConditionalExpectation& e1, const ConditionalExpectation& e2) {
  require(e1.source == e2.source, "SourceMismatch", "expectations have different sources");
  SquareReport r;
  const linalg::Subspace inter = linalg::intersect(e1.target.space, e2.target.space);
  r.intersection_dim = static_cast<int>(inter.dim());
  const Mat p = e1.matrix * e2.matrix, q = e2.matrix * e1.matrix;
  for (int j = 0; j < e1.source->dim; ++j) {
    if (p.col(j) != q.col(j)) {
      r = {false, j, "E1 E2 and E2 E1 differ", r.intersection_dim};
      return r;
    }
    if (!inter.contains(p.col(j))) {
      r = {false, j, "E1 E2 leaves the intersection", r.intersection_dim};
      return r;
    }
  }
  for (const Vec& t : inter.basis())
    if (p * t != t) {
      r.ok = false;
      r.reason = "E1 E2 is not the identity on the intersection";
      return r;
    }
  return r;
}

bool nondegeneracy_check(const SubalgebraSpan& s1, const SubalgebraSpan& s2) {
  require(s1.parent == s2.parent, "ParentMismatch", "subalgebras of different algebras");
  const StarAlgebra& a = *s1.parent;
  std::vector<Vec> xy, yx;
  for (const Vec& x : s1.space.basis())
    for (const Vec& y : s2.space.basis()) {
      xy.push_back(a.mul(x, y));
      yx.push_back(a.mul(y, x));
    }
  const auto d = static_cast<std::size_t>(a.dim);
  return linalg::rank(xy, d) == d && linalg::rank(yx, d) == d;
}

namespace {

bool unitary_matrix(const Mat& w) {
  const Mat p = w.adjoint() * w, q = w * w.adjoint();
  return p == Mat::identity(w.rows()) && q == Mat::identity(w.rows());
}

Mat block_transpose(const Mat& w, int n, int k) {
  Mat t(w.rows(), w.cols());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t(a * k + i, b * k + j) = w(b * k + i, a * k + j);
  return t;
}

}  // namespace

bool biunitary_check(const StarAlgebra& a, const Vec& w) {
  require(a.matrix_factors.size() == 2, "NoTensorStructure", "needs exactly two matrix factors");
  const Mat m = a.to_matrix(w);
  return unitary_matrix(m) && unitary_matrix(block_transpose(m, a.matrix_factors[0], a.matrix_factors[1]));
}

Mat permutation_matrix(const std::vector<int>& p) {
  Mat m(p.size(), p.size());
  for (std::size_t x = 0; x < p.size(); ++x) m(p[x], x) = Scalar(1);
  return m;
}

std::vector<std::vector<int>> permutation_biunitaries(int n, int k) {
  std::vector<int> p(n * k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    const Mat m = permutation_matrix(p);
    if (unitary_matrix(block_transpose(m, n, k))) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace amalgam
