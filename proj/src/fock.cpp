#include "amalgam/fock.hpp"

#include <algorithm>

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/errors.hpp"

namespace amalgam {

using linalg::Mat;
using linalg::Subspace;

namespace {

Mat column_of(const Vec& v) {
  Mat m(v.size(), 1);
  m.set_col(0, v);
  return m;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Vec head(const Vec& v, std::size_t n) { return Vec(v.begin(), v.begin() + static_cast<long>(n)); }
Vec tail(const Vec& v, std::size_t n) { return Vec(v.begin() + static_cast<long>(n), v.end()); }

std::vector<std::size_t> non_pivots(const Subspace& s) {
  std::vector<char> piv(s.ambient(), 0);
  for (auto p : s.pivots()) piv[p] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.ambient(); ++i)
    if (!piv[i]) out.push_back(i);
  return out;
}

// sum_j d_j mats[j]
Mat combine(const std::vector<Mat>& mats, const Vec& d, std::size_t n) {
  Mat out(n, n);
  for (std::size_t j = 0; j < mats.size(); ++j)
    if (!d[j].is_zero()) {
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          if (!mats[j](r, c).is_zero()) out(r, c).add_product(d[j], mats[j](r, c));
    }
  return out;
}

// v viewed as (first factor of size m) x (rest); applies a to the first factor
Vec act_first(const Mat& a, const Vec& v, std::size_t m) {
  const std::size_t rest = m ? v.size() / m : 0;
  Vec out(v.size());
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      if (a(x, y).is_zero()) continue;
      for (std::size_t r = 0; r < rest; ++r)
        if (!v[y * rest + r].is_zero()) out[x * rest + r].add_product(a(x, y), v[y * rest + r]);
    }
  return out;
}

// v viewed as (front) x (last factor of size m); applies a to the last factor
Vec act_last(const Mat& a, const Vec& v, std::size_t m) {
  const std::size_t front = m ? v.size() / m : 0;
  Vec out(v.size());
  for (std::size_t f = 0; f < front; ++f)
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        if (!a(x, y).is_zero() && !v[f * m + y].is_zero()) out[f * m + x].add_product(a(x, y), v[f * m + y]);
  return out;
}

Mat block(const Mat& m, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
  Mat out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r0 + r, c0 + c);
  return out;
}

}  // namespace

Vec PointedAlgebra::centered(const Vec& a) const { return linalg::sub(a, embed * (expect * a)); }

void require_pointed(const PointedAlgebra& p) {
  require(p.algebra && p.base, "BadExpectation", "missing algebra");
  require_star_embedding(*p.base, *p.algebra, p.embed, "base embedding");
  const auto& A = *p.algebra;
  const auto& D = *p.base;
  require(static_cast<int>(p.expect.rows()) == D.dim && static_cast<int>(p.expect.cols()) == A.dim,
          "BadExpectation", "expectation matrix has the wrong shape");
  require(p.expect * p.embed == Mat::identity(D.dim), "NotExpectation", "not the identity on the base");
  for (int a = 0; a < A.dim; ++a) {
    const Vec ba = A.basis(a);
    require(p.apply(A.star_of(ba)) == D.star_of(p.apply(ba)), "NotExpectation", "star law fails");
    for (int j = 0; j < D.dim; ++j) {
      const Vec dj = p.embed.col(j);
      require(p.apply(A.mul(dj, ba)) == D.mul(D.basis(j), p.apply(ba)), "NotExpectation",
              "left base linearity fails");
      require(p.apply(A.mul(ba, dj)) == D.mul(p.apply(ba), D.basis(j)), "NotExpectation",
              "right base linearity fails");
    }
  }
}

AlgebraPtr scalar_base() {
  static const AlgebraPtr s = make_algebra(scalars());
  return s;
}

bool same_algebra(const StarAlgebra& a, const StarAlgebra& b) {
  return a.dim == b.dim && a.structure == b.structure && a.unit == b.unit && a.star == b.star;
}

PointedAlgebra over_scalars(const AlgebraPtr& a) {
  require(a->trace.has_value(), "NoTrace", "algebra has no trace");
  PointedAlgebra p;
  p.algebra = a;
  p.base = scalar_base();
  p.embed = column_of(a->unit);
  p.expect = Mat::from_rows({*a->trace}, a->dim);
  return p;
}

PointedAlgebra pointed_from_expectation(const ConditionalExpectation& e, const AlgebraPtr& base, const Mat& embed) {
  PointedAlgebra p;
  p.algebra = e.source;
  p.base = base;
  p.embed = embed;
  p.expect = Mat(base->dim, e.source->dim);
  std::vector<Vec> targets;
  for (int a = 0; a < e.source->dim; ++a) targets.push_back(e(e.source->basis(a)));
  const auto sol = linalg::solve_many(embed, targets);
  for (int a = 0; a < e.source->dim; ++a) {
    require(sol[a].has_value(), "NotExpectation", "values leave the base image");
    p.expect.set_col(a, *sol[a]);
  }
  return p;
}

std::vector<Vec> centered_basis(const PointedAlgebra& p) { return linalg::nullspace(p.expect); }

void require_faithful_trace(const StarAlgebra& base) {
  if (!base.trace) throw Error("TraceNotFaithful", "base has no trace");
  Mat g(base.dim, base.dim);
  for (int i = 0; i < base.dim; ++i)
    for (int j = 0; j < base.dim; ++j) g(i, j) = base.tau(base.mul(base.star_of(base.basis(i)), base.basis(j)));
  const auto ldl = linalg::ldl_hermitian(g);
  if (!ldl.hermitian || !ldl.psd || ldl.rank != static_cast<std::size_t>(base.dim))
    throw Error("TraceNotFaithful", "trace form of the base is degenerate");
}

Vec ExpectationModule::classify(const Vec& a) const {
  const Vec r = killed.reduce(a);
  Vec c(kept.size());
  for (std::size_t q = 0; q < kept.size(); ++q) c[q] = r[kept[q]];
  return concat(source.apply(a), c);
}

std::shared_ptr<const ExpectationModule> gns(const PointedAlgebra& p) {
  require_pointed(p);
  require_faithful_trace(*p.base);
  const StarAlgebra& A = *p.algebra;
  const StarAlgebra& D = *p.base;
  ExpectationModule e;
  e.source = p;
  Mat g(A.dim, A.dim);
  for (int i = 0; i < A.dim; ++i) {
    const Vec si = A.star_of(A.basis(i));
    for (int j = 0; j < A.dim; ++j) g(i, j) = D.tau(p.apply(A.mul(si, A.basis(j))));
  }
  const auto ldl = linalg::ldl_hermitian(g);
  require(ldl.hermitian && ldl.psd, "NotPositive", "expectation is not positive");
  e.null = linalg::span_of(linalg::nullspace(g), A.dim);
  e.killed = e.null;
  for (int j = 0; j < D.dim; ++j) e.killed.insert(p.embed.col(j));
  e.kept = non_pivots(e.killed);
  for (auto q : e.kept) e.reps.push_back(p.centered(A.basis(static_cast<int>(q))));

  const int m = static_cast<int>(e.kept.size());
  PointedModule& mod = e.module;
  mod.base = p.base;
  mod.acting = p.algebra;
  mod.m = m;
  mod.form.assign(m, std::vector<Vec>(m));
  for (int x = 0; x < m; ++x) {
    const Vec sx = A.star_of(e.reps[x]);
    for (int y = 0; y < m; ++y) mod.form[x][y] = p.apply(A.mul(sx, e.reps[y]));
  }
  for (int j = 0; j < D.dim; ++j) {
    Mat l(m, m), r(m, m);
    const Vec dj = p.embed.col(j);
    for (int x = 0; x < m; ++x) {
      l.set_col(x, tail(e.classify(A.mul(dj, e.reps[x])), D.dim));
      r.set_col(x, tail(e.classify(A.mul(e.reps[x], dj)), D.dim));
    }
    mod.left.push_back(l);
    mod.right.push_back(r);
  }

  auto snap = std::make_shared<const ExpectationModule>(e);
  mod.act = [snap](const Vec& a) {
    const StarAlgebra& A = *snap->source.algebra;
    const int dd = snap->source.base->dim;
    const int n = dd + static_cast<int>(snap->kept.size());
    Mat out(n, n);
    for (int j = 0; j < dd; ++j) out.set_col(j, snap->classify(A.mul(a, snap->source.embed.col(j))));
    for (std::size_t x = 0; x < snap->kept.size(); ++x) out.set_col(dd + x, snap->classify(A.mul(a, snap->reps[x])));
    return out;
  };
  if (e.null.dim() == 0) {
    mod.act_right = [snap](const Vec& a) {
      const StarAlgebra& A = *snap->source.algebra;
      const int dd = snap->source.base->dim;
      const int n = dd + static_cast<int>(snap->kept.size());
      Mat out(n, n);
      for (int j = 0; j < dd; ++j) out.set_col(j, snap->classify(A.mul(snap->source.embed.col(j), a)));
      for (std::size_t x = 0; x < snap->kept.size(); ++x)
        out.set_col(dd + x, snap->classify(A.mul(snap->reps[x], a)));
      return out;
    };
  }
  // faithful iff a -> pi(a) is injective
  const int n = D.dim + m;
  Subspace img(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < A.dim; ++i) {
    const Mat pi = mod.act(A.basis(i));
    Vec flat;
    for (int r = 0; r < n; ++r) {
      const Vec row = pi.row(r);
      flat.insert(flat.end(), row.begin(), row.end());
    }
    img.insert(flat);
  }
  e.faithful = static_cast<int>(img.dim()) == A.dim;
  return std::make_shared<const ExpectationModule>(std::move(e));
}

Vec ShapeSpace::project(const Vec& a) const {
  const Vec r = null.dim() ? null.reduce(a) : a;
  Vec out(kept.size());
  for (std::size_t q = 0; q < kept.size(); ++q) out[q] = r[kept[q]];
  return out;
}

Vec ShapeSpace::lift(const Vec& q) const {
  Vec out(ambient);
  for (std::size_t i = 0; i < kept.size(); ++i) out[kept[i]] = q[i];
  return out;
}

std::vector<std::vector<int>> alternating_tuples(int k, int n) {
  std::vector<std::vector<int>> out, layer{{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& t : layer)
      for (int i = 0; i < k; ++i)
        if (t.empty() || t.back() != i) {
          auto u = t;
          u.push_back(i);
          next.push_back(u);
        }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

TruncatedFockModule fock_space(std::vector<PointedModule> factors, int depth) {
  require(depth >= 1, "BadDepth", "depth must be at least 1");
  require(!factors.empty(), "BadFactors", "no factors");
  TruncatedFockModule f;
  f.base = factors[0].base;
  for (const auto& fa : factors)
    require(fa.base == f.base || same_algebra(*fa.base, *f.base), "BaseMismatch", "factors have different bases");
  require_faithful_trace(*f.base);
  f.factors = std::move(factors);
  f.depth = depth;
  const StarAlgebra& B = *f.base;
  const auto nb = static_cast<std::size_t>(B.dim);
  Vec tau(nb);
  for (std::size_t k = 0; k < nb; ++k) tau[k] = B.tau(B.basis(static_cast<int>(k)));

  std::size_t offset = nb;
  for (const auto& t : alternating_tuples(static_cast<int>(f.factors.size()), depth)) {
    ShapeSpace s;
    s.factors = t;
    for (int i : t) s.radix.push_back(static_cast<std::size_t>(f.factors[i].m));
    for (auto r : s.radix) s.ambient *= r;
    const PointedModule& first = f.factors[t[0]];
    const std::size_t m1 = s.radix[0];
    std::vector<Mat> g1(nb, Mat(m1, m1));
    for (std::size_t x = 0; x < m1; ++x)
      for (std::size_t y = 0; y < m1; ++y)
        for (std::size_t k = 0; k < nb; ++k) g1[k](x, y) = first.form[x][y][k];

    std::vector<Mat> full;  // ambient form per base element
    Mat scalar(s.ambient, s.ambient);
    if (t.size() == 1) {
      full = g1;
    } else {
      const ShapeSpace& rest = f.shapes[f.shape_index.at(std::vector<int>(t.begin() + 1, t.end()))];
      const std::size_t nr = rest.ambient;
      const std::size_t mr = rest.radix[0];
      full.assign(nb, Mat(s.ambient, s.ambient));
      for (std::size_t j = 0; j < nb; ++j) {
        bool any = false;
        for (std::size_t x = 0; x < m1 && !any; ++x)
          for (std::size_t y = 0; y < m1 && !any; ++y) any = !g1[j](x, y).is_zero();
        if (!any || mr == 0) continue;
        const Mat lj = linalg::kron(f.factors[rest.factors[0]].left[j], Mat::identity(nr / mr));
        for (std::size_t k = 0; k < nb; ++k) {
          const Mat h = rest.ambient_form[k] * lj;
          for (std::size_t x = 0; x < m1; ++x)
            for (std::size_t y = 0; y < m1; ++y) {
              const Scalar& gxy = g1[j](x, y);
              if (gxy.is_zero()) continue;
              for (std::size_t r = 0; r < nr; ++r)
                for (std::size_t c = 0; c < nr; ++c)
                  if (!h(r, c).is_zero()) full[k](x * nr + r, y * nr + c).add_product(gxy, h(r, c));
            }
        }
      }
    }
    for (std::size_t k = 0; k < nb; ++k)
      if (!tau[k].is_zero())
        for (std::size_t r = 0; r < s.ambient; ++r)
          for (std::size_t c = 0; c < s.ambient; ++c)
            if (!full[k](r, c).is_zero()) scalar(r, c).add_product(tau[k], full[k](r, c));
    const auto ldl = linalg::ldl_hermitian(scalar);
    s.psd = ldl.hermitian && ldl.psd;
    s.null = linalg::span_of(linalg::nullspace(scalar), s.ambient);
    s.kept = non_pivots(s.null);
    for (std::size_t k = 0; k < nb; ++k) {
      Mat fk(s.kept.size(), s.kept.size());
      for (std::size_t p = 0; p < s.kept.size(); ++p)
        for (std::size_t q = 0; q < s.kept.size(); ++q) fk(p, q) = full[k](s.kept[p], s.kept[q]);
      s.form.push_back(std::move(fk));
    }
    if (static_cast<int>(t.size()) < depth) s.ambient_form = std::move(full);
    s.offset = offset;
    offset += s.kept.size();
    f.shape_index[t] = static_cast<int>(f.shapes.size());
    f.shapes.push_back(std::move(s));
  }
  f.dim = static_cast<int>(offset);
  return f;
}

TruncatedFockModule fock_from_algebras(const std::vector<PointedAlgebra>& factors, int depth) {
  std::vector<std::shared_ptr<const ExpectationModule>> srcs;
  std::vector<PointedModule> mods;
  for (const auto& p : factors) {
    srcs.push_back(gns(p));
    mods.push_back(srcs.back()->module);
  }
  TruncatedFockModule f = fock_space(std::move(mods), depth);
  f.sources = std::move(srcs);
  return f;
}

Vec TruncatedFockModule::xi(const Vec& d) const {
  Vec v(dim);
  for (int j = 0; j < base->dim; ++j) v[j] = d[j];
  return v;
}

Vec TruncatedFockModule::xi() const { return xi(base->unit); }

Vec TruncatedFockModule::form(const Vec& x, const Vec& y) const {
  const StarAlgebra& B = *base;
  Vec out = B.mul(B.star_of(head(x, B.dim)), head(y, B.dim));
  for (const auto& s : shapes) {
    for (std::size_t p = 0; p < s.size(); ++p) {
      const Scalar& xp = x[s.offset + p];
      if (xp.is_zero()) continue;
      const Scalar cx = xp.conj();
      for (std::size_t q = 0; q < s.size(); ++q) {
        const Scalar& yq = y[s.offset + q];
        if (yq.is_zero()) continue;
        const Scalar c = cx * yq;
        for (int k = 0; k < B.dim; ++k)
          if (!s.form[k](p, q).is_zero()) out[k].add_product(c, s.form[k](p, q));
      }
    }
  }
  return out;
}

Mat TruncatedFockModule::scalar_gram() const {
  const StarAlgebra& B = *base;
  Mat g(dim, dim);
  for (int i = 0; i < B.dim; ++i)
    for (int j = 0; j < B.dim; ++j) g(i, j) = B.tau(B.mul(B.star_of(B.basis(i)), B.basis(j)));
  for (const auto& s : shapes)
    for (int k = 0; k < B.dim; ++k) {
      const Scalar t = B.tau(B.basis(k));
      if (t.is_zero()) continue;
      for (std::size_t p = 0; p < s.size(); ++p)
        for (std::size_t q = 0; q < s.size(); ++q)
          if (!s.form[k](p, q).is_zero()) g(s.offset + p, s.offset + q).add_product(t, s.form[k](p, q));
    }
  return g;
}

bool TruncatedFockModule::psd() const {
  for (const auto& s : shapes)
    if (!s.psd) return false;
  const auto ldl = linalg::ldl_hermitian(scalar_gram());
  return ldl.hermitian && ldl.psd;
}

namespace {

struct Accum {
  const TruncatedFockModule& f;
  Vec out;
  explicit Accum(const TruncatedFockModule& fm) : f(fm), out(fm.dim) {}
  void add_xi(const Vec& d) {
    for (int j = 0; j < f.base->dim; ++j) out[j] += d[j];
  }
  // returns false when the shape lies beyond the depth
  bool add_shape(const std::vector<int>& t, const Vec& amb) {
    auto it = f.shape_index.find(t);
    if (it == f.shape_index.end()) return false;
    const ShapeSpace& s = f.shapes[it->second];
    const Vec q = s.project(amb);
    for (std::size_t i = 0; i < q.size(); ++i) out[s.offset + i] += q[i];
    return true;
  }
};

Vec shape_part(const ShapeSpace& s, const Vec& v) {
  Vec q(v.begin() + static_cast<long>(s.offset), v.begin() + static_cast<long>(s.offset + s.size()));
  return s.lift(q);
}

}  // namespace

Vec TruncatedFockModule::apply_left_base(const Vec& b, const Vec& v) const {
  const StarAlgebra& B = *base;
  Accum acc(*this);
  acc.add_xi(B.mul(b, head(v, B.dim)));
  for (const auto& s : shapes) {
    const Vec amb = shape_part(s, v);
    if (linalg::is_zero(amb)) continue;
    const auto& fa = factors[s.factors[0]];
    acc.add_shape(s.factors, act_first(combine(fa.left, b, fa.m), amb, s.radix[0]));
  }
  return acc.out;
}

Vec TruncatedFockModule::apply_right_base(const Vec& b, const Vec& v) const {
  const StarAlgebra& B = *base;
  Accum acc(*this);
  acc.add_xi(B.mul(head(v, B.dim), b));
  for (const auto& s : shapes) {
    const Vec amb = shape_part(s, v);
    if (linalg::is_zero(amb)) continue;
    const auto& fa = factors[s.factors.back()];
    acc.add_shape(s.factors, act_last(combine(fa.right, b, fa.m), amb, s.radix.back()));
  }
  return acc.out;
}

namespace {

const PointedModule& checked_factor(const TruncatedFockModule& f, int i, const Vec& a) {
  require(i >= 0 && i < static_cast<int>(f.factors.size()), "FactorIndexBad", "no factor " + std::to_string(i));
  const PointedModule& fa = f.factors[i];
  require(static_cast<int>(a.size()) == fa.acting->dim, "BadElement", "element has the wrong dimension");
  return fa;
}

// left action of the factor-i element whose matrix on E_i is M
Vec lambda_by(const TruncatedFockModule& f, int i, const Mat& M, const Vec& v, bool* boundary) {
  const auto& factors = f.factors;
  const auto& shapes = f.shapes;
  const StarAlgebra* base = f.base.get();
  const PointedModule& fa = factors[i];
  const auto nb = static_cast<std::size_t>(base->dim);
  const auto mi = static_cast<std::size_t>(fa.m);
  const Vec u = M * concat(base->unit, Vec(mi));
  const Vec ud = head(u, nb), ux = tail(u, nb);
  Accum acc(f);
  {
    const Vec t = M * concat(head(v, nb), Vec(mi));
    acc.add_xi(head(t, nb));
    acc.add_shape({i}, tail(t, nb));
  }
  const Mat mcc = block(M, nb, nb, mi, mi);
  for (const auto& s : shapes) {
    const Vec amb = shape_part(s, v);
    if (linalg::is_zero(amb)) continue;
    const auto& t = s.factors;
    if (t[0] != i) {
      const auto& f0 = factors[t[0]];
      acc.add_shape(t, act_first(combine(f0.left, ud, f0.m), amb, s.radix[0]));
      std::vector<int> longer{i};
      longer.insert(longer.end(), t.begin(), t.end());
      const Vec ext = linalg::kron(ux, amb);
      if (!acc.add_shape(longer, ext) && boundary && !linalg::is_zero(ext)) *boundary = true;
    } else {
      acc.add_shape(t, act_first(mcc, amb, mi));
      const std::size_t nr = s.ambient / mi;
      const std::vector<int> rest(t.begin() + 1, t.end());
      for (std::size_t x = 0; x < mi; ++x) {
        const Vec slice(amb.begin() + static_cast<long>(x * nr), amb.begin() + static_cast<long>((x + 1) * nr));
        if (linalg::is_zero(slice)) continue;
        const Vec dx = head(M.col(nb + x), nb);
        if (linalg::is_zero(dx)) continue;
        if (rest.empty()) {
          acc.add_xi(linalg::scale(slice[0], dx));
        } else {
          const auto& fr = factors[rest[0]];
          acc.add_shape(rest, act_first(combine(fr.left, dx, fr.m), slice, static_cast<std::size_t>(fr.m)));
        }
      }
    }
  }
  return acc.out;
}

Vec rho_by(const TruncatedFockModule& f, int i, const Mat& M, const Vec& v, bool* boundary) {
  const auto& factors = f.factors;
  const auto& shapes = f.shapes;
  const StarAlgebra* base = f.base.get();
  const PointedModule& fa = factors[i];
  const auto nb = static_cast<std::size_t>(base->dim);
  const auto mi = static_cast<std::size_t>(fa.m);
  const Vec u = M * concat(base->unit, Vec(mi));
  const Vec ud = head(u, nb), ux = tail(u, nb);
  Accum acc(f);
  {
    const Vec t = M * concat(head(v, nb), Vec(mi));
    acc.add_xi(head(t, nb));
    acc.add_shape({i}, tail(t, nb));
  }
  const Mat mcc = block(M, nb, nb, mi, mi);
  for (const auto& s : shapes) {
    const Vec amb = shape_part(s, v);
    if (linalg::is_zero(amb)) continue;
    const auto& t = s.factors;
    if (t.back() != i) {
      const auto& fl = factors[t.back()];
      acc.add_shape(t, act_last(combine(fl.right, ud, fl.m), amb, s.radix.back()));
      std::vector<int> longer = t;
      longer.push_back(i);
      const Vec ext = linalg::kron(amb, ux);
      if (!acc.add_shape(longer, ext) && boundary && !linalg::is_zero(ext)) *boundary = true;
    } else {
      acc.add_shape(t, act_last(mcc, amb, mi));
      const std::size_t nf = s.ambient / mi;
      const std::vector<int> front(t.begin(), t.end() - 1);
      for (std::size_t l = 0; l < mi; ++l) {
        Vec slice(nf);
        for (std::size_t q = 0; q < nf; ++q) slice[q] = amb[q * mi + l];
        if (linalg::is_zero(slice)) continue;
        const Vec dl = head(M.col(nb + l), nb);
        if (linalg::is_zero(dl)) continue;
        if (front.empty()) {
          acc.add_xi(linalg::scale(slice[0], dl));
        } else {
          const auto& ff = factors[front.back()];
          acc.add_shape(front, act_last(combine(ff.right, dl, ff.m), slice, static_cast<std::size_t>(ff.m)));
        }
      }
    }
  }
  return acc.out;
}

template <class F>
Mat columns(int n, F&& f) {
  Mat m(n, n);
  for (int c = 0; c < n; ++c) m.set_col(c, f(linalg::unit_vector(n, c)));
  return m;
}

const Mat& right_matrix(const PointedModule& fa, const Vec& a, Mat& store) {
  require(static_cast<bool>(fa.act_right), "RightActionUndefined", "factor has no right action");
  store = fa.act_right(a);
  return store;
}

}  // namespace

Vec TruncatedFockModule::apply_lambda(int i, const Vec& a, const Vec& v, bool* boundary) const {
  return lambda_by(*this, i, checked_factor(*this, i, a).act(a), v, boundary);
}

Vec TruncatedFockModule::apply_rho(int i, const Vec& a, const Vec& v, bool* boundary) const {
  Mat store;
  return rho_by(*this, i, right_matrix(checked_factor(*this, i, a), a, store), v, boundary);
}

Mat TruncatedFockModule::lambda(int i, const Vec& a, bool* boundary) const {
  const Mat M = checked_factor(*this, i, a).act(a);
  return columns(dim, [&](const Vec& v) { return lambda_by(*this, i, M, v, boundary); });
}

Mat TruncatedFockModule::rho(int i, const Vec& a, bool* boundary) const {
  Mat store;
  const Mat& M = right_matrix(checked_factor(*this, i, a), a, store);
  return columns(dim, [&](const Vec& v) { return rho_by(*this, i, M, v, boundary); });
}

Mat TruncatedFockModule::left_base(const Vec& b) const {
  return columns(dim, [&](const Vec& v) { return apply_left_base(b, v); });
}

Mat TruncatedFockModule::right_base(const Vec& b) const {
  return columns(dim, [&](const Vec& v) { return apply_right_base(b, v); });
}

std::vector<int> TruncatedFockModule::interior() const {
  std::vector<int> out;
  for (int j = 0; j < base->dim; ++j) out.push_back(j);
  for (const auto& s : shapes)
    if (static_cast<int>(s.factors.size()) < depth)
      for (std::size_t p = 0; p < s.size(); ++p) out.push_back(static_cast<int>(s.offset + p));
  return out;
}

std::string TruncatedFockModule::shape_label(int s) const {
  std::string out;
  for (int i : shapes.at(s).factors) out += (out.empty() ? "" : ",") + std::to_string(i + 1);
  return "(" + out + ")";
}

Vec free_expectation(const TruncatedFockModule& f, const FockWord& word) {
  if (static_cast<int>(word.size()) > f.depth)
    throw Error("DepthExceeded", "word length " + std::to_string(word.size()) + " exceeds depth " +
                                     std::to_string(f.depth));
  Vec v = f.xi();
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = f.apply_lambda(it->first, it->second, v);
  return head(v, f.base->dim);
}

ReducedWord reduce_letters(const std::vector<PointedAlgebra>& factors, const FockWord& word) {
  require(!factors.empty(), "BadFactors", "no factors");
  const StarAlgebra& D = *factors[0].base;
  ReducedWord cur{{{}, D.unit}};
  auto add = [](ReducedWord& r, const std::vector<int>& t, const Vec& v) {
    if (linalg::is_zero(v)) return;
    auto it = r.find(t);
    if (it == r.end())
      r.emplace(t, v);
    else
      it->second = linalg::add(it->second, v);
  };
  // right action of a base element on the last letter of shape t
  auto right_base = [&](const std::vector<int>& t, const Vec& amb, const Vec& d) {
    if (t.empty()) return D.mul(amb, d);
    const PointedAlgebra& p = factors[t.back()];
    return act_last(p.algebra->right_mult(p.embed * d), amb, static_cast<std::size_t>(p.algebra->dim));
  };
  for (const auto& [i, a] : word) {
    require(i >= 0 && i < static_cast<int>(factors.size()), "FactorIndexBad", "no factor " + std::to_string(i));
    const PointedAlgebra& p = factors[i];
    const StarAlgebra& A = *p.algebra;
    const auto na = static_cast<std::size_t>(A.dim);
    ReducedWord next;
    for (const auto& [t, amb] : cur) {
      if (t.empty()) {
        const Vec x = A.mul(p.embed * amb, a);
        add(next, {}, p.apply(x));
        add(next, {i}, p.centered(x));
      } else if (t.back() != i) {
        add(next, t, right_base(t, amb, p.apply(a)));
        auto longer = t;
        longer.push_back(i);
        add(next, longer, linalg::kron(amb, p.centered(a)));
      } else {
        const Mat ra = A.right_mult(a);
        const Mat cen = Mat::identity(na) - p.embed * p.expect;
        add(next, t, act_last(cen * ra, amb, na));
        const std::vector<int> front(t.begin(), t.end() - 1);
        const Mat ex = p.expect * ra;  // dim D x dim A
        const std::size_t nf = amb.size() / na;
        for (std::size_t l = 0; l < na; ++l) {
          Vec slice(nf);
          for (std::size_t q = 0; q < nf; ++q) slice[q] = amb[q * na + l];
          if (linalg::is_zero(slice)) continue;
          const Vec d = ex.col(l);
          if (linalg::is_zero(d)) continue;
          if (front.empty())
            add(next, {}, linalg::scale(slice[0], d));
          else
            add(next, front, right_base(front, slice, d));
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Vec factor_expectation(const TruncatedFockModule& f, int i0, const FockWord& word) {
  require(!f.sources.empty(), "NoSources", "module was not built from algebras");
  require(i0 >= 0 && i0 < static_cast<int>(f.sources.size()), "FactorIndexBad", "no factor " + std::to_string(i0));
  if (static_cast<int>(word.size()) > f.depth)
    throw Error("DepthExceeded", "word length " + std::to_string(word.size()) + " exceeds depth " +
                                     std::to_string(f.depth));
  std::vector<PointedAlgebra> algs;
  for (const auto& s : f.sources) algs.push_back(s->source);
  const ReducedWord r = reduce_letters(algs, word);
  const PointedAlgebra& p = algs[i0];
  Vec out(p.algebra->dim);
  if (auto it = r.find({}); it != r.end()) out = p.embed * it->second;
  if (auto it = r.find({i0}); it != r.end()) out = linalg::add(out, it->second);
  return out;
}

Vec factor_expectation_fock(const TruncatedFockModule& f, int i0, const FockWord& word) {
  if (static_cast<int>(word.size()) > f.depth)
    throw Error("DepthExceeded", "word length " + std::to_string(word.size()) + " exceeds depth " +
                                     std::to_string(f.depth));
  Vec v = f.xi();
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = f.apply_lambda(it->first, it->second, v);
  const ShapeSpace& s = f.shapes[f.shape_index.at({i0})];
  return concat(head(v, f.base->dim), shape_part(s, v));
}

AlgebraPtr group_amalgam_base(const Realization& r) {
  if (r.verdict != Verdict::Realizable || !r.group)
    throw Error("BNotRealizable", "the group triangle has no finite realization");
  return make_algebra(group_star_algebra(*r.group));
}

namespace {

TwoFactorView build_view(const LocalPiece& piece, const AlgebraPtr& B, int depth) {
  const PointedAlgebra& pa = piece.local;
  PointedAlgebra pb{B, pa.base, piece.into_base, piece.base_expect};
  require_pointed(pa);
  require_pointed(pb);
  const auto ga = gns(pa);
  const auto gb = gns(pb);
  require(gb->null.dim() == 0, "NotFaithful", "expectation of the base onto the local base is not faithful");
  TwoFactorView v;
  v.inner = fock_space({ga->module, gb->module}, depth + 1);
  v.inner.sources = {ga, gb};
  const TruncatedFockModule& K = v.inner;
  const StarAlgebra& Bi = *pa.base;
  const auto nb = static_cast<std::size_t>(B->dim);

  std::size_t m = 0;
  for (std::size_t s = 0; s < K.shapes.size(); ++s) {
    const auto& t = K.shapes[s].factors;
    if (t == std::vector<int>{1}) continue;
    const int eff = static_cast<int>(t.size()) - (t.back() == 1 ? 1 : 0);
    if (eff <= depth) {
      v.shapes.push_back(static_cast<int>(s));
      m += K.shapes[s].size();
    }
  }
  const std::size_t nf = nb + m;
  v.to_inner = Mat(K.dim, nf);
  for (std::size_t j = 0; j < nb; ++j) v.to_inner.set_col(j, K.apply_lambda(1, B->basis(static_cast<int>(j)), K.xi()));
  {
    std::size_t c = nb;
    for (int s : v.shapes)
      for (std::size_t p = 0; p < K.shapes[s].size(); ++p) v.to_inner(K.shapes[s].offset + p, c++) = Scalar(1);
  }
  // invert the base block on xi B_i (+) shape (1)
  const ShapeSpace& sb = K.shapes[K.shape_index.at({1})];
  std::vector<std::size_t> rows;
  for (int j = 0; j < Bi.dim; ++j) rows.push_back(static_cast<std::size_t>(j));
  for (std::size_t p = 0; p < sb.size(); ++p) rows.push_back(sb.offset + p);
  Mat tb(rows.size(), nb);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < nb; ++j) tb(r, j) = v.to_inner(rows[r], j);
  require(linalg::rank(tb) == nb && rows.size() == nb, "NotFaithful", "base does not match its inner image");
  std::vector<Vec> targets;
  for (std::size_t r = 0; r < rows.size(); ++r) targets.push_back(linalg::unit_vector(rows.size(), r));
  const auto inv = linalg::solve_many(tb, targets);
  v.from_inner = Mat(nf, K.dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < nb; ++j) v.from_inner(j, rows[r]) = (*inv[r])[j];
  {
    std::size_t c = nb;
    for (int s : v.shapes)
      for (std::size_t p = 0; p < K.shapes[s].size(); ++p) v.from_inner(c++, K.shapes[s].offset + p) = Scalar(1);
  }

  PointedModule& mod = v.module;
  mod.base = B;
  mod.acting = pa.algebra;
  mod.m = static_cast<int>(m);
  auto inner = std::make_shared<const TruncatedFockModule>(K);
  const Mat to = v.to_inner, from = v.from_inner;
  mod.act = [inner, to, from](const Vec& a) { return from * (inner->lambda(0, a) * to); };
  std::vector<Mat> rho_k;
  for (std::size_t k = 0; k < nb; ++k) {
    const Vec bk = B->basis(static_cast<int>(k));
    const Mat l = from * (K.lambda(1, bk) * to);
    const Mat r = from * (K.rho(1, bk) * to);
    mod.left.push_back(block(l, nb, nb, m, m));
    mod.right.push_back(block(r, nb, nb, m, m));
    rho_k.push_back(K.rho(1, bk));
  }
  // B-valued form: base_expect(beta b_k) = <x, y b_k> in the inner module
  const auto nbi = static_cast<std::size_t>(Bi.dim);
  Mat coeff(nb * nbi, nb);
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t k = 0; k < nb; ++k) {
      const Vec e = piece.base_expect * B->mul(B->basis(static_cast<int>(j)), B->basis(static_cast<int>(k)));
      for (std::size_t l = 0; l < nbi; ++l) coeff(k * nbi + l, j) = e[l];
    }
  std::vector<Vec> cols;
  for (std::size_t x = 0; x < m; ++x) cols.push_back(v.to_inner.col(nb + x));
  std::vector<std::vector<Vec>> ry(nb);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t y = 0; y < m; ++y) ry[k].push_back(rho_k[k] * cols[y]);
  std::vector<Vec> tg;
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      Vec t(nb * nbi);
      for (std::size_t k = 0; k < nb; ++k) {
        const Vec fv = K.form(cols[x], ry[k][y]);
        for (std::size_t l = 0; l < nbi; ++l) t[k * nbi + l] = fv[l];
      }
      tg.push_back(std::move(t));
    }
  const auto sol = linalg::solve_many(coeff, tg);
  mod.form.assign(m, std::vector<Vec>(m));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      const auto& s = sol[x * m + y];
      require(s.has_value(), "FormMismatch", "no base-valued form matches the inner form");
      mod.form[x][y] = *s;
    }
  return v;
}

}  // namespace

namespace {

// a -> lambda_i(a) injective; columns on xi B are tried first, the whole module only if needed
bool acts_injectively(const TruncatedFockModule& f, int i) {
  const StarAlgebra& A = *f.factors[i].acting;
  for (const int ncols : {f.base->dim, f.dim}) {
    Subspace img(static_cast<std::size_t>(f.dim) * ncols);
    for (int a = 0; a < A.dim; ++a) {
      const Mat M = f.factors[i].act(A.basis(a));
      Vec flat;
      for (int c = 0; c < ncols; ++c) {
        const Vec col = lambda_by(f, i, M, linalg::unit_vector(f.dim, c), nullptr);
        flat.insert(flat.end(), col.begin(), col.end());
      }
      img.insert(flat);
    }
    if (static_cast<int>(img.dim()) == A.dim) return true;
  }
  return false;
}

}  // namespace

GeneralizedAmalgam generalized_reduced_amalgam(const std::vector<LocalPiece>& pieces, const AlgebraPtr& base,
                                               int depth) {
  if (!base) throw Error("BNotRealizable", "no base algebra");
  require(depth >= 1, "BadDepth", "depth must be at least 1");
  GeneralizedAmalgam g;
  g.base = base;
  g.depth = depth;
  std::vector<PointedModule> mods;
  for (const auto& p : pieces) {
    g.views.push_back(build_view(p, base, depth));
    mods.push_back(g.views.back().module);
  }
  g.module = fock_space(std::move(mods), depth);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    g.sigma_injective.push_back(acts_injectively(g.module, static_cast<int>(i)));
  return g;
}

AuditReport decomposition_audit(const GeneralizedAmalgam& g) {
  AuditReport rep;
  rep.built = g.module.dim;
  const mpq_class db(g.base->dim);
  std::vector<mpq_class> ranks;
  bool pieces_ok = true;
  for (const auto& v : g.views) {
    const auto& src = v.inner.sources;
    const mpq_class dbi(src[0]->source.base->dim);
    const mpq_class ra = mpq_class(src[0]->source.algebra->dim - src[0]->source.base->dim - static_cast<int>(src[0]->null.dim())) / dbi;
    const mpq_class rb = (db - dbi) / dbi;
    mpq_class r = 0;
    for (const auto& t : alternating_tuples(2, g.depth)) {
      if (t.back() != 0) continue;
      mpq_class term = 1;
      for (int x : t) term *= (x == 0 ? ra : rb);
      r += term;
    }
    ranks.push_back(r);
    const mpq_class counted = db * r;
    rep.complement_dims.push_back(rational_str(counted));
    if (counted != v.module.m) pieces_ok = false;
  }
  mpq_class total = 1;
  for (const auto& t : alternating_tuples(static_cast<int>(g.views.size()), g.depth)) {
    mpq_class term = 1;
    for (int i : t) term *= ranks[i];
    total += term;
  }
  total *= db;
  rep.counted = rational_str(total);
  rep.ok = pieces_ok && total == rep.built;
  return rep;
}

Mat fock_embedding(const TruncatedFockModule& sub, const TruncatedFockModule& full, const std::vector<Mat>& inclusions) {
  require(sub.sources.size() == full.sources.size() && !sub.sources.empty(), "NoSources",
          "both modules must be built from algebras");
  require(inclusions.size() == sub.sources.size(), "BadFactors", "one inclusion per factor");
  const int nb = sub.base->dim;
  std::vector<Mat> comp;
  for (std::size_t i = 0; i < inclusions.size(); ++i) {
    const auto& s = *sub.sources[i];
    const auto& f = *full.sources[i];
    Mat c(f.kept.size(), s.kept.size());
    for (std::size_t x = 0; x < s.kept.size(); ++x) c.set_col(x, tail(f.classify(inclusions[i] * s.reps[x]), nb));
    comp.push_back(std::move(c));
  }
  Mat out(full.dim, sub.dim);
  for (int j = 0; j < nb; ++j) out(j, j) = Scalar(1);
  for (const auto& s : sub.shapes) {
    Mat amb = comp[s.factors[0]];
    for (std::size_t k = 1; k < s.factors.size(); ++k) amb = linalg::kron(amb, comp[s.factors[k]]);
    const ShapeSpace& fs = full.shapes[full.shape_index.at(s.factors)];
    for (std::size_t p = 0; p < s.size(); ++p) {
      const Vec q = fs.project(amb.col(s.kept[p]));
      for (std::size_t r = 0; r < q.size(); ++r) out(fs.offset + r, s.offset + p) = q[r];
    }
  }
  return out;
}

}  // namespace amalgam
