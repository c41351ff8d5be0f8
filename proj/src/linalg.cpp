#include "amalgam/linalg.hpp"

#include <algorithm>

#include "amalgam/errors.hpp"

namespace amalgam::linalg {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = Scalar(1);
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Mat m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_col(c, cols[c]);
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Mat m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == cols, "DimensionMismatch", "row length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Vec Mat::row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void Mat::set_col(std::size_t c, const Vec& v) {
  require(v.size() == rows_, "DimensionMismatch", "column length");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Mat Mat::adjoint() const {
  Mat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c).conj();
  return t;
}

bool Mat::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols_ == b.rows_, "DimensionMismatch", "matrix product");
  Mat c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& bkj = b(k, j);
        if (!bkj.is_zero()) c(i, j).add_product(aik, bkj);
      }
    }
  return c;
}

Vec operator*(const Mat& a, const Vec& v) {
  require(a.cols_ == v.size(), "DimensionMismatch", "matrix-vector product");
  Vec out(a.rows_);
  for (std::size_t k = 0; k < a.cols_; ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      const Scalar& aik = a(i, k);
      if (!aik.is_zero()) out[i].add_product(aik, v[k]);
    }
  }
  return out;
}

Mat operator+(const Mat& a, const Mat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "DimensionMismatch", "matrix sum");
  Mat c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "DimensionMismatch", "matrix difference");
  Mat c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
  return c;
}

Vec zeros(std::size_t n) { return Vec(n); }

Vec unit_vector(std::size_t n, std::size_t k) {
  Vec v(n);
  v[k] = Scalar(1);
  return v;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec add(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "DimensionMismatch", "vector sum");
  Vec c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return c;
}

Vec sub(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "DimensionMismatch", "vector difference");
  Vec c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= b[k];
  return c;
}

Vec scale(const Scalar& s, const Vec& v) {
  Vec out(v.size());
  if (s.is_zero()) return out;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) out[k] = s * v[k];
  return out;
}

void axpy(const Scalar& s, const Vec& x, Vec& y) {
  require(x.size() == y.size(), "DimensionMismatch", "axpy");
  if (s.is_zero()) return;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!x[k].is_zero()) y[k].add_product(s, x[k]);
}

Vec conj(const Vec& v) {
  Vec out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].conj();
  return out;
}

std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = Scalar(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(Mat m) { return rref(m).size(); }

std::size_t rank(const std::vector<Vec>& vectors, std::size_t dim) { return span_of(vectors, dim).dim(); }

std::vector<Vec> nullspace(Mat m) {
  auto piv = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec x(m.cols());
    x[f] = Scalar(1);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
  require(b.size() == m.rows(), "DimensionMismatch", "solve rhs");
  Mat aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, m.cols());
  return x;
}

Vec Subspace::reduce(const Vec& v) const {
  require(v.size() == n_, "DimensionMismatch", "subspace ambient dimension");
  Vec w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Scalar f = w[pivots_[r]];
    if (f.is_zero()) continue;
    const Vec& row = rows_[r];
    for (std::size_t j = pivots_[r]; j < n_; ++j)
      if (!row[j].is_zero()) w[j] -= f * row[j];
  }
  return w;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

Vec Subspace::coordinates(const Vec& v) const {
  require(contains(v), "NotInSpan", "vector outside subspace");
  Vec c(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) c[r] = v[pivots_[r]];
  return c;
}

bool Subspace::insert(const Vec& v) {
  Vec w = reduce(v);
  std::size_t p = 0;
  while (p < n_ && w[p].is_zero()) ++p;
  if (p == n_) return false;
  Scalar inv = Scalar(1) / w[p];
  for (std::size_t j = p; j < n_; ++j)
    if (!w[j].is_zero()) w[j] *= inv;
  for (auto& row : rows_) {
    if (row[p].is_zero()) continue;
    Scalar f = row[p];
    for (std::size_t j = p; j < n_; ++j)
      if (!w[j].is_zero()) row[j] -= f * w[j];
  }
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  auto pos = static_cast<std::size_t>(it - pivots_.begin());
  pivots_.insert(it, p);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(w));
  return true;
}

Subspace span_of(const std::vector<Vec>& vectors, std::size_t ambient) {
  Subspace s(ambient);
  for (const auto& v : vectors) s.insert(v);
  return s;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require(a.ambient() == b.ambient(), "DimensionMismatch", "intersection ambient");
  const std::size_t n = a.ambient();
  // x = sum s_k a_k = sum t_l b_l  <=>  [A | -B] (s,t) = 0
  Mat m(n, a.dim() + b.dim());
  for (std::size_t k = 0; k < a.dim(); ++k)
    for (std::size_t r = 0; r < n; ++r) m(r, k) = a.basis()[k][r];
  for (std::size_t l = 0; l < b.dim(); ++l)
    for (std::size_t r = 0; r < n; ++r) m(r, a.dim() + l) = -b.basis()[l][r];
  Subspace out(n);
  for (const auto& st : nullspace(std::move(m))) {
    Vec x(n);
    for (std::size_t k = 0; k < a.dim(); ++k) axpy(st[k], a.basis()[k], x);
    out.insert(x);
  }
  return out;
}

LdlResult ldl_hermitian(Mat m) {
  LdlResult res;
  const std::size_t n = m.rows();
  require(m.cols() == n, "DimensionMismatch", "LDL needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (m(i, j) != m(j, i).conj()) {
        res.hermitian = false;
        res.psd = false;
        return res;
      }
  std::vector<bool> active(n, true);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t k = n;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && !m(i, i).is_zero()) {
        k = i;
        break;
      }
    if (k == n) {
      // all remaining diagonal entries vanish: PSD forces the block to vanish
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (active[i] && active[j] && !m(i, j).is_zero()) res.psd = false;
      break;
    }
    const Scalar d = m(k, k);
    res.diagonal.push_back(d.re());
    if (sgn(d.re()) < 0) res.psd = false;
    ++res.rank;
    active[k] = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || m(i, k).is_zero()) continue;
      Scalar f = m(i, k) / d;
      for (std::size_t j = 0; j < n; ++j)
        if (active[j] && !m(k, j).is_zero()) m(i, j) -= f * m(k, j);
    }
  }
  return res;
}

std::vector<std::optional<Vec>> solve_many(const Mat& m, const std::vector<Vec>& targets) {
  Mat aug(m.rows(), m.cols() + targets.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    for (std::size_t k = 0; k < targets.size(); ++k) aug(r, m.cols() + k) = targets[k][r];
  }
  // eliminate on the coefficient block only
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t p = row;
    while (p < m.rows() && aug(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(p, j), aug(row, j));
    const Scalar inv = Scalar(1) / aug(row, c);
    for (std::size_t j = c; j < aug.cols(); ++j) aug(row, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || aug(r, c).is_zero()) continue;
      const Scalar f = aug(r, c);
      for (std::size_t j = c; j < aug.cols(); ++j)
        if (!aug(row, j).is_zero()) aug(r, j) -= f * aug(row, j);
    }
    piv.push_back(c);
    ++row;
  }
  std::vector<std::optional<Vec>> out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::size_t col = m.cols() + k;
    bool ok = true;
    for (std::size_t r = piv.size(); r < m.rows() && ok; ++r) ok = aug(r, col).is_zero();
    if (!ok) {
      out.emplace_back(std::nullopt);
      continue;
    }
    Vec x(m.cols());
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, col);
    out.emplace_back(std::move(x));
  }
  return out;
}


Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (!b(k, l).is_zero()) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (!b[k].is_zero()) out[i * b.size() + k] = a[i] * b[k];
  }
  return out;
}

}  // namespace amalgam::linalg
