#include "amalgam/kernels.hpp"

#include <omp.h>

#include <limits>

namespace amalgam {

Vec to_dense(const SparseVec& s, std::size_t dim) {
  Vec v(dim);
  for (const auto& [k, c] : s) v[static_cast<std::size_t>(k)] = c;
  return v;
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) s.emplace_back(static_cast<int>(k), v[k]);
  return s;
}

namespace kernels {
namespace {

std::optional<std::pair<int, int>> group_row_witness(const std::vector<int>& mul, int n, int a) {
  const auto N = static_cast<std::size_t>(n);
  for (int b = 0; b < n; ++b) {
    const int ab = mul[a * N + b];
    for (int c = 0; c < n; ++c)
      if (mul[ab * N + c] != mul[a * N + mul[b * N + c]]) return std::make_pair(b, c);
  }
  return std::nullopt;
}

// Dense accumulator that only clears the slots it touched.
struct Accumulator {
  std::vector<Scalar> val;
  std::vector<char> hit;
  std::vector<int> used;

  explicit Accumulator(int dim) : val(dim), hit(dim) {}

  void axpy(const Scalar& coeff, const SparseVec& x) {
    for (const auto& [k, c] : x) {
      val[k].add_product(coeff, c);
      if (!hit[k]) {
        hit[k] = 1;
        used.push_back(k);
      }
    }
  }
  void clear() {
    for (int k : used) {
      val[k] = Scalar();
      hit[k] = 0;
    }
    used.clear();
  }
  bool same(const Accumulator& o) const {
    for (int k : used)
      if (val[k] != o.val[k]) return false;
    for (int k : o.used)
      if (val[k] != o.val[k]) return false;
    return true;
  }
};

std::optional<std::pair<int, int>> algebra_row_witness(const SparseTable& t, int dim, int i) {
  Accumulator lhs(dim), rhs(dim);
  const auto D = static_cast<std::size_t>(dim);
  for (int j = 0; j < dim; ++j) {
    const SparseVec& ij = t[i * D + j];
    for (int k = 0; k < dim; ++k) {
      lhs.clear();
      rhs.clear();
      for (const auto& [m, c] : ij) lhs.axpy(c, t[m * D + k]);              // (b_i b_j) b_k
      for (const auto& [m, c] : t[j * D + k]) rhs.axpy(c, t[i * D + m]);    // b_i (b_j b_k)
      if (!lhs.same(rhs)) return std::make_pair(j, k);
    }
  }
  return std::nullopt;
}

}  // namespace

Witness group_assoc_serial(const std::vector<int>& mul, int n) {
  for (int a = 0; a < n; ++a)
    if (auto w = group_row_witness(mul, n, a)) return std::array<int, 3>{a, w->first, w->second};
  return std::nullopt;
}

Witness group_assoc_parallel(const std::vector<int>& mul, int n) {
  int first = std::numeric_limits<int>::max();
  std::vector<std::pair<int, int>> found(static_cast<std::size_t>(n), {-1, -1});
#pragma omp parallel for schedule(dynamic, 8) reduction(min : first)
  for (int a = 0; a < n; ++a) {
    if (auto w = group_row_witness(mul, n, a)) {
      found[a] = *w;
      first = std::min(first, a);
    }
  }
  if (first == std::numeric_limits<int>::max()) return std::nullopt;
  return std::array<int, 3>{first, found[first].first, found[first].second};
}

Witness algebra_assoc_serial(const SparseTable& table, int dim) {
  for (int i = 0; i < dim; ++i)
    if (auto w = algebra_row_witness(table, dim, i)) return std::array<int, 3>{i, w->first, w->second};
  return std::nullopt;
}

Witness algebra_assoc_parallel(const SparseTable& table, int dim) {
  int first = std::numeric_limits<int>::max();
  std::vector<std::pair<int, int>> found(static_cast<std::size_t>(dim), {-1, -1});
#pragma omp parallel for schedule(dynamic, 1) reduction(min : first)
  for (int i = 0; i < dim; ++i) {
    if (auto w = algebra_row_witness(table, dim, i)) {
      found[i] = *w;
      first = std::min(first, i);
    }
  }
  if (first == std::numeric_limits<int>::max()) return std::nullopt;
  return std::array<int, 3>{first, found[first].first, found[first].second};
}

SparseTable pair_table_serial(int rows, int cols, const PairFn& f) {
  SparseTable t(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t[static_cast<std::size_t>(i) * cols + j] = f(i, j);
  return t;
}

SparseTable pair_table_parallel(int rows, int cols, const PairFn& f) {
  SparseTable t(static_cast<std::size_t>(rows) * cols);
  const long total = static_cast<long>(rows) * cols;
#pragma omp parallel for schedule(dynamic, 4)
  for (long p = 0; p < total; ++p) t[p] = f(static_cast<int>(p / cols), static_cast<int>(p % cols));
  return t;
}

linalg::Mat gram_serial(int n, const EntryFn& f) {
  linalg::Mat g(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      g(x, y) = f(x, y);
      if (y != x) g(y, x) = g(x, y).conj();
    }
  return g;
}

linalg::Mat gram_parallel(int n, const EntryFn& f) {
  linalg::Mat g(n, n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) g(x, y) = f(x, y);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) g(y, x) = g(x, y).conj();
  return g;
}

}  // namespace kernels
}  // namespace amalgam
