#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"

#include "amalgam/group.hpp"
#include "amalgam/kernels.hpp"
#include "amalgam/star_algebra.hpp"

using namespace amalgam;

namespace {

void with_threads(int n, const std::function<void()>& f) {
#ifdef _OPENMP
  const int before = omp_get_max_threads();
  omp_set_num_threads(n);
  f();
  omp_set_num_threads(before);
#else
  (void)n;
  f();
#endif
}

kernels::Witness first_group_failure(const std::vector<int>& mul, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (mul[mul[i * n + j] * n + k] != mul[i * n + mul[j * n + k]]) return std::array<int, 3>{i, j, k};
  return std::nullopt;
}

Vec times(const SparseTable& t, int dim, const Vec& a, const Vec& b) {
  Vec out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (a[i].is_zero() || b[j].is_zero()) continue;
      for (const auto& [k, c] : t[i * dim + j]) out[k] += a[i] * b[j] * c;
    }
  return out;
}

kernels::Witness first_algebra_failure(const SparseTable& t, int dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        const Vec bi = linalg::unit_vector(dim, i), bj = linalg::unit_vector(dim, j), bk = linalg::unit_vector(dim, k);
        if (times(t, dim, times(t, dim, bi, bj), bk) != times(t, dim, bi, times(t, dim, bj, bk)))
          return std::array<int, 3>{i, j, k};
      }
  return std::nullopt;
}

}  // namespace

TEST_CASE("property: group associativity kernels agree") {
  std::vector<std::pair<std::vector<int>, int>> tables;
  for (const auto& g : {FiniteGroup::symmetric(4), FiniteGroup::dihedral(5), FiniteGroup::cyclic(7)})
    tables.push_back({g.flat_table(), g.order()});
  std::vector<int> minus(25);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) minus[x * 5 + y] = ((x - y) % 5 + 5) % 5;
  tables.push_back({minus, 5});
  std::mt19937 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> t(36);
    for (auto& x : t) x = static_cast<int>(rng() % 6);
    tables.push_back({t, 6});
  }
  for (const auto& [t, n] : tables) {
    const auto expected = first_group_failure(t, n);
    CHECK(kernels::group_assoc_serial(t, n) == expected);
    for (int threads : {1, 2, 4}) with_threads(threads, [&] { CHECK(kernels::group_assoc_parallel(t, n) == expected); });
  }
  CHECK_FALSE(first_group_failure(tables[0].first, tables[0].second));
  CHECK(first_group_failure(minus, 5));
}

TEST_CASE("property: algebra associativity kernels agree") {
  std::vector<StarAlgebra> algebras{matrix_algebra(2), group_star_algebra(FiniteGroup::symmetric(3)),
                                    tensor(matrix_algebra(2), group_star_algebra(FiniteGroup::cyclic(2)))};
  std::vector<std::pair<SparseTable, int>> tables;
  for (const auto& a : algebras) tables.push_back({a.structure, a.dim});
  SparseTable broken = algebras[0].structure;
  broken[1 * 4 + 2] = {{3, Scalar(1)}};
  tables.push_back({broken, 4});
  for (const auto& [t, dim] : tables) {
    const auto expected = first_algebra_failure(t, dim);
    CHECK(kernels::algebra_assoc_serial(t, dim) == expected);
    for (int threads : {1, 3}) with_threads(threads, [&] { CHECK(kernels::algebra_assoc_parallel(t, dim) == expected); });
  }
  CHECK(first_algebra_failure(broken, 4));
}

TEST_CASE("property: table and gram kernels agree") {
  const StarAlgebra a = group_star_algebra(FiniteGroup::dihedral(3));
  const kernels::PairFn product = [&](int i, int j) { return to_sparse(a.mul(a.basis(i), a.basis(j))); };
  const auto serial = kernels::pair_table_serial(a.dim, a.dim, product);
  CHECK(serial == a.structure);
  with_threads(4, [&] { CHECK(kernels::pair_table_parallel(a.dim, a.dim, product) == serial); });

  const kernels::EntryFn entry = [](int x, int y) {
    return Scalar::parse(std::to_string(x + 1) + "/" + std::to_string(y + 2)) + (x == y ? Scalar(0) : Scalar::i());
  };
  const auto g = kernels::gram_serial(5, entry);
  with_threads(3, [&] { CHECK(kernels::gram_parallel(5, entry) == g); });
  CHECK(g == g.adjoint());
  for (int x = 0; x < 5; ++x)
    for (int y = x; y < 5; ++y) CHECK(g(x, y) == entry(x, y));
}

TEST_CASE("sparse conversion round trip") {
  const Vec v{Scalar(0), Scalar::parse("3/4"), Scalar(0), Scalar::i()};
  const SparseVec s = to_sparse(v);
  CHECK(s.size() == 2);
  CHECK(s[0].first == 1);
  CHECK(to_dense(s, 4) == v);
}
