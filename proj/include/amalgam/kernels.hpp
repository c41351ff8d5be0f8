#ifndef AMALGAM_KERNELS_HPP
#define AMALGAM_KERNELS_HPP

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "amalgam/linalg.hpp"
#include "amalgam/scalar.hpp"

// Hot loops with an OpenMP version and a serial reference.  Both return the
// same (lexicographically first) witness, so results do not depend on the
// thread count.
namespace amalgam {

using SparseVec = std::vector<std::pair<int, Scalar>>;  // ascending index
using SparseTable = std::vector<SparseVec>;             // entry i*dim+j

Vec to_dense(const SparseVec& s, std::size_t dim);
SparseVec to_sparse(const Vec& v);

namespace kernels {

using Witness = std::optional<std::array<int, 3>>;

Witness group_assoc_serial(const std::vector<int>& mul, int n);
Witness group_assoc_parallel(const std::vector<int>& mul, int n);

// (b_i b_j) b_k == b_i (b_j b_k) on all basis triples.
Witness algebra_assoc_serial(const SparseTable& table, int dim);
Witness algebra_assoc_parallel(const SparseTable& table, int dim);

using PairFn = std::function<SparseVec(int, int)>;
SparseTable pair_table_serial(int rows, int cols, const PairFn& f);
SparseTable pair_table_parallel(int rows, int cols, const PairFn& f);

using EntryFn = std::function<Scalar(int, int)>;
// Hermitian Gram assembly: fills (x, y) for y >= x and mirrors.
linalg::Mat gram_serial(int n, const EntryFn& f);
linalg::Mat gram_parallel(int n, const EntryFn& f);

}  // namespace kernels
}  // namespace amalgam

#endif  // AMALGAM_KERNELS_HPP
