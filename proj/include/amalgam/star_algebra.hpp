#ifndef AMALGAM_STAR_ALGEBRA_HPP
#define AMALGAM_STAR_ALGEBRA_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/group.hpp"
#include "amalgam/kernels.hpp"
#include "amalgam/linalg.hpp"

namespace amalgam {

/// Finite-dimensional unital *-algebra given by structure constants.
struct StarAlgebra {
  int dim = 0;
  std::vector<std::string> labels;
  SparseTable structure;          // b_i b_j, entry i*dim+j
  Vec unit;
  std::vector<SparseVec> star;    // b_i^*
  std::optional<Vec> trace;       // tau(b_i), a faithful normalized trace when present
  std::vector<int> matrix_factors;  // M_{n1} (x) M_{n2} ..., empty when not a matrix algebra

  Vec basis(int i) const { return linalg::unit_vector(dim, i); }
  Vec mul(const Vec& x, const Vec& y) const;
  Vec star_of(const Vec& x) const;
  Scalar tau(const Vec& x) const;
  /// Matrix of y -> x y (left) or y -> y x (right) in coordinates.
  linalg::Mat left_mult(const Vec& x) const;
  linalg::Mat right_mult(const Vec& x) const;

  /// Throws NotAssociative, BadUnit or BadStar.
  void validate() const;

  bool has_matrix_structure() const { return !matrix_factors.empty(); }
  int matrix_size() const;
  linalg::Mat to_matrix(const Vec& x) const;
  Vec from_matrix(const linalg::Mat& m) const;
};

using AlgebraPtr = std::shared_ptr<const StarAlgebra>;
inline AlgebraPtr make_algebra(StarAlgebra a) { return std::make_shared<const StarAlgebra>(std::move(a)); }

StarAlgebra scalars();
StarAlgebra matrix_algebra(int n);
StarAlgebra tensor(const StarAlgebra& a, const StarAlgebra& b);
StarAlgebra group_star_algebra(const FiniteGroup& g);
StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b);
/// Validated algebra from explicit data.
StarAlgebra algebra_from_structure(int dim, std::vector<std::string> labels, SparseTable structure, Vec unit,
                                   std::vector<SparseVec> star, std::optional<Vec> trace = std::nullopt);

struct SubalgebraSpan {
  AlgebraPtr parent;
  linalg::Subspace space;

  int dim() const { return static_cast<int>(space.dim()); }
  bool contains(const Vec& x) const { return space.contains(x); }
};

/// Smallest unital *-subalgebra containing gens.
SubalgebraSpan span_closure(const AlgebraPtr& a, const std::vector<Vec>& gens);
/// Subalgebra spanned by the given vectors; throws NotSubalgebra unless closed.
SubalgebraSpan subalgebra_of(const AlgebraPtr& a, const std::vector<Vec>& vectors);
bool is_closed_subalgebra(const SubalgebraSpan& s);

struct ConditionalExpectation {
  AlgebraPtr source;
  SubalgebraSpan target;
  linalg::Mat matrix;  // dim x dim, coordinates to coordinates

  Vec operator()(const Vec& x) const { return matrix * x; }
};

struct ExpectationLaws {
  bool idempotent = true;
  bool identity_on_target = true;
  bool bimodule = true;
  bool star = true;
  bool trace_preserving = true;  // only meaningful with a trace
  bool ok() const { return idempotent && identity_on_target && bimodule && star && trace_preserving; }
};
ExpectationLaws expectation_laws(const ConditionalExpectation& e);
/// Throws NotExpectation naming the first failing law.
void require_expectation(const ConditionalExpectation& e);

enum class TensorSide { Left, Right };
/// Left: a (x) b -> tau(a) I (x) b.  Right: a (x) b -> tau(b) a (x) I.
ConditionalExpectation trace_expectation(const AlgebraPtr& a, TensorSide side);
/// x -> u E(u* x u) u*, onto u T u*.
ConditionalExpectation conjugate_expectation(const ConditionalExpectation& e, const Vec& u);
/// Expectation onto the scalars given by the trace.
ConditionalExpectation scalar_expectation(const AlgebraPtr& a);
/// Expectation of a group algebra onto the span of a subgroup.
ConditionalExpectation subgroup_expectation(const AlgebraPtr& group_algebra, const Subgroup& h);

bool is_unitary(const StarAlgebra& a, const Vec& u);

struct SquareReport {
  bool ok = true;
  int witness = -1;  // basis element where E1E2 and E2E1 differ
  std::string reason;
  int intersection_dim = 0;
};
SquareReport commuting_square_check(const ConditionalExpectation& e1, const ConditionalExpectation& e2);

bool nondegeneracy_check(const SubalgebraSpan& s1, const SubalgebraSpan& s2);

/// Unitarity of w and of its block transpose; needs two matrix factors.
bool biunitary_check(const StarAlgebra& a, const Vec& w);
/// Permutations p of {0..nk-1} (as image lists) whose matrices are biunitary.
std::vector<std::vector<int>> permutation_biunitaries(int n, int k);
linalg::Mat permutation_matrix(const std::vector<int>& p);

}  // namespace amalgam

#endif  // AMALGAM_STAR_ALGEBRA_HPP
