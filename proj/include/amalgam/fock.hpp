#ifndef AMALGAM_FOCK_HPP
#define AMALGAM_FOCK_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amalgam/star_algebra.hpp"
#include "amalgam/triangle.hpp"

namespace amalgam {

/// Algebra A containing a base D, with an expectation A -> D, in coordinates.
struct PointedAlgebra {
  AlgebraPtr algebra;
  AlgebraPtr base;
  linalg::Mat embed;   // dim A x dim D
  linalg::Mat expect;  // dim D x dim A

  Vec apply(const Vec& a) const { return expect * a; }
  /// a - embed(expect(a))
  Vec centered(const Vec& a) const;
};

/// Throws NotMorphism/NotInjective for the embedding, NotExpectation for the laws.
void require_pointed(const PointedAlgebra& p);
/// Expectation onto the scalars given by the algebra's trace.
PointedAlgebra over_scalars(const AlgebraPtr& a);
/// Reads a conditional expectation of A onto the image of embed as D-coordinates.
PointedAlgebra pointed_from_expectation(const ConditionalExpectation& e, const AlgebraPtr& base,
                                        const linalg::Mat& embed);
/// Centered basis: a basis of the kernel of the expectation.
std::vector<Vec> centered_basis(const PointedAlgebra& p);

/// E = xi D (+) E°, coordinates (D part, complement part).
struct PointedModule {
  AlgebraPtr base;
  AlgebraPtr acting;
  int m = 0;                              // dim E°
  std::vector<std::vector<Vec>> form;     // <x, y> on E° in D coordinates
  std::vector<linalg::Mat> left, right;   // action of each base basis element on E°
  std::function<linalg::Mat(const Vec&)> act;        // left multiplication on E
  std::function<linalg::Mat(const Vec&)> act_right;  // right multiplication on E, may be empty

  int dim() const { return base->dim + m; }
};

struct ExpectationModule {
  PointedAlgebra source;
  linalg::Subspace null;      // A-coordinates of the null space
  linalg::Subspace killed;    // null space plus the base image
  std::vector<std::size_t> kept;
  std::vector<Vec> reps;      // centered representatives of the E° basis
  bool faithful = false;      // left representation injective
  PointedModule module;

  /// Coordinates of the class of a in E.
  Vec classify(const Vec& a) const;
};

/// The scalars as a shared base algebra.
AlgebraPtr scalar_base();
/// Same dimension, structure constants, unit and star.
bool same_algebra(const StarAlgebra& a, const StarAlgebra& b);

/// Throws TraceNotFaithful when the base trace is missing or degenerate.
std::shared_ptr<const ExpectationModule> gns(const PointedAlgebra& p);
void require_faithful_trace(const StarAlgebra& base);

struct ShapeSpace {
  std::vector<int> factors;            // alternating factor indices
  std::vector<std::size_t> radix;      // complement dimensions
  std::size_t ambient = 1;
  linalg::Subspace null;
  std::vector<std::size_t> kept;
  std::size_t offset = 0;              // position in module coordinates
  std::vector<linalg::Mat> form;       // per base basis element, on kept coordinates
  std::vector<linalg::Mat> ambient_form;  // per base basis element, only for shapes shorter than the depth
  bool psd = true;

  std::size_t size() const { return kept.size(); }
  Vec project(const Vec& a) const;
  Vec lift(const Vec& q) const;
};

using FockWord = std::vector<std::pair<int, Vec>>;

struct TruncatedFockModule {
  AlgebraPtr base;
  std::vector<PointedModule> factors;
  std::vector<std::shared_ptr<const ExpectationModule>> sources;  // filled when built from algebras
  int depth = 1;
  std::vector<ShapeSpace> shapes;  // by length, then lexicographic
  std::map<std::vector<int>, int> shape_index;
  int dim = 0;

  /// Vector xi d.
  Vec xi(const Vec& d) const;
  Vec xi() const;
  /// B-valued form of two module vectors.
  Vec form(const Vec& x, const Vec& y) const;
  /// Scalarized Gram matrix of the whole module.
  linalg::Mat scalar_gram() const;
  bool psd() const;

  /// Left action of an element of factor i on a module vector.  Terms beyond the depth are dropped and flagged.
  Vec apply_lambda(int i, const Vec& a, const Vec& v, bool* boundary = nullptr) const;
  Vec apply_rho(int i, const Vec& a, const Vec& v, bool* boundary = nullptr) const;
  Vec apply_left_base(const Vec& b, const Vec& v) const;
  Vec apply_right_base(const Vec& b, const Vec& v) const;
  /// Left action of an element of factor i as a matrix.
  linalg::Mat lambda(int i, const Vec& a, bool* boundary = nullptr) const;
  /// Right multiplication by an element of factor i.
  linalg::Mat rho(int i, const Vec& a, bool* boundary = nullptr) const;
  linalg::Mat left_base(const Vec& b) const;
  linalg::Mat right_base(const Vec& b) const;
  /// Indices of coordinates lying in words shorter than the depth.
  std::vector<int> interior() const;
  std::string shape_label(int s) const;
};

/// Throws BaseMismatch, BadDepth.
TruncatedFockModule fock_space(std::vector<PointedModule> factors, int depth);
TruncatedFockModule fock_from_algebras(const std::vector<PointedAlgebra>& factors, int depth);

/// (xi, lambda(a1)...lambda(an) xi) in base coordinates.  Throws DepthExceeded, FactorIndexBad.
Vec free_expectation(const TruncatedFockModule& f, const FockWord& word);

/// Product of letters reduced to alternating centered form: shape -> tensor of letter coordinates.
using ReducedWord = std::map<std::vector<int>, Vec>;
ReducedWord reduce_letters(const std::vector<PointedAlgebra>& factors, const FockWord& word);
/// Expectation onto factor i0 by linearity over the reduced form.  Throws DepthExceeded.
Vec factor_expectation(const TruncatedFockModule& f, int i0, const FockWord& word);
/// Same expectation read off the Fock vector word . xi (coordinates in E of factor i0).
Vec factor_expectation_fock(const TruncatedFockModule& f, int i0, const FockWord& word);

/// One piece of the generalized family: A_i over B_i, with B_i inside the common base B.
struct LocalPiece {
  PointedAlgebra local;     // A_i -> B_i
  linalg::Mat into_base;    // B_i -> B, dim B x dim B_i
  linalg::Mat base_expect;  // B -> B_i, dim B_i x dim B
};

struct TwoFactorView {
  TruncatedFockModule inner;        // over B_i, factors (A_i, B)
  std::vector<int> shapes;          // inner shapes forming the complement
  linalg::Mat to_inner;             // view coordinates -> inner coordinates
  linalg::Mat from_inner;           // inverse on the image
  PointedModule module;             // over B, acted on by A_i
};

struct GeneralizedAmalgam {
  AlgebraPtr base;
  std::vector<TwoFactorView> views;
  TruncatedFockModule module;
  std::vector<bool> sigma_injective;
  int depth = 1;
};

/// Throws BNotRealizable when the base is missing.
GeneralizedAmalgam generalized_reduced_amalgam(const std::vector<LocalPiece>& pieces, const AlgebraPtr& base,
                                               int depth);
/// C[G] for a realized group triangle.  Throws BNotRealizable.
AlgebraPtr group_amalgam_base(const Realization& r);

struct AuditReport {
  int built = 0;
  std::string counted;  // exact, may be fractional if ranks are not integral
  bool ok = false;
  std::vector<std::string> complement_dims;  // per piece, counted dimension of the inner complement
};
AuditReport decomposition_audit(const GeneralizedAmalgam& g);

/// Linear map of module coordinates from a sub-family Fock module into the full one,
/// given the factor inclusions (full algebra x sub algebra).
linalg::Mat fock_embedding(const TruncatedFockModule& sub, const TruncatedFockModule& full,
                           const std::vector<linalg::Mat>& inclusions);

/// All alternating index tuples of length 1..n over k factors, lexicographic by length.
std::vector<std::vector<int>> alternating_tuples(int k, int n);

}  // namespace amalgam

#endif  // AMALGAM_FOCK_HPP
