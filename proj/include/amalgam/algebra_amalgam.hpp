#ifndef AMALGAM_ALGEBRA_AMALGAM_HPP
#define AMALGAM_ALGEBRA_AMALGAM_HPP

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "amalgam/star_algebra.hpp"
#include "amalgam/triangle.hpp"

namespace amalgam {

struct AlgebraEdge {
  int a = 0;
  int b = 1;
  AlgebraPtr algebra;
  linalg::Mat into_a;  // dim(vertex a) x dim(edge)
  linalg::Mat into_b;
};

/// Edges listed as 12, 13, 23 (vertices 0-based).
struct AlgebraTriangle {
  std::array<AlgebraPtr, 3> vertices;
  std::array<AlgebraEdge, 3> edges;
  AlgebraPtr core;
  std::array<linalg::Mat, 3> core_into;  // core -> edge

  /// Every map must be an injective unital *-homomorphism.
  void validate() const;
  const linalg::Mat& into(int e, int v) const;
};

/// Throws NotMorphism or NotInjective.
void require_star_embedding(const StarAlgebra& from, const StarAlgebra& to, const linalg::Mat& m, const std::string& what);

/// Group triangle -> triangle of group algebras.
AlgebraTriangle group_algebra_triangle(const GroupTriangle& t);

struct RewriteTerm {
  int lo = 0;  // letter of the lower family
  int hi = 0;  // letter of the higher family
  Scalar coeff;
};

/// (hi family, x)(lo family, y) = sum coeff (lo, y')(hi, x'), checked in the host vertex.
struct RewriteRule {
  int hi_family = 0;
  int lo_family = 0;
  int x = 0;
  int y = 0;
  int vertex = 0;
  std::vector<RewriteTerm> rhs;
};

struct RuleSet {
  std::vector<int> family_edges;  // family position -> edge index
  std::vector<RewriteRule> rules;
  // rule index by (hi, lo, x, y); -1 when absent
  std::vector<int> lookup;
  std::vector<int> dims;  // family dimensions

  const RewriteRule& rule(int hi, int lo, int x, int y) const;
};

/// Default order is edge listing order (12, 13, 23).  Throws SpanDeficient.
RuleSet discover_rules(const AlgebraTriangle& t, std::vector<int> family_edges = {0, 1, 2});

struct ExtraRelation {
  // linear combination of normal words (one letter per family)
  std::vector<std::pair<std::vector<int>, Scalar>> terms;
};

struct ConfluenceReport {
  bool ok = true;
  long triples = 0;
  std::array<int, 6> witness{};  // (family, letter) x 3
};

struct RelationAlgebra {
  RuleSet rules;
  std::vector<AlgebraPtr> families;  // by family position
  int words = 0;                     // product of family dimensions
  linalg::Subspace relations;        // J inside the word space
  std::vector<int> basis_words;      // quotient basis: word indices outside the pivots
  std::vector<int> word_to_basis;    // word index -> basis position or -1
  AlgebraPtr algebra;                // the quotient with its structure constants
  ConfluenceReport confluence;

  std::vector<int> decode(int word) const;
  int encode(const std::vector<int>& letters) const;
  /// A single letter with unit letters in the other families, in the quotient.
  Vec letter(int family, const Vec& x) const;
  Vec letter(int family, int x) const;
  /// Word-space vector -> quotient coordinates.
  Vec project(const Vec& w) const;
  std::string word_label(int word) const;
};

/// Throws NotConfluent, NotAssociative, StarNotClosed.
RelationAlgebra build_relation_algebra(const AlgebraTriangle& t, const RuleSet& rules,
                                       const std::vector<ExtraRelation>& extra = {});

linalg::Subspace center(const StarAlgebra& a, const std::vector<Vec>& generators);

struct MatrixUnits {
  int n = 0;
  std::vector<Vec> units;  // e_ab at a*n+b
  std::vector<Vec> projections;
  bool self_adjoint = false;
  int center_dim = 1;
};

/// Throws NotSimple, NotFullMatrix, ProjectionsNotMinimal.
MatrixUnits matrix_units_discovery(const StarAlgebra& a, const std::vector<Vec>& projections,
                                   const std::vector<Vec>& generators = {});
/// Candidate projections: products of diagonal family letters.
std::vector<Vec> family_projections(const RelationAlgebra& r);
std::vector<Vec> family_generators(const RelationAlgebra& r);

struct EmbeddingReport {
  std::array<linalg::Mat, 3> phi;  // dim(A) x dim(vertex)
  std::array<int, 3> ranks{};
  std::array<bool, 3> injective{};
  std::array<bool, 3> multiplicative{};
  std::array<bool, 3> star{};
  std::array<bool, 3> unital{};
  std::array<bool, 3> diagrams{};  // by edge
  std::array<Vec, 3> kernel_witness;  // vertex coordinates when not injective
  std::array<int, 3> diagram_witness{{-1, -1, -1}};
  bool ok() const;
};
EmbeddingReport embed_vertices(const AlgebraTriangle& t, const RelationAlgebra& r);
/// Throws NotInjective or DiagramFails.
void require_embeddings(const EmbeddingReport& rep);

struct BridgeReport {
  bool skipped = false;
  std::string reason;
  int algebra_dim = 0;
  int group_order = 0;
  bool bijective = false;
  bool structure_match = false;
  bool generated = false;
  bool diagrams = false;
};
/// Compares C[G] of an enumerated group amalgam with the relation algebra
/// of the group-algebra triangle.
BridgeReport group_algebra_bridge(const Realization& r, const GroupTriangle& t);

struct CstarExpectations {
  std::optional<ConditionalExpectation> e12;   // on A2, onto B12
  std::optional<ConditionalExpectation> e13;   // on A3, onto B13
  std::optional<ConditionalExpectation> e123;  // on B23, onto the core
};

struct CstarReport {
  bool diagram_a2 = false;
  bool diagram_a3 = false;
  int witness_a2 = -1;  // basis element of B23
  int witness_a3 = -1;
  std::vector<std::pair<std::string, bool>> faithful;
  std::string premise_i;
  std::string premise_ii;
};
CstarReport check_cstar_triangle_hypotheses(const AlgebraTriangle& t, const CstarExpectations& e);

/// Faithfulness of the GNS representation: a -> (E(x* a y))_{x,y} is injective.
bool faithful_gns(const ConditionalExpectation& e);

}  // namespace amalgam

#endif  // AMALGAM_ALGEBRA_AMALGAM_HPP
