#include "doctest.h"

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/kernels.hpp"
#include "support.hpp"

using namespace amalgam;
using linalg::Mat;

namespace {

int sigma(int x) { return (1 - x / 2) * 2 + (1 - x % 2); }  // e(i,j) -> e(s(i),s(j)) in the M2 basis
bool diagonal(int x) { return x / 2 == x % 2; }

Vec host_letter(const AlgebraTriangle& t, const RuleSet& rs, int family, int x, int vertex) {
  return t.into(rs.family_edges[family], vertex) * t.edges[rs.family_edges[family]].algebra->basis(x);
}

void check_rules_sound(const AlgebraTriangle& t, const RuleSet& rs) {
  for (const auto& r : rs.rules) {
    const StarAlgebra& host = *t.vertices[r.vertex];
    const Vec lhs = host.mul(host_letter(t, rs, r.hi_family, r.x, r.vertex), host_letter(t, rs, r.lo_family, r.y, r.vertex));
    Vec rhs = linalg::zeros(host.dim);
    for (const auto& term : r.rhs)
      linalg::axpy(term.coeff,
                   host.mul(host_letter(t, rs, r.lo_family, term.lo, r.vertex), host_letter(t, rs, r.hi_family, term.hi, r.vertex)),
                   rhs);
    CHECK(lhs == rhs);
  }
}

bool single_term(const RewriteRule& r, int lo, int hi) {
  return r.rhs.size() == 1 && r.rhs[0].lo == lo && r.rhs[0].hi == hi && r.rhs[0].coeff.is_one();
}

Mat m2_unit(int x) {
  Mat m(2, 2);
  m(x / 2, x % 2) = Scalar(1);
  return m;
}

// Letter x of tensor factor k inside M2 (x) M2 (x) M2.
Mat factor_letter(int k, int x) {
  Mat m = Mat::identity(1);
  for (int p = 0; p < 3; ++p) m = linalg::kron(m, p == k ? m2_unit(x) : Mat::identity(2));
  return m;
}

void check_star_algebra_laws(const StarAlgebra& a) {
  CHECK_FALSE(kernels::algebra_assoc_serial(a.structure, a.dim).has_value());
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      CHECK(a.star_of(a.mul(a.basis(i), a.basis(j))) == a.mul(a.star_of(a.basis(j)), a.star_of(a.basis(i))));
}

struct Built {
  AlgebraTriangle t;
  RuleSet rs;
  RelationAlgebra r;
};

const Built& biunitary() {
  static const Built b = [] {
    Built x;
    x.t = support::biunitary_triangle();
    x.rs = discover_rules(x.t, support::kBiunitaryOrder);
    x.r = build_relation_algebra(x.t, x.rs);
    return x;
  }();
  return b;
}

const Built& tensor3() {
  static const Built b = [] {
    Built x;
    x.t = support::tensor_triangle();
    x.rs = discover_rules(x.t);
    x.r = build_relation_algebra(x.t, x.rs);
    return x;
  }();
  return b;
}

}  // namespace

TEST_CASE("rules for the biunitary triangle reproduce the twisted commutations") {
  const Built& b = biunitary();
  check_rules_sound(b.t, b.rs);
  // positions: 0 = u edge, 1 = v edge, 2 = slice edge
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      // e_v(x) e_u(y) = e_u(y) e_v(s x) when y is off-diagonal
      CHECK(single_term(b.rs.rule(1, 0, x, y), y, diagonal(y) ? x : sigma(x)));
      // e_0(x) e_v(y) = e_v(y) e_0(s x) when y is off-diagonal
      CHECK(single_term(b.rs.rule(2, 1, x, y), y, diagonal(y) ? x : sigma(x)));
      // e_0(x) e_u(y) = e_u(s y) e_0(x) when x is off-diagonal
      CHECK(single_term(b.rs.rule(2, 0, x, y), diagonal(x) ? y : sigma(y), x));
    }
}

TEST_CASE("tensor triangle: untwisted rules and the structure of M2 (x) M2 (x) M2") {
  const Built& b = tensor3();
  check_rules_sound(b.t, b.rs);
  for (const auto& r : b.rs.rules) CHECK(single_term(r, r.y, r.x));
  CHECK(b.r.confluence.ok);
  const StarAlgebra& a = *b.r.algebra;
  REQUIRE(a.dim == 64);
  // basis word -> product of its letters placed in the tensor factor of their edge
  std::vector<Mat> img;
  std::vector<Vec> flat;
  for (int w : b.r.basis_words) {
    const auto l = b.r.decode(w);
    Mat m = Mat::identity(8);
    for (int p = 0; p < 3; ++p) m = m * factor_letter(b.rs.family_edges[p], l[p]);
    img.push_back(m);
    Vec v;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) v.push_back(m(i, j));
    flat.push_back(v);
  }
  CHECK(linalg::rank(flat, 64) == 64);
  auto image = [&](const Vec& x) {
    Mat m(8, 8);
    for (int k = 0; k < a.dim; ++k)
      if (!x[k].is_zero())
        for (std::size_t i = 0; i < 8; ++i)
          for (std::size_t j = 0; j < 8; ++j) m(i, j) += x[k] * img[k](i, j);
    return m;
  };
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) CHECK(image(a.mul(a.basis(i), a.basis(j))) == img[i] * img[j]);
  const auto mu = matrix_units_discovery(a, family_projections(b.r), family_generators(b.r));
  CHECK(mu.n == 8);
  CHECK(mu.center_dim == 1);
}

TEST_CASE("property: relation algebras are confluent associative *-algebras") {
  for (const Built* b : {&biunitary(), &tensor3()}) {
    CHECK(b->r.confluence.ok);
    CHECK(b->r.confluence.triples > 0);
    check_star_algebra_laws(*b->r.algebra);
  }
}

TEST_CASE("biunitary amalgam: dimension, center and projections") {
  const Built& b = biunitary();
  const StarAlgebra& a = *b.r.algebra;
  CHECK(a.dim == 64);
  const auto z = center(a, family_generators(b.r));
  CHECK(z.dim() == 4);
  try {
    matrix_units_discovery(a, family_projections(b.r), family_generators(b.r));
    FAIL("expected NotSimple");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotSimple");
  }
  const auto p = family_projections(b.r);
  REQUIRE(p.size() == 8);
  Vec sum = linalg::zeros(a.dim);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(a.mul(p[i], p[i]) == p[i]);
    CHECK(a.star_of(p[i]) == p[i]);
    for (std::size_t j = 0; j < p.size(); ++j)
      if (i != j) CHECK(linalg::is_zero(a.mul(p[i], p[j])));
    sum = linalg::add(sum, p[i]);
  }
  CHECK(sum == a.unit);
  const auto e = embed_vertices(b.t, b.r);
  CHECK(e.ok());
  CHECK(e.ranks == std::array<int, 3>{16, 16, 16});
  CHECK(e.diagrams == std::array<bool, 3>{true, true, true});
}

TEST_CASE("embeddings of the tensor triangle") {
  const Built& b = tensor3();
  const auto e = embed_vertices(b.t, b.r);
  CHECK(e.ok());
  CHECK(e.injective == std::array<bool, 3>{true, true, true});
  CHECK(e.multiplicative == std::array<bool, 3>{true, true, true});
}

TEST_CASE("forcing a product of projections to vanish breaks injectivity") {
  const Built& b = biunitary();
  // e_u(1,1) e_v(1,1) (e_0(1,1) + e_0(2,2)) = 0
  ExtraRelation kill;
  kill.terms = {{{0, 0, 0}, Scalar(1)}, {{0, 0, 3}, Scalar(1)}};
  const RelationAlgebra r = build_relation_algebra(b.t, b.rs, {kill});
  CHECK(r.algebra->dim < 64);
  const auto e = embed_vertices(b.t, r);
  bool some_failure = false;
  for (int v = 0; v < 3; ++v)
    if (!e.injective[v]) {
      some_failure = true;
      CHECK(linalg::is_zero(e.phi[v] * e.kernel_witness[v]));
      CHECK_FALSE(linalg::is_zero(e.kernel_witness[v]));
    }
  CHECK(some_failure);
  CHECK_THROWS_AS(require_embeddings(e), Error);
}

TEST_CASE("matrix units") {
  const auto m4 = matrix_algebra(4);
  std::vector<Vec> diag;
  for (int i = 0; i < 4; ++i) diag.push_back(m4.basis(i * 4 + i));
  const auto mu = matrix_units_discovery(m4, diag);
  CHECK(mu.n == 4);
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d)
        CHECK(m4.mul(mu.units[a * 4 + c], mu.units[c * 4 + d]) == mu.units[a * 4 + d]);
  const auto cc = direct_sum(scalars(), scalars());
  CHECK_THROWS_AS(matrix_units_discovery(cc, {cc.basis(0), cc.basis(1)}), Error);
}

TEST_CASE("single non-scalar edge gives back that edge") {
  const AlgebraPtr m2 = make_algebra(matrix_algebra(2)), c = make_algebra(scalars());
  AlgebraTriangle t;
  t.vertices = {m2, m2, c};
  t.edges[0] = {0, 1, m2, Mat::identity(4), Mat::identity(4)};
  t.edges[1] = {0, 2, c, support::unit_column(*m2), Mat::identity(1)};
  t.edges[2] = {1, 2, c, support::unit_column(*m2), Mat::identity(1)};
  t.core = c;
  t.core_into = {support::unit_column(*m2), Mat::identity(1), Mat::identity(1)};
  t.validate();
  const auto r = build_relation_algebra(t, discover_rules(t));
  CHECK(r.algebra->dim == 4);
  CHECK(matrix_units_discovery(*r.algebra, family_projections(r), family_generators(r)).n == 2);
}

TEST_CASE("span deficiency is reported") {
  io::Loader l;
  const auto path = std::filesystem::path(support::fixture("algebras/span_deficient.json"));
  const AlgebraTriangle t = l.algebra_triangle(l.load(path), path.parent_path());
  try {
    discover_rules(t);
    FAIL("expected SpanDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == "SpanDeficient");
  }
}

TEST_CASE("group algebra bridge") {
  const auto t = support::klein_triangle();
  const auto real = realize_triangle(t);
  const auto b = group_algebra_bridge(real, t);
  CHECK_FALSE(b.skipped);
  CHECK(b.algebra_dim == 8);
  CHECK(b.group_order == 8);
  CHECK(b.bijective);
  CHECK(b.structure_match);
  CHECK(b.generated);
  CHECK(b.diagrams);

  const GroupPtr one = make_group(FiniteGroup::trivial());
  GroupTriangle trivial;
  trivial.family.vertices = {one, one, one};
  for (const auto& [a, c] : GroupTriangle::kEdgeEnds)
    trivial.family.edges.push_back(Edge{a, c, one, identity_morphism(one), identity_morphism(one)});
  trivial.core = one;
  for (auto& m : trivial.core_into) m = identity_morphism(one);
  const auto tb = group_algebra_bridge(realize_triangle(trivial), trivial);
  CHECK(tb.algebra_dim == 1);
  CHECK(tb.structure_match);

  Realization unknown;
  CHECK(group_algebra_bridge(unknown, t).skipped);
}

TEST_CASE("C*-triangle hypotheses") {
  const AlgebraTriangle t = support::tensor_triangle();
  CstarExpectations ex;
  ex.e12 = trace_expectation(t.vertices[1], TensorSide::Left);
  ex.e13 = trace_expectation(t.vertices[2], TensorSide::Left);
  ex.e123 = scalar_expectation(t.edges[2].algebra);
  const auto rep = check_cstar_triangle_hypotheses(t, ex);
  CHECK(rep.diagram_a2);
  CHECK(rep.diagram_a3);
  for (const auto& [name, ok] : rep.faithful) CHECK(ok);
  CHECK(rep.premise_i == "PREMISE_NOT_DECIDABLE");

  // the vector state at e(1,1) instead of the trace
  const StarAlgebra& m2 = *t.edges[2].algebra;
  ConditionalExpectation state = *ex.e123;
  for (int j = 0; j < m2.dim; ++j) state.matrix.set_col(j, linalg::scale(j == 0 ? Scalar(1) : Scalar(0), m2.unit));
  ex.e123 = state;
  const auto bad = check_cstar_triangle_hypotheses(t, ex);
  CHECK_FALSE(bad.diagram_a2);
  CHECK(bad.witness_a2 >= 0);

  // edge 12 is all of vertex 1 and edge 13 is the core there
  const AlgebraPtr m4 = t.vertices[0], c = t.core;
  AlgebraTriangle d;
  d.vertices = {m4, m4, c};
  d.edges[0] = {0, 1, m4, Mat::identity(16), Mat::identity(16)};
  d.edges[1] = {0, 2, c, support::unit_column(*m4), Mat::identity(1)};
  d.edges[2] = {1, 2, c, support::unit_column(*m4), Mat::identity(1)};
  d.core = c;
  d.core_into = {support::unit_column(*m4), Mat::identity(1), Mat::identity(1)};
  d.validate();
  CHECK(check_cstar_triangle_hypotheses(d, {}).premise_i.rfind("SATISFIED", 0) == 0);
}
