// Shared constructions for the test binaries.
#ifndef AMALGAM_TESTS_SUPPORT_HPP
#define AMALGAM_TESTS_SUPPORT_HPP

#include <string>
#include <vector>

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/fock.hpp"
#include "amalgam/io.hpp"
#include "amalgam/triangle.hpp"

namespace support {

using namespace amalgam;
using linalg::Mat;

inline GroupPtr cyclic(int n) { return make_group(FiniteGroup::cyclic(n)); }

inline GroupMorphism cyclic_into(const GroupPtr& z, const GroupPtr& g, int gen) {
  GroupMorphism f{z, g, std::vector<int>(z->order())};
  for (int k = 0; k < z->order(); ++k) f.map[k] = g->power(gen, k);
  return f;
}

inline int el(const GroupPtr& g, const std::string& label) {
  const int x = g->find_label(label);
  if (x < 0) throw std::runtime_error("no element " + label);
  return x;
}

struct CyclicEdge {
  int order;
  std::string at_a;
  std::string at_b;
};

// Triangle with cyclic edge groups and a trivial core; edges in the order 12, 13, 23.
inline GroupTriangle cyclic_triangle(const std::vector<GroupPtr>& v, const std::vector<CyclicEdge>& e) {
  GroupTriangle t;
  t.family.vertices = v;
  const GroupPtr core = make_group(FiniteGroup::trivial());
  for (int k = 0; k < 3; ++k) {
    const auto [a, b] = GroupTriangle::kEdgeEnds[k];
    const GroupPtr z = cyclic(e[k].order);
    t.family.edges.push_back(Edge{a, b, z, cyclic_into(z, v[a], el(v[a], e[k].at_a)),
                                  cyclic_into(z, v[b], el(v[b], e[k].at_b))});
    t.core_into[k] = GroupMorphism{core, z, {0}};
  }
  t.core = core;
  t.validate();
  return t;
}

inline GroupPtr klein() { return make_group(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))); }
inline GroupPtr s3() { return make_group(FiniteGroup::symmetric(3)); }

// Three Klein four-groups glued pairwise along their Z2 factors.
inline GroupTriangle klein_triangle() {
  const GroupPtr v = klein();
  return cyclic_triangle({v, v, v}, {{2, "(a,e)", "(a,e)"}, {2, "(e,a)", "(a,e)"}, {2, "(e,a)", "(e,a)"}});
}

inline GroupTriangle s3_triangle() {
  const GroupPtr s = s3();
  return cyclic_triangle({s, s, s}, {{2, "(12)", "(12)"}, {2, "(23)", "(12)"}, {2, "(23)", "(23)"}});
}

// Smallest collapsing shape found by the exhaustive search: S3, Z6, S3.
inline GroupTriangle collapsing_triangle() {
  const GroupPtr s = s3(), z6 = cyclic(6);
  return cyclic_triangle({s, z6, s}, {{2, "(12)", "a^3"}, {2, "(23)", "(12)"}, {3, "a^2", "(123)"}});
}

// Every vertex replaced by G x Z3 with the edges landing in G x {e}.
inline GroupTriangle padded(const GroupTriangle& t) {
  GroupTriangle p = t;
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  for (auto& v : p.family.vertices) v = make_group(FiniteGroup::direct_product(*v, z3));
  for (std::size_t k = 0; k < p.family.edges.size(); ++k) {
    Edge& e = p.family.edges[k];
    e.into_a.codomain = p.family.vertices[e.a];
    e.into_b.codomain = p.family.vertices[e.b];
    for (auto& x : e.into_a.map) x *= 3;
    for (auto& x : e.into_b.map) x *= 3;
  }
  p.validate();
  return p;
}

// Coordinates of C[H] -> C[G] induced by a group map, and the restriction back.
inline Mat group_map(const GroupMorphism& f) {
  Mat m(f.codomain->order(), f.domain->order());
  for (int g = 0; g < f.domain->order(); ++g) m(f(g), g) = Scalar(1);
  return m;
}
inline Mat preimage_map(const GroupMorphism& f) {
  Mat m(f.domain->order(), f.codomain->order());
  for (int g = 0; g < f.domain->order(); ++g) m(g, f(g)) = Scalar(1);
  return m;
}

inline Mat perm_u() { return permutation_matrix({0, 3, 2, 1}); }
inline Mat perm_v() { return permutation_matrix({0, 1, 3, 2}); }

inline Mat unit_column(const StarAlgebra& a) {
  Mat m(a.dim, 1);
  m.set_col(0, a.unit);
  return m;
}

// Vertices M4 = M2 (x) M2; edges u(M2 (x) I)u, I (x) M2, v(M2 (x) I)v.
inline AlgebraTriangle biunitary_triangle() {
  const AlgebraPtr m4 = make_algebra(tensor(matrix_algebra(2), matrix_algebra(2)));
  const AlgebraPtr m2 = make_algebra(matrix_algebra(2));
  const AlgebraPtr c = make_algebra(scalars());
  const Mat eu = io::tensor_embedding(*m4, *m2, perm_u(), true);
  const Mat e0 = io::tensor_embedding(*m4, *m2, Mat::identity(4), false);
  const Mat ev = io::tensor_embedding(*m4, *m2, perm_v(), true);
  AlgebraTriangle t;
  t.vertices = {m4, m4, m4};
  t.edges[0] = {0, 1, m2, eu, eu};
  t.edges[1] = {0, 2, m2, e0, e0};
  t.edges[2] = {1, 2, m2, ev, ev};
  t.core = c;
  t.core_into = {unit_column(*m2), unit_column(*m2), unit_column(*m2)};
  t.validate();
  return t;
}
// Three M2 tensor factors, one per edge: vertex 1 = B13 (x) B12, 2 = B23 (x) B12, 3 = B23 (x) B13.
inline AlgebraTriangle tensor_triangle() {
  const AlgebraPtr m4 = make_algebra(tensor(matrix_algebra(2), matrix_algebra(2)));
  const AlgebraPtr m2 = make_algebra(matrix_algebra(2));
  const Mat left = io::tensor_embedding(*m4, *m2, Mat::identity(4), true);
  const Mat right = io::tensor_embedding(*m4, *m2, Mat::identity(4), false);
  AlgebraTriangle t;
  t.vertices = {m4, m4, m4};
  t.edges[0] = {0, 1, m2, right, right};
  t.edges[1] = {0, 2, m2, left, right};
  t.edges[2] = {1, 2, m2, left, left};
  t.core = make_algebra(scalars());
  t.core_into = {unit_column(*m2), unit_column(*m2), unit_column(*m2)};
  t.validate();
  return t;
}

// Families ordered u, v, 0.
inline const std::vector<int> kBiunitaryOrder{0, 2, 1};

inline std::string fixture(const std::string& rel) { return std::string(AMALGAM_FIXTURE_DIR) + "/" + rel; }

inline GroupTriangle load_triangle(const std::string& rel) {
  io::Loader l;
  const auto path = std::filesystem::path(fixture(rel));
  return l.group_triangle(l.load(path), path.parent_path());
}

inline bool all_zero(const Vec& v) { return linalg::is_zero(v); }

// All alternating words of centered basis letters with the given shape.
template <class F>
void for_each_centered_word(const std::vector<std::vector<Vec>>& centered, const std::vector<int>& shape, F&& f) {
  for (int i : shape)
    if (centered[i].empty()) return;
  std::vector<std::size_t> idx(shape.size(), 0);
  while (true) {
    FockWord w;
    for (std::size_t k = 0; k < shape.size(); ++k) w.push_back({shape[k], centered[shape[k]][idx[k]]});
    f(w);
    std::size_t k = 0;
    while (k < shape.size() && ++idx[k] == centered[shape[k]].size()) idx[k++] = 0;
    if (k == shape.size()) break;
  }
}

}  // namespace support

#endif  // AMALGAM_TESTS_SUPPORT_HPP
