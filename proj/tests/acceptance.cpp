// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/amalgam_engine.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/fock.hpp"
#include "amalgam/io.hpp"
#include "amalgam/kernels.hpp"
#include "amalgam/triangle.hpp"
#include "support.hpp"

using namespace amalgam;
using linalg::Mat;

namespace {

// Pinned limits, seconds.  All comparisons are exact.
constexpr double kBiunitaryLimit = 10.0;
constexpr double kTableLimit = 1.0;
constexpr double kAngleLimit = 5.0;
constexpr double kDefaultLimit = 120.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Everything built along the way, for the property criterion.
std::vector<AlgebraPtr> g_algebras;
std::vector<std::pair<std::string, bool>> g_gram_psd;
std::vector<std::pair<std::string, bool>> g_confluence;

void note_fock(const std::string& name, const TruncatedFockModule& f) { g_gram_psd.push_back({name, f.psd()}); }

Mat m2_unit(int i, int j) {
  Mat m(2, 2);
  m(i, j) = Scalar(1);
  return m;
}

Mat scaled(const Mat& m, const Scalar& s) {
  Mat out = m;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c) * s;
  return out;
}

struct Loaded {
  AlgebraTriangle t;
  std::vector<int> order;
};

Loaded load_algebra_triangle(const std::string& rel) {
  io::Loader l;
  const auto path = std::filesystem::path(support::fixture(rel));
  Loaded out;
  out.t = l.algebra_triangle(l.load(path), path.parent_path(), &out.order);
  return out;
}

Outcome biunitary_amalgam() {
  const Loaded in = load_algebra_triangle("algebras/biunitary.json");
  const RuleSet rs = discover_rules(in.t, in.order);
  const RelationAlgebra r = build_relation_algebra(in.t, rs);
  g_algebras.push_back(r.algebra);
  g_confluence.push_back({"biunitary", r.confluence.ok});
  const StarAlgebra& a = *r.algebra;
  const int zdim = static_cast<int>(center(a, family_generators(r)).dim());
  int n = 0;
  std::string mu = "matrix units found";
  try {
    n = matrix_units_discovery(a, family_projections(r), family_generators(r)).n;
  } catch (const Error& e) {
    mu = e.kind();
  }
  const EmbeddingReport e = embed_vertices(in.t, r);
  std::ostringstream s;
  s << "dim " << a.dim << ", center dim " << zdim << ", " << mu << (n ? " n=" + std::to_string(n) : "") << ", ranks "
    << e.ranks[0] << "/" << e.ranks[1] << "/" << e.ranks[2] << ", diagrams " << (e.diagrams[0] && e.diagrams[1] && e.diagrams[2] ? "commute" : "fail");
  if (zdim != 1)
    s << "; the center is spanned by " << zdim << " central projections, so the amalgam is a direct sum of " << zdim
      << " simple blocks and not M8";
  const bool pass = a.dim == 64 && zdim == 1 && n == 8 && e.ranks == std::array<int, 3>{16, 16, 16} && e.ok();
  return {pass, s.str()};
}

Outcome table_relations() {
  const Mat u = support::perm_u(), v = support::perm_v(), id2 = Mat::identity(2);
  using Units = std::function<Mat(int, int)>;
  const Units eu = [&](int i, int j) { return u * linalg::kron(m2_unit(i, j), id2) * u; };
  const Units ev = [&](int i, int j) { return v * linalg::kron(m2_unit(i, j), id2) * v; };
  const Units e0 = [&](int i, int j) { return linalg::kron(id2, m2_unit(i, j)); };
  struct Block {
    Units x, y, z;  // diagonal of x commutes with z; x twists against y
  };
  const std::vector<Block> blocks{{eu, e0, ev}, {ev, eu, e0}, {e0, ev, eu}};
  int checked = 0, failed = 0, literal_diag_failures = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          ++checked;
          failed += b.x(i, i) * b.z(k, l) != b.z(k, l) * b.x(i, i);
        }
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        ++checked;
        failed += b.x(i, i) * b.y(k, k) != b.y(k, k) * b.x(i, i);
      }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const bool holds = b.x(i, j) * b.y(k, l) == b.y(k, l) * b.x(1 - i, 1 - j);
            if (k == l) {
              literal_diag_failures += !holds;
              continue;
            }
            ++checked;
            failed += !holds;
          }
  }
  std::ostringstream s;
  s << checked << " instances exact, " << failed << " failures; twisted rows read for k != l ("
    << literal_diag_failures << " literal k = l instances fail and contradict the diagonal rows)";
  return {failed == 0 && checked == 60, s.str()};
}

struct Square {
  AlgebraPtr a = make_algebra(tensor(matrix_algebra(2), matrix_algebra(2)));
  ConditionalExpectation e0 = trace_expectation(a, TensorSide::Left);
  ConditionalExpectation er = trace_expectation(a, TensorSide::Right);
  ConditionalExpectation eu = conjugate_expectation(er, a->from_matrix(support::perm_u()));
  ConditionalExpectation ev = conjugate_expectation(er, a->from_matrix(support::perm_v()));
};

Outcome commuting_squares() {
  const Square q;
  g_algebras.push_back(q.a);
  const bool u0 = commuting_square_check(q.eu, q.e0).ok, v0 = commuting_square_check(q.ev, q.e0).ok;
  const SquareReport uv = commuting_square_check(q.eu, q.ev);
  // the displayed formula, from y -> u E_R(y) u
  const StarAlgebra& A = *q.a;
  const Mat u = support::perm_u(), v = support::perm_v();
  auto literal = [&](const Mat& y) { return u * A.to_matrix(q.er(A.from_matrix(y))) * u; };
  Mat a(2, 2);
  a(0, 0) = Scalar(2);
  a(0, 1) = Scalar(3);
  a(1, 0) = Scalar::i();
  a(1, 1) = Scalar::rational(-5, 7);
  const Mat y = v * linalg::kron(a, Mat::identity(2)) * v;
  const Mat formula = scaled(u * linalg::kron(m2_unit(0, 0), Mat::identity(2)) * u, a(0, 0)) +
                      scaled(u * linalg::kron(m2_unit(1, 1), Mat::identity(2)) * u, a(1, 1));
  const bool literal_matches = literal(y) == formula;
  bool literal_idempotent = true;
  for (int x = 0; x < A.dim; ++x) {
    const Mat m = A.to_matrix(A.basis(x));
    literal_idempotent = literal_idempotent && literal(literal(m)) == literal(m);
  }
  const Mat actual = A.to_matrix(q.eu(A.from_matrix(y)));
  const bool actual_matches = actual == formula;
  const bool actual_trace = actual == scaled(Mat::identity(4), (a(0, 0) + a(1, 1)) * Scalar::rational(1, 2));
  std::ostringstream s;
  s << "(E_u,E_0) " << (u0 ? "commuting" : "not commuting") << ", (E_v,E_0) " << (v0 ? "commuting" : "not commuting")
    << ", (E_u,E_v) " << (uv.ok ? "commuting" : "not commuting (witness " + std::to_string(uv.witness) + ")")
    << "; the displayed formula is reproduced by y -> u E_R(y) u (" << (literal_matches ? "yes" : "no")
    << "), which is " << (literal_idempotent ? "" : "not ") << "idempotent, while the expectation onto D12 "
    << (actual_matches ? "agrees" : actual_trace ? "gives tau(a) I" : "differs") << (uv.ok ? "; no witness exists" : "");
  return {u0 && v0 && !uv.ok && actual_matches, s.str()};
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome angles() {
  const GroupPtr s = support::s3(), v = support::klein();
  auto sub = [](const GroupPtr& g, const std::string& l) { return subgroup_generated(g, {support::el(g, l)}); };
  AngleReport a, b;
  AngleSumReport sum;
  const double ta = seconds([&] { a = stallings_angle(sub(s, "(12)"), sub(s, "(13)"), trivial_subgroup(s), 12); });
  const double tb = seconds([&] { b = stallings_angle(sub(v, "(a,e)"), sub(v, "(e,a)"), trivial_subgroup(v), 12); });
  const double tc = seconds([&] { sum = angle_sum_check(support::load_triangle("triangles/s3.json"), 12); });
  std::ostringstream s2;
  s2 << "S3 theta " << a.theta_str() << ", V4 theta " << b.theta_str() << ", S3 triangle sum " << sum.bound_sum
     << " pi " << (sum.sufficient ? "SUFFICIENT" : "insufficient") << ", times " << ta << "/" << tb << "/" << tc << " s";
  const bool pass = a.status == AngleStatus::Exact && a.theta_str() == "pi/3" && b.status == AngleStatus::Exact &&
                    b.theta_str() == "pi/2" && sum.sufficient && sum.bound_sum == 1 && ta <= kAngleLimit &&
                    tb <= kAngleLimit && tc <= kAngleLimit;
  return {pass, s2.str()};
}

Outcome cosets() {
  const GroupTriangle t = support::load_triangle("triangles/z2z2z2.json");
  const FamilyPresentation fp = presentation_of_family(t.family);
  const CosetResult r = coset_enumeration(fp.presentation, {}, 10000);
  const Realization real = realize_triangle(t);
  const bool injective = real.injective == std::array<bool, 3>{true, true, true};
  const auto dih = Presentation::parse("gens: x y\nrel: x x\nrel: y y\n");
  bool overflow = true;
  for (long bound : {3L, 4L, 10L, 100L, 1000L, 10000L}) overflow = overflow && !coset_enumeration(dih, {}, bound).complete;
  std::ostringstream s;
  s << (r.complete ? "complete" : "incomplete") << " with " << r.cosets << " cosets, psi " << (injective ? "injective" : "not injective")
    << ", infinite dihedral " << (overflow ? "UNKNOWN (overflow) at bounds 3..10000" : "completed");
  return {r.complete && r.cosets == 8 && injective && overflow, s.str()};
}

Outcome bridge() {
  const GroupTriangle t = support::load_triangle("triangles/z2z2z2.json");
  const BridgeReport b = group_algebra_bridge(realize_triangle(t), t);
  std::ostringstream s;
  s << "relation algebra dim " << b.algebra_dim << ", group order " << b.group_order << ", structure constants "
    << (b.structure_match ? "equal" : "differ");
  return {!b.skipped && b.bijective && b.structure_match && b.generated && b.diagrams, s.str()};
}

std::vector<PointedAlgebra> z2_pair() {
  const AlgebraPtr a = make_algebra(group_star_algebra(FiniteGroup::cyclic(2)));
  g_algebras.push_back(a);
  return {over_scalars(a), over_scalars(a)};
}

Outcome freeness() {
  const auto factors = z2_pair();
  const auto f = fock_from_algebras(factors, 4);
  note_fock("z2*z2 depth 4", f);
  std::vector<std::vector<Vec>> centered{centered_basis(factors[0]), centered_basis(factors[1])};
  int words = 0, vanish = 0;
  for (const auto& shape : alternating_tuples(2, 4))
    support::for_each_centered_word(centered, shape, [&](const FockWord& w) {
      ++words;
      vanish += support::all_zero(free_expectation(f, w));
    });
  const GroupPtr z2 = support::cyclic(2);
  const TwoFactor d = TwoFactor::trivial_over(z2, z2);
  const Vec g{Scalar(0), Scalar(1)};
  int group_words = 0, agree = 0;
  for (int n = 1; n <= 4; ++n)
    for (int mask = 0; mask < (1 << n); ++mask) {
      FockWord w;
      AmalgamWord gw;
      for (int k = 0; k < n; ++k) {
        w.push_back({(mask >> k) & 1, g});
        gw.push_back({(mask >> k) & 1, 1});
      }
      ++group_words;
      agree += free_expectation(f, w) == Vec{Scalar(reduce_two_factor(d, gw).empty() ? 1 : 0)};
    }
  std::ostringstream s;
  s << vanish << "/" << words << " centered words vanish, " << agree << "/" << group_words << " group words match the normal-form oracle";
  return {words == 8 && vanish == words && group_words == 30 && agree == 30, s.str()};
}

Outcome factor_expectations() {
  const auto factors = z2_pair();
  const auto f = fock_from_algebras(factors, 3);
  note_fock("z2*z2 depth 3", f);
  int checks = 0, ok = 0;
  for (int x = 0; x < 2; ++x) {
    const Vec b = linalg::unit_vector(2, x);
    ++checks;
    ok += factor_expectation(f, 0, {{0, b}}) == b;
    ++checks;
    ok += factor_expectation(f, 0, {{1, b}}) == linalg::scale(factors[1].apply(b)[0], factors[0].algebra->unit);
  }
  std::vector<std::vector<Vec>> centered{centered_basis(factors[0]), centered_basis(factors[1])};
  for (const std::vector<int> shape : {std::vector<int>{0, 1}, {1, 0}, {0, 1, 0}, {1, 0, 1}})
    support::for_each_centered_word(centered, shape, [&](const FockWord& w) {
      checks += 2;
      ok += support::all_zero(factor_expectation(f, 0, w));
      ok += support::all_zero(factor_expectation_fock(f, 0, w));
    });
  std::ostringstream s;
  s << ok << "/" << checks << " exact checks of restriction and vanishing";
  return {ok == checks, s.str()};
}

Outcome audit() {
  const GroupTriangle t = support::load_triangle("triangles/z2z2z2.json");
  const Realization real = realize_triangle(t);
  const AlgebraPtr base = group_amalgam_base(real);
  const GroupMorphism h{support::klein(), make_group(FiniteGroup::dihedral(4)), {0, 4, 2, 6}};
  require_injective(h, "subgroup");
  const AlgebraPtr a = make_algebra(group_star_algebra(*h.codomain)), bi = make_algebra(group_star_algebra(*h.domain));
  g_algebras.insert(g_algebras.end(), {base, a, bi});
  std::vector<LocalPiece> pieces;
  for (int i = 0; i < 3; ++i)
    pieces.push_back({PointedAlgebra{a, bi, support::group_map(h), support::preimage_map(h)}, support::group_map(real.psi[i]),
                      support::preimage_map(real.psi[i])});
  const GeneralizedAmalgam g = generalized_reduced_amalgam(pieces, base, 2);
  note_fock("D4 over C[Z2^3] depth 2", g.module);
  for (const auto& v : g.views) note_fock("inner two-factor module", v.inner);
  const AuditReport rep = decomposition_audit(g);
  std::vector<std::vector<Vec>> centered;
  for (const auto& p : pieces) centered.push_back(centered_basis(p.local));
  int words = 0, vanish = 0;
  for (const auto& shape : alternating_tuples(3, 2))
    support::for_each_centered_word(centered, shape, [&](const FockWord& w) {
      ++words;
      vanish += support::all_zero(free_expectation(g.module, w));
    });
  std::ostringstream s;
  s << "built " << rep.built << ", counted " << rep.counted << ", " << vanish << "/" << words << " centered moments vanish";
  return {rep.ok && words > 0 && vanish == words, s.str()};
}

Outcome reduction() {
  int decided = 0, agree = 0;
  std::ostringstream s;
  for (const char* f : {"triangles/z2z2z2.json", "triangles/z2z2z2_padded.json", "triangles/s3.json", "triangles/s3_padded.json",
                        "triangles/collapsing.json", "triangles/collapsing_padded.json", "triangles/collapsing_f20.json",
                        "triangles/collapsing_f20_padded.json"}) {
    const GroupTriangle t = support::load_triangle(f);
    const Verdict a = realize_triangle(t).verdict, b = realize_triangle(reduce_triangle(t)).verdict;
    if (a == Verdict::Unknown || b == Verdict::Unknown) continue;
    ++decided;
    agree += a == b;
  }
  s << agree << "/" << decided << " decided fixtures agree with their reduction";
  return {decided >= 5 && agree == decided, s.str()};
}

Outcome properties() {
  {
    const AlgebraTriangle t = support::tensor_triangle();
    const RelationAlgebra r = build_relation_algebra(t, discover_rules(t, {0, 1, 2}));
    g_algebras.push_back(r.algebra);
    g_confluence.push_back({"tensor", r.confluence.ok});
  }
  {
    const AlgebraTriangle t = support::biunitary_triangle();
    const RelationAlgebra r = build_relation_algebra(t, discover_rules(t, support::kBiunitaryOrder));
    g_algebras.push_back(r.algebra);
    g_confluence.push_back({"biunitary", r.confluence.ok});
  }
  g_algebras.push_back(make_algebra(tensor(matrix_algebra(2), matrix_algebra(2))));
  g_algebras.push_back(make_algebra(group_star_algebra(FiniteGroup::symmetric(3))));

  int confluent = 0;
  for (const auto& [name, ok] : g_confluence) confluent += ok;
  int associative = 0;
  for (const auto& a : g_algebras) associative += !kernels::algebra_assoc_serial(a->structure, a->dim).has_value();

  // normal forms on sampled words
  const GroupPtr s3 = support::s3(), z2 = support::cyclic(2);
  const TwoFactor d{s3, s3, z2, support::cyclic_into(z2, s3, support::el(s3, "(12)")), support::cyclic_into(z2, s3, support::el(s3, "(12)"))};
  std::mt19937 rng(17);
  auto word = [&] {
    AmalgamWord w;
    for (int k = 0, n = static_cast<int>(rng() % 7); k < n; ++k) w.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 6)});
    return w;
  };
  auto cat = [](AmalgamWord a, const AmalgamWord& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  int samples = 0, nf_ok = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const AmalgamWord a = word(), b = word();
    const AmalgamWord ra = reduce_two_factor(d, a), rb = reduce_two_factor(d, b);
    ++samples;
    nf_ok += reduce_two_factor(d, ra) == ra && reduce_two_factor(d, cat(a, b)) == reduce_two_factor(d, cat(ra, rb));
  }

  {
    const auto m2 = over_scalars(make_algebra(matrix_algebra(2)));
    const auto z3 = over_scalars(make_algebra(group_star_algebra(FiniteGroup::cyclic(3))));
    note_fock("M2*C[Z3] depth 3", fock_from_algebras({m2, z3}, 3));
  }
  int psd = 0;
  for (const auto& [name, ok] : g_gram_psd) psd += ok;

  std::ostringstream s;
  s << "confluent " << confluent << "/" << g_confluence.size() << ", associative " << associative << "/" << g_algebras.size()
    << ", normal forms " << nf_ok << "/" << samples << ", psd Gram " << psd << "/" << g_gram_psd.size();
  const bool pass = confluent == static_cast<int>(g_confluence.size()) && associative == static_cast<int>(g_algebras.size()) &&
                    nf_ok == samples && psd == static_cast<int>(g_gram_psd.size()) && !g_gram_psd.empty();
  return {pass, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"biunitary triangle amalgam", kBiunitaryLimit, biunitary_amalgam},
      {"commutation table", kTableLimit, table_relations},
      {"commuting squares", kDefaultLimit, commuting_squares},
      {"angles", kDefaultLimit, angles},
      {"coset enumeration", kDefaultLimit, cosets},
      {"group algebra bridge", kDefaultLimit, bridge},
      {"freeness suite", kDefaultLimit, freeness},
      {"factor expectations", kDefaultLimit, factor_expectations},
      {"decomposition audit", kDefaultLimit, audit},
      {"reduction consistency", kDefaultLimit, reduction},
      {"property suites", kDefaultLimit, properties},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    double t = 0;
    try {
      t = seconds([&] { o = criteria[k].run(); });
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const bool in_time = t <= criteria[k].limit;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("AC%zu %s %s: %s [%.2f s, limit %.0f s%s]\n", k + 1, pass ? "PASS" : "FAIL", criteria[k].name, o.detail.c_str(), t,
                criteria[k].limit, in_time ? "" : ", exceeded");
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
