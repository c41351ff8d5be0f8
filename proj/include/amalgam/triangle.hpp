#ifndef AMALGAM_TRIANGLE_HPP
#define AMALGAM_TRIANGLE_HPP

#include <array>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/amalgam_engine.hpp"

namespace amalgam {

/// Three vertices; edges listed as (0,1), (0,2), (1,2).
struct GroupTriangle {
  AmalgamFamily family;
  GroupPtr core;
  std::array<GroupMorphism, 3> core_into;  // core -> edge group, by edge index

  static constexpr std::array<std::array<int, 2>, 3> kEdgeEnds{{{0, 1}, {0, 2}, {1, 2}}};

  void validate() const;
  /// Edge index of the unordered pair {a,b}.
  static int edge_of(int a, int b);
  /// The two edges meeting at v, in listing order.
  static std::array<int, 2> edges_at(int v);
  /// Image of edge e in vertex v.
  Subgroup edge_image(int e, int v) const;
  /// core -> vertex v through edge e.
  GroupMorphism core_to_vertex(int e, int v) const;
};

struct FillableReport {
  bool ok = true;
  int vertex = -1;  // witness vertex when !ok
  std::string reason;
  Subgroup intersection;  // of the two edge images at the witness vertex
  Subgroup core_image;
};
FillableReport check_fillable(const GroupTriangle& t);
bool check_minimal(const GroupTriangle& t);

/// Replaces each vertex by the subgroup its incident edges generate.
AmalgamFamily reduce_family(const AmalgamFamily& fam);
struct ReducedFamily {
  AmalgamFamily family;
  std::vector<GroupMorphism> inclusion;  // reduced vertex -> original vertex
};
ReducedFamily reduce_family_with_inclusions(const AmalgamFamily& fam);
GroupTriangle reduce_triangle(const GroupTriangle& t);

enum class AngleStatus { Exact, LowerBoundOnly, OddKernelLength };

/// theta = pi/n; n == 0 encodes n = infinity (theta = 0).
struct AngleReport {
  AngleStatus status = AngleStatus::Exact;
  long n = 0;
  int kernel_length = 0;  // shortest kernel syllable length when found
  int searched = 0;       // max syllable length searched
  long bound_n = 0;       // LowerBoundOnly: theta <= pi/bound_n

  std::string theta_str() const;
  std::string status_str() const;
  /// Upper bound of theta/pi as an exact rational; nullopt when unusable.
  std::optional<mpq_class> upper_bound() const;
};

AngleReport stallings_angle(const Subgroup& h1, const Subgroup& h2, const Subgroup& k, int max_len);

struct AngleSumReport {
  bool sufficient = false;
  std::array<AngleReport, 3> angles;  // by vertex
  mpq_class bound_sum;                // sum of upper bounds of theta/pi
  bool bounds_usable = true;
};
AngleSumReport angle_sum_check(const GroupTriangle& t, int max_len);

struct RetriReport {
  bool ok = false;
  int vertex = -1;  // i: the degenerate vertex; ii: first endpoint of the edge
  int edge = -1;    // ii only
};
RetriReport check_retri_i(const GroupTriangle& t);
RetriReport check_retri_ii(const GroupTriangle& t);

enum class Verdict { Realizable, Collapsed, Unknown };
std::string verdict_str(Verdict v);

struct RealizeOptions {
  int angle_bound = 12;
  long max_cosets = 10000;
  int depth = 4;  // syllable lengths tabulated for the edge-pair amalgams
};

struct Realization {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  bool fillable = true;
  bool minimal = true;
  std::array<int, 3> orders{};
  std::array<int, 3> reduced_orders{};
  bool reduced_differs = false;
  // per vertex: normal forms of the edge-pair amalgam over the core, by length
  std::array<std::vector<long long>, 3> edge_pair_counts;

  // criteria, evaluated on the reduced triangle
  AngleSumReport angles;
  RetriReport retri_i;
  RetriReport retri_ii;

  // enumeration of the original presentation, then of the reduced one
  bool enumeration_complete = false;
  long enumeration_cosets = 0;
  long enumeration_peak = 0;
  bool reduced_enumeration_run = false;
  bool reduced_enumeration_complete = false;
  long reduced_enumeration_cosets = 0;

  // REALIZABLE through an enumeration: the group and vertex maps
  GroupPtr group;
  std::vector<GroupMorphism> psi;
  bool psi_from_reduced = false;
  std::array<bool, 3> injective{};
  bool diagrams_commute = false;

  // COLLAPSED: vertex elements g != g2 with equal image
  int witness_vertex = -1;
  int witness_g = -1;
  int witness_g2 = -1;

  std::vector<std::string> notes;
};

/// Throws NotFillable for triangles failing check_fillable.
Realization realize_triangle(const GroupTriangle& t, const RealizeOptions& opt = {});

/// Vertex maps into an enumerated presentation of the family.
std::vector<GroupMorphism> vertex_maps(const FamilyPresentation& fp, const CosetResult& r, const AmalgamFamily& fam);

}  // namespace amalgam

#endif  // AMALGAM_TRIANGLE_HPP
