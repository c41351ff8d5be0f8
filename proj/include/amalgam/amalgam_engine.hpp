#ifndef AMALGAM_AMALGAM_ENGINE_HPP
#define AMALGAM_AMALGAM_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/group.hpp"

namespace amalgam {

/// Abstract edge group with injections into vertices a < b.
struct Edge {
  int a = 0;
  int b = 1;
  GroupPtr group;
  GroupMorphism into_a;
  GroupMorphism into_b;
};

struct AmalgamFamily {
  std::vector<GroupPtr> vertices;
  std::vector<Edge> edges;

  /// Checks vertex indices, injection domains/codomains and injectivity.
  void validate() const;
  /// Edges incident to vertex v, in listing order.
  std::vector<int> edges_at(int v) const;
  /// Injection of edge e into vertex v (which must be an endpoint).
  const GroupMorphism& into(int e, int v) const;
};

struct Letter {
  int vertex = 0;
  int element = 0;
  bool operator==(const Letter& o) const { return vertex == o.vertex && element == o.element; }
};
using AmalgamWord = std::vector<Letter>;

std::string word_str(const AmalgamWord& w, const std::vector<GroupPtr>& vertices);

/// Right cosets H g; the identity represents H, otherwise the smallest index.
struct Transversal {
  Subgroup subgroup;
  std::vector<int> reps;      // reps[0] is the identity
  std::vector<int> coset_of;  // element -> index into reps
  std::vector<int> h_part;    // element g = h_part[g] * reps[coset_of[g]]

  int index() const { return static_cast<int>(reps.size()); }
};
Transversal right_transversal(const Subgroup& h);

/// G1 *_H G2 with H an abstract group injected into both factors.
struct TwoFactor {
  GroupPtr g1;
  GroupPtr g2;
  GroupPtr h;
  GroupMorphism into1;
  GroupMorphism into2;

  static TwoFactor from_edge(const AmalgamFamily& fam, int edge);
  /// Amalgamation along subgroups H1 <= G1 with an explicit identification.
  static TwoFactor trivial_over(GroupPtr g1, GroupPtr g2);
};

/// Canonical form: an optional H letter (vertex 0) followed by alternating
/// nontrivial coset representatives.  Vertices are 0 and 1.
class TwoFactorReducer {
public:
  explicit TwoFactorReducer(TwoFactor data);

  AmalgamWord reduce(const AmalgamWord& w) const;
  /// Syllable length of the normal form (H letter not counted).
  static int syllables(const AmalgamWord& normal, const TwoFactor& data);

  const TwoFactor& data() const { return d_; }
  const Transversal& transversal(int side) const { return t_[side]; }

private:
  struct State {
    int h;                  // element of the abstract H
    std::vector<Letter> t;  // representatives, leftmost first
  };
  void left_multiply(State& s, const Letter& x) const;

  TwoFactor d_;
  Transversal t_[2];
  std::vector<int> back_[2];  // vertex element -> H element, -1 outside image
};

AmalgamWord reduce_two_factor(const TwoFactor& data, const AmalgamWord& w);
/// Number of normal forms of exactly n syllables.
long long count_normal_forms(const TwoFactor& data, int n);

/// Generators are positive integers 1..n; a letter -k is the inverse of k.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<std::vector<int>> relators;

  std::string str() const;
  static Presentation parse(const std::string& text);
};

/// Generator names for the table presentation: "v<vertex>_<element>".
struct FamilyPresentation {
  Presentation presentation;
  // generator (1-based) of each non-identity vertex element, 0 for identities
  std::vector<std::vector<int>> generator_of;
};
FamilyPresentation presentation_of_family(const AmalgamFamily& fam);

/// Free and cyclic reduction, identification of generators through
/// relators u v^-1 and elimination of length-three definitions.
Presentation simplify_presentation(const Presentation& p);

struct CosetResult {
  bool complete = false;
  long cosets = 0;                  // live cosets at completion
  long max_live = 0;                // peak live cosets
  long defined = 0;                 // total cosets defined
  std::vector<std::vector<int>> table;  // coset x generator (then inverses) -> coset
  // for a trivial subgroup: the presented group and generator images
  GroupPtr group;
  std::vector<int> generator_image;
};

/// HLT enumeration with a bound on live cosets; overflow returns complete=false.
CosetResult coset_enumeration(const Presentation& p, const std::vector<std::vector<int>>& subgroup_gens,
                              long max_cosets);

/// Product of the images of the letters in the target group.
int evaluate_word(const AmalgamWord& w, const AmalgamFamily& fam, const std::vector<GroupMorphism>& maps);

}  // namespace amalgam

#endif  // AMALGAM_AMALGAM_ENGINE_HPP
