#ifndef AMALGAM_GROUP_HPP
#define AMALGAM_GROUP_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace amalgam {

using Table = std::vector<std::vector<int>>;

class FiniteGroup {
public:
  static constexpr int kMaxOrder = 1 << 14;

  /// Validates a multiplication table; the identity is discovered.
  static FiniteGroup from_table(const Table& mul, std::vector<std::string> labels = {});
  /// As from_table but skips the associativity scan; for tables built from
  /// an action (permutations, coset tables) which are associative already.
  static FiniteGroup from_action_table(const Table& mul, std::vector<std::string> labels = {});
  /// Closure of permutations of {0..n-1}; images[k] is where k goes.
  static FiniteGroup from_permutations(const std::vector<std::vector<int>>& gens);
  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric(int n);
  static FiniteGroup dihedral(int n);  // order 2n
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return n_; }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * n_ + b]; }
  int identity() const { return e_; }
  int inv(int a) const { return inv_[a]; }
  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& flat_table() const { return mul_; }
  Table table() const;

  bool is_abelian() const;
  int power(int a, long k) const;
  int element_order(int a) const;
  /// Index of the element with the given label, or -1.
  int find_label(const std::string& s) const;

private:
  static FiniteGroup build(const Table& mul, std::vector<std::string> labels, bool check_assoc);

  int n_ = 0;
  int e_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<std::string> labels_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

struct Subgroup {
  GroupPtr parent;
  std::vector<int> members;  // ascending

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int g) const;
  bool operator==(const Subgroup& o) const { return parent == o.parent && members == o.members; }
};

Subgroup subgroup_generated(const GroupPtr& g, const std::vector<int>& gens);
Subgroup subgroup_intersect(const Subgroup& a, const Subgroup& b);
Subgroup whole_group(const GroupPtr& g);
Subgroup trivial_subgroup(const GroupPtr& g);
/// Throws NotSubgroup unless the member set is a subgroup.
Subgroup make_subgroup(const GroupPtr& g, std::vector<int> members);

struct GroupMorphism {
  GroupPtr domain;
  GroupPtr codomain;
  std::vector<int> map;

  int operator()(int x) const { return map[x]; }
};

struct MorphismCheck {
  bool ok = true;
  bool injective = false;
  bool surjective = false;
  int x = -1;  // violation witness when !ok
  int y = -1;
};

MorphismCheck morphism_check(const GroupMorphism& f);
/// Throws NotHomomorphism with the witness pair.
void require_morphism(const GroupMorphism& f);
/// Throws NotInjective unless f is an injective homomorphism.
void require_injective(const GroupMorphism& f, const std::string& what);

GroupMorphism identity_morphism(const GroupPtr& g);
GroupMorphism compose(const GroupMorphism& second, const GroupMorphism& first);
Subgroup image(const GroupMorphism& f);

/// A subgroup as a group in its own right, with the inclusion morphism.
struct SubgroupGroup {
  GroupPtr group;
  GroupMorphism inclusion;
  std::vector<int> index_of;  // parent element -> subgroup element, -1 outside
};
SubgroupGroup subgroup_as_group(const Subgroup& s);

}  // namespace amalgam

#endif  // AMALGAM_GROUP_HPP
