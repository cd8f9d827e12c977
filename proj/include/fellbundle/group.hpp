#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fellbundle/matrix.hpp"

namespace fell {

/// Dense element index; the identity is always element 0.
using Element = std::size_t;

/// Groups above this order still work but trigger a warning on stderr.
inline constexpr std::size_t kGroupSoftCap = 48;

/// A finite group given by its Cayley table. Instances are validated on
/// construction and immutable afterwards.
class FiniteGroup {
 public:
  /// Validates the table: square, Latin, identity at index 0, associative.
  static FiniteGroup from_table(std::vector<std::vector<Element>> table);

  std::size_t order() const { return table_.size(); }
  static constexpr Element identity() { return 0; }
  Element mul(Element s, Element t) const { return table_[s][t]; }
  Element inv(Element s) const { return inverse_[s]; }
  /// s n s^{-1}
  Element conj(Element s, Element n) const { return mul(mul(s, n), inv(s)); }
  const std::vector<std::vector<Element>>& table() const { return table_; }

  bool operator==(const FiniteGroup&) const = default;

 private:
  FiniteGroup() = default;
  std::vector<std::vector<Element>> table_;
  std::vector<Element> inverse_;
};

FiniteGroup cyclic_group(std::size_t m);
/// Symmetries of the m-gon, order 2m; element f*m + i is s^f r^i.
FiniteGroup dihedral_group(std::size_t m);
/// Permutations of {0..m-1} in lexicographic order; (στ)(x) = σ(τ(x)).
FiniteGroup symmetric_group(std::size_t m);
/// Element (g, h) has index g * |H| + h.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

/// The kinds accepted by build_group (mirrors the spec-file group descriptor).
struct GroupDescriptor {
  enum class Kind { Cyclic, Dihedral, Symmetric, DirectProduct, Table };
  Kind kind = Kind::Cyclic;
  std::size_t param = 1;
  std::vector<GroupDescriptor> factors;
  std::vector<std::vector<Element>> table;
};

FiniteGroup build_group(const GroupDescriptor& desc);

/// A subgroup as a sorted member list of its parent. members[0] is the identity.
class Subgroup {
 public:
  /// Throws NotASubgroup unless `members` is a subgroup of g.
  static Subgroup make(const FiniteGroup& g, std::vector<Element> members);
  static Subgroup trivial() { return Subgroup({0}); }
  static Subgroup whole(const FiniteGroup& g);

  const std::vector<Element>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  bool contains(Element s) const;
  /// Position of s in members(); throws NotASubgroup when absent.
  std::size_t local_index(Element s) const;
  bool is_normal_in(const FiniteGroup& g) const;
  /// The subgroup as a group in its own right, on indices 0..order-1.
  FiniteGroup as_group(const FiniteGroup& parent) const;

  bool operator==(const Subgroup&) const = default;

 private:
  explicit Subgroup(std::vector<Element> members) : members_(std::move(members)) {}
  std::vector<Element> members_;
};

/// Throws NotASubgroup / NotNormal.
Subgroup make_normal_subgroup(const FiniteGroup& g, std::vector<Element> members);

/// Smallest subgroup containing `generators`.
Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<Element>& generators);

/// Every normal subgroup of g, sorted by order (ties by member list).
std::vector<Subgroup> normal_subgroups(const FiniteGroup& g);

/// G/N with cosets numbered by their smallest element, so the coset of the
/// identity is 0 and the section picks the smallest element of each coset.
class Quotient {
 public:
  /// Throws NotNormal.
  Quotient(const FiniteGroup& parent, Subgroup normal);

  const FiniteGroup& parent() const { return parent_; }
  const Subgroup& normal() const { return normal_; }
  const FiniteGroup& group() const { return group_; }
  std::size_t index() const { return group_.order(); }

  Element coset_of(Element s) const { return coset_of_[s]; }
  Element section(Element coset) const { return section_[coset]; }
  /// n_s = c(sN)^{-1} s, the N-part of the unique factorization s = c(sN) n_s.
  Element n_part(Element s) const;
  std::vector<Element> coset_members(Element coset) const;

 private:
  FiniteGroup parent_;
  Subgroup normal_;
  std::vector<Element> coset_of_;
  std::vector<Element> section_;
  FiniteGroup group_;
};

/// left(s) e_h = e_{sh}
Matrix left_regular(const FiniteGroup& g, Element s);
/// right(r) has entry (x, h) = 1 iff x = h r^{-1}
Matrix right_regular(const FiniteGroup& g, Element r);

struct RegularRepresentations {
  std::vector<Matrix> left;
  std::vector<Matrix> right;
};
RegularRepresentations regular_representations(const FiniteGroup& g);

}  // namespace fell
