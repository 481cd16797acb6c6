#pragma once

// Exact finite permutation groups: subgroups, right cosets, conjugacy
// classes of subgroups, normalizers and double cosets. Every group here is
// tiny (order <= a few hundred in practice), so all algorithms are
// exhaustive.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orbicover {

/// A bijection of {0, ..., n-1}. Composition is right to left:
/// (a * b)(x) == a(b(x)).
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<std::size_t> images);

  static Perm identity(std::size_t degree);
  /// Builds a permutation of the given degree from disjoint cycles.
  static Perm from_cycles(std::size_t degree,
                          const std::vector<std::vector<std::size_t>>& cycles);

  std::size_t degree() const { return images_.size(); }
  std::size_t operator()(std::size_t x) const { return images_[x]; }
  const std::vector<std::size_t>& images() const { return images_; }

  Perm inverse() const;
  bool is_identity() const;
  /// Order of the cyclic group generated by this permutation.
  std::size_t order() const;

  friend Perm operator*(const Perm& a, const Perm& b);
  auto operator<=>(const Perm&) const = default;

  std::string to_string() const;

 private:
  std::vector<std::size_t> images_;
};

using ElementId = std::size_t;

/// A permutation group stored with its complete element list. Element 0
/// is always the identity; the remaining elements appear in breadth-first
/// order from the generators, so ids are deterministic given the generator
/// list.
class FiniteGroup {
 public:
  /// Closes `generators` under composition. Throws ResourceError if the
  /// group has more than `max_order` elements.
  static FiniteGroup generate(std::vector<Perm> generators,
                              std::size_t degree,
                              std::size_t max_order = 20000);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& elements() const { return elements_; }
  const Perm& element(ElementId id) const { return elements_.at(id); }
  /// Ids of the generators, in the order supplied to generate().
  const std::vector<ElementId>& generators() const { return generators_; }
  const std::vector<Perm>& generator_perms() const { return generator_perms_; }

  static constexpr ElementId identity() { return 0; }
  ElementId multiply(ElementId a, ElementId b) const;
  ElementId inverse(ElementId a) const { return inverses_.at(a); }
  ElementId conjugate(ElementId g, ElementId x) const;  // g x g^-1
  std::size_t element_order(ElementId a) const;

  std::optional<ElementId> find(const Perm& p) const;
  /// Like find() but throws DomainError when `p` is not an element.
  ElementId index_of(const Perm& p) const;

  /// Shortest word (shortlex over g0, g0^-1, g1, g1^-1, ...) for each
  /// element. Letters are signed 1-based generator indices.
  const std::vector<std::vector<int>>& shortlex_words() const { return words_; }

 private:
  std::size_t degree_ = 0;
  std::vector<Perm> elements_;
  std::vector<Perm> generator_perms_;
  std::vector<ElementId> generators_;
  std::vector<ElementId> inverses_;
  std::vector<std::vector<ElementId>> table_;
  std::map<std::vector<std::size_t>, ElementId> lookup_;
  std::vector<std::vector<int>> words_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr make_group(std::vector<Perm> generators, std::size_t degree);

/// A subgroup, stored as the sorted ids of its members in the parent.
class Subgroup {
 public:
  Subgroup(GroupPtr parent, std::vector<ElementId> members);

  const GroupPtr& parent() const { return parent_; }
  const std::vector<ElementId>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  std::size_t index() const { return parent_->order() / members_.size(); }
  bool contains(ElementId g) const;
  bool is_subset_of(const Subgroup& other) const;
  bool is_trivial() const { return members_.size() == 1; }
  bool is_whole() const { return members_.size() == parent_->order(); }

  /// Same parent object and same members.
  friend bool operator==(const Subgroup& a, const Subgroup& b);

 private:
  GroupPtr parent_;
  std::vector<ElementId> members_;
};

/// Right cosets H g of a subgroup, ordered by their smallest element id;
/// each representative is that smallest id, so the identity coset is
/// first with representative e.
struct CosetSpace {
  Subgroup subgroup;
  std::vector<std::vector<ElementId>> cosets;
  std::vector<ElementId> representatives;
  std::vector<std::size_t> coset_of;  // element id -> coset index
};

Subgroup generate_subgroup(const GroupPtr& parent, std::span<const ElementId> gens);
Subgroup generate_subgroup(const GroupPtr& parent, const std::vector<Perm>& gens);
Subgroup trivial_subgroup(const GroupPtr& parent);
Subgroup whole_group(const GroupPtr& parent);

Subgroup intersection(const Subgroup& a, const Subgroup& b);
/// g H g^-1.
Subgroup conjugate(const Subgroup& h, ElementId g);
bool are_conjugate(const Subgroup& a, const Subgroup& b);
bool is_normal(const Subgroup& h);

/// Every subgroup of `g`, sorted by (order, members).
std::vector<Subgroup> all_subgroups(const GroupPtr& g);
/// One representative per conjugacy class, sorted by (order, members);
/// each representative is the smallest member of its class in that order.
std::vector<Subgroup> conjugacy_classes_of_subgroups(const GroupPtr& g);

/// Largest subgroup of the parent in which `h` is normal.
Subgroup normalizer(const Subgroup& h);

CosetSpace right_cosets(const Subgroup& h);

/// The partition of the parent into double cosets h2 * g * h1, sorted by
/// smallest element. Throws DomainError if the parents differ.
std::vector<std::vector<ElementId>> double_cosets(const Subgroup& h1,
                                                  const Subgroup& h2);

/// Intersection over i of reps[i] * subs[i] * reps[i]^-1.
Subgroup conjugate_intersection(std::span<const Subgroup> subs,
                                std::span<const ElementId> reps);

/// Built-in groups: "Z<n>" (1 <= n <= 24), "D<n>" (dihedral of order 2n,
/// 3 <= n <= 12), "S3", "S4", "A4", "Q8", "V4".
GroupPtr catalog_group(std::string_view name);
/// The names exercised by exhaustive tests (all of order <= 24).
const std::vector<std::string>& catalog_names();

}  // namespace orbicover
