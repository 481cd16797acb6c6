#pragma once

// Coverings of orbifolds.
//
// Local (ball) coverings V/Gamma -> V/G are classified by subgroups of the
// finite group G. Global coverings are encoded by the monodromy action of
// the orbifold fundamental group on a finite fiber: a generator acts by a
// permutation, words act right to left like the words themselves, and every
// relation must act trivially.
//
// Cosets are right cosets H g. The group acts on them from the left by
// g . (H x) = H x g^-1.

#include <cstddef>
#include <vector>

#include "orbicover/atlas.hpp"
#include "orbicover/coset_enum.hpp"
#include "orbicover/group_core.hpp"
#include "orbicover/presentation.hpp"

namespace orbicover {

// ------------------------------------------------------------ ball covers

struct BallCovering {
  GroupPtr base_group;
  Subgroup subgroup;
};

/// One covering per conjugacy class of subgroups, ordered like
/// conjugacy_classes_of_subgroups (trivial subgroup first, G last).
std::vector<BallCovering> enumerate_ball_coverings(const GroupPtr& g);

/// One representative g per double coset G2 g G1 with g G1 g^-1 inside G2;
/// the morphism is [v] -> [g v]. Representatives are the smallest element
/// id of each double coset. Throws DomainError for different base groups.
std::vector<ElementId> ball_covering_morphisms(const BallCovering& c1, const BallCovering& c2);

/// N(Gamma)/Gamma as a group of cosets.
struct QuotientGroup {
  Subgroup normalizer;
  Subgroup subgroup;
  std::vector<std::vector<ElementId>> cosets;  // cosets of subgroup inside normalizer
  std::vector<ElementId> representatives;      // smallest id of each coset
  std::size_t order() const { return cosets.size(); }
  /// Index of the coset containing representatives[a] * representatives[b].
  std::size_t multiply(std::size_t a, std::size_t b) const;
};

QuotientGroup ball_automorphisms(const BallCovering& c);

struct BallComponent {
  /// gamma_i: the component is the orbit of the tuple (G_i gamma_i^-1).
  std::vector<ElementId> representatives;
  /// Stabilizer, equal to the intersection of gamma_i G_i gamma_i^-1.
  Subgroup subgroup;
  /// Projection to factor i as a ball covering morphism: gamma_i^-1.
  std::vector<ElementId> projections;
  /// Coset index tuples in the orbit, sorted.
  std::vector<std::vector<std::size_t>> tuples;
  std::size_t index() const { return subgroup.index(); }
};

struct BallFiberProduct {
  GroupPtr base_group;
  std::vector<Subgroup> factors;
  std::vector<CosetSpace> coset_spaces;
  /// Sorted by minimal tuple; the first one contains the identity tuple.
  std::vector<BallComponent> components;
};

/// Orbits of G on the product of the right coset spaces G_i \ G.
BallFiberProduct ball_fiber_product(const GroupPtr& g, const std::vector<Subgroup>& factors);

enum class DiagonalTarget {
  any_component,   // any component of the fiber product
  base_component,  // the component through the identity tuple
};

/// Number of diagonal morphisms cand -> fiber product compatible with the
/// given morphisms to the factors, found by exhaustive search over every
/// component and every coset of its subgroup. Throws DomainError if a
/// morphism is not a morphism cand -> factor or counts disagree.
std::size_t count_diagonals(const BallFiberProduct& fp, const BallCovering& cand,
                            const std::vector<ElementId>& morphisms,
                            DiagonalTarget target = DiagonalTarget::any_component);

/// True iff exactly one diagonal exists.
bool check_universal_property(const BallFiberProduct& fp, const BallCovering& cand,
                              const std::vector<ElementId>& morphisms,
                              DiagonalTarget target = DiagonalTarget::any_component);

// ------------------------------------------------------ monodromy covers

class MonodromyCovering {
 public:
  /// Validates sizes and that every relation acts as the identity
  /// (DomainError otherwise).
  MonodromyCovering(Presentation presentation, std::vector<Perm> action, std::size_t basepoint = 0);

  const Presentation& presentation() const { return presentation_; }
  std::size_t fiber_size() const { return fiber_size_; }
  const std::vector<Perm>& action() const { return action_; }
  std::size_t basepoint() const { return basepoint_; }

  /// Permutation of a word, right to left.
  Perm act(const Word& w) const;
  /// Orbits of the action, each sorted, ordered by smallest point.
  std::vector<std::vector<std::size_t>> orbits() const;
  bool is_connected() const { return orbits().size() == 1; }
  /// The sub-covering on the orbit through `point`, renumbered in
  /// increasing order; the basepoint moves to `point`.
  MonodromyCovering component(std::size_t point) const;

 private:
  Presentation presentation_;
  std::size_t fiber_size_;
  std::vector<Perm> action_;
  std::size_t basepoint_;
};

struct FiberProduct {
  /// Point (x1, x2) is numbered x1 * n2 + x2; basepoint (b1, b2).
  MonodromyCovering covering;
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::pair<std::size_t, std::size_t>> points;
};

/// Throws DomainError if the presentations differ.
FiberProduct monodromy_fiber_product(const MonodromyCovering& c1, const MonodromyCovering& c2);

struct DeckGroup {
  /// Fiber permutations commuting with the action, sorted by the image of
  /// the basepoint; the first is the identity.
  std::vector<Perm> automorphisms;
  std::size_t order() const { return automorphisms.size(); }
  bool is_transitive() const;
};

/// Throws DomainError for a disconnected covering.
DeckGroup deck_group(const MonodromyCovering& c);
bool is_regular(const MonodromyCovering& c);

/// True iff every word in `local_elements` acts without fixed points
/// (no singular points in the cover over those local groups).
bool acts_freely(const MonodromyCovering& c, const std::vector<Word>& local_elements);

struct UniversalCover {
  MonodromyCovering covering;
  DeckGroup deck;
  std::size_t order() const { return covering.fiber_size(); }
};

/// Regular action of the finite group presented by `p` on itself, by coset
/// enumeration over the trivial subgroup. Throws ResourceError past
/// `max_cosets`.
UniversalCover universal_cover(const Presentation& p, std::size_t max_cosets = 10000);

/// Action on the cosets of <subgroup_generators>.
MonodromyCovering covering_from_subgroup(const Presentation& p, const std::vector<Word>& subgroup_generators,
                                         std::size_t max_cosets = 10000);

/// Presentation of a finite permutation group on symbols g1, g2, ...: one
/// generator per group generator, relations read off the Cayley graph.
Presentation group_presentation(const FiniteGroup& g);
/// The finite group acting on the right cosets of h (left action).
MonodromyCovering coset_action_covering(const Subgroup& h);

/// Monodromy of the orientation double cover: a symbol acts by the swap of
/// {0, 1} iff it reverses orientation. Throws DomainError if sign data is
/// missing.
MonodromyCovering orientation_covering(const OrbifoldAtlas& a);

/// Orientation double cover as an atlas. Charts whose local group has
/// orientation reversing elements lift to one chart with local group the
/// kernel of the sign; the others lift to two sheets. New chart symbols are
/// k1, k2, ...; new free symbols x1, x2, ... name lifted gluing elements.
/// Throws DomainError if sign data is missing or the input is invalid.
struct DoubleCover {
  OrbifoldAtlas atlas;
  /// For each new chart, the base chart it lies over.
  std::vector<std::size_t> base_chart;
  /// For each new symbol, its value as a word in the base alphabet.
  std::vector<Word> provenance;
};
DoubleCover orientation_double_cover(const OrbifoldAtlas& a);

}  // namespace orbicover
