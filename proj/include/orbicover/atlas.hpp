#pragma once

// Combinatorial orbifold atlases.
//
// Every chart i carries a finite local group Gamma_i. The elements of the
// gluing sets Gamma_ij are words in one global alphabet: each chart binds
// one symbol per generator of its local group, and the remaining symbols
// are free (they name coset representatives of Gamma_ij / Gamma_j). Two
// words denote the same gluing element when their normal forms agree; the
// normal form evaluates every maximal run of one chart's symbols inside
// that chart's group and freely reduces the free symbols, i.e. it is the
// reduced form in the free product of the local groups and a free group.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbicover/geometry.hpp"
#include "orbicover/group_core.hpp"
#include "orbicover/presentation.hpp"

namespace orbicover {

struct Chart {
  std::size_t id = 0;
  /// Catalog name of the local group, informational.
  std::string group_name;
  GroupPtr group;
  /// One symbol per generator of `group`.
  std::vector<std::string> symbols;
  /// Optional linear action: one isometry per generator of `group`.
  std::optional<Geometry> geometry;
  std::vector<Isometry> action;
  /// Optional declared orientation sign (+1/-1) per generator; used when no
  /// action is given.
  std::vector<int> signs;
};

struct GluingSet {
  std::size_t i = 0, j = 0;
  std::vector<Word> elements;
};

/// One recorded triple-overlap composition left * right = result with
/// left in Gamma_ij, right in Gamma_jk, result in Gamma_ik.
struct ProductEntry {
  std::size_t i = 0, j = 0, k = 0;
  Word left, right, result;
};

struct Violation {
  std::string code;
  std::vector<std::size_t> charts;
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

class OrbifoldAtlas {
 public:
  Alphabet alphabet;
  std::vector<Chart> charts;
  std::vector<GluingSet> gluings;
  std::vector<ProductEntry> products;
  /// Orientation signs of free symbols (default +1).
  std::map<std::string, int> free_signs;

  const GluingSet* gluing(std::size_t i, std::size_t j) const;

  /// Chart owning a symbol index, or nullopt for a free symbol.
  std::optional<std::pair<std::size_t, std::size_t>> owner(std::size_t symbol) const;

  Word normal_form(const Word& w) const;
  Word parse(std::string_view text) const { return parse_word(text, alphabet); }
  std::string format(const Word& w) const { return format_word(w, alphabet); }

  /// Element of chart i's local group named by a word over its symbols,
  /// or nullopt if the word uses other symbols.
  std::optional<ElementId> evaluate_local(std::size_t chart, const Word& w) const;
  /// Word over chart i's symbols for a local group element.
  Word local_word(std::size_t chart, ElementId g) const;

  /// Orientation sign of a word; nullopt when a symbol has no sign data.
  std::optional<int> sign(const Word& w) const;
  /// Sign of a local group element, from the action or declared signs.
  std::optional<int> local_sign(std::size_t chart, ElementId g) const;
};

/// Every violated invariant, with the charts involved. Empty iff the atlas
/// is consistent.
ValidationReport validate_atlas(const OrbifoldAtlas& a);

/// Generators: the atlas alphabet. Relations: the multiplication relations
/// of every local group followed by one relation left*right*result^-1 per
/// product entry, all in canonical cyclic form, without repeats and without
/// trivial words. Throws PreconditionError for an invalid atlas.
Presentation presentation_from_atlas(const OrbifoldAtlas& a);

/// Adds Gamma_ii = Gamma_i for every chart lacking it.
void add_local_gluings(OrbifoldAtlas& a);
/// Gamma_ij built from double coset representatives: all words
/// g * rep * h with g in Gamma_i, h in Gamma_j, deduplicated by normal form.
/// Also adds Gamma_ji as the inverses.
void add_gluing(OrbifoldAtlas& a, std::size_t i, std::size_t j,
                const std::vector<Word>& representatives);
/// Binds a chart with the catalog group `group_name` and the given symbols.
std::size_t add_chart(OrbifoldAtlas& a, std::string_view group_name,
                      const std::vector<std::string>& symbols);

/// "interval_two_mirrors", "triangle(p,q,r)", "pillowcase", "torus",
/// "disk_mirror". Throws LookupError for anything else.
OrbifoldAtlas builtin_atlas(std::string_view name);
const std::vector<std::string>& builtin_atlas_names();

std::string to_string(const Violation& v);

}  // namespace orbicover
