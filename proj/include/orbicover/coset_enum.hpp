#pragma once

// Todd-Coxeter coset enumeration (HLT strategy with coincidence
// processing) for finite-index subgroups of finitely presented groups.

#include <cstddef>
#include <vector>

#include "orbicover/group_core.hpp"
#include "orbicover/presentation.hpp"

namespace orbicover {

/// A complete coset table. Cosets are numbered 0..size-1 in the order a
/// breadth-first walk from the subgroup coset meets them (column order
/// g1, g1^-1, g2, ...), so two enumerations of the same subgroup give the
/// same table.
class CosetTable {
 public:
  CosetTable(std::size_t rank, std::vector<std::vector<std::size_t>> rows);

  std::size_t size() const { return rows_.size(); }
  std::size_t rank() const { return rank_; }
  /// Coset of (coset * letter), letters signed 1-based.
  std::size_t apply(std::size_t coset, Letter l) const;
  /// Coset of (coset * w), reading w left to right.
  std::size_t apply(std::size_t coset, const Word& w) const;
  const std::vector<std::vector<std::size_t>>& rows() const { return rows_; }

 private:
  std::size_t rank_;
  std::vector<std::vector<std::size_t>> rows_;  // column 2k: g_k, 2k+1: g_k^-1
};

/// Enumerates the cosets of <subgroup_generators> in the group presented
/// by `p`. Throws ResourceError when more than `max_cosets` cosets are live
/// or defined in total (the group may be infinite or the index too large).
CosetTable enumerate_cosets(const Presentation& p, const std::vector<Word>& subgroup_generators,
                            std::size_t max_cosets = 10000);

}  // namespace orbicover
