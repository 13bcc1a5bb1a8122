#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "loopnil/loop.hpp"
#include "loopnil/perm.hpp"

namespace loopnil {

inline constexpr std::size_t kDefaultGroupBudget = 5'000'000;

/// Permutation group by full element enumeration.  elements() is sorted
/// lexicographically by image vector; that order is the canonical one and
/// does not depend on how the group was produced.
class PermGroup {
public:
  PermGroup() = default;

  static PermGroup trivial(int degree);

  /// BFS closure of the generators.  Throws budget_exceeded (with the
  /// partial count) if the group grows past `budget` elements.
  static PermGroup generate(int degree, const std::vector<Perm>& gens,
                            std::size_t budget = kDefaultGroupBudget);

  /// Wraps an already-closed element set; derives a small generating set
  /// (or verifies `gens_hint` generates exactly the set).  Throws
  /// not_subgroup if the set is not a subgroup.
  static PermGroup from_elements(std::vector<Perm> elems,
                                 std::vector<Perm> gens_hint = {});

  int degree() const { return degree_; }
  std::size_t order() const { return elems_.size(); }
  bool is_trivial() const { return elems_.size() == 1; }
  const std::vector<Perm>& elements() const { return elems_; }
  const std::vector<Perm>& generators() const { return gens_; }

  bool contains(const Perm& p) const;
  bool is_subgroup_of(const PermGroup& g) const;
  bool is_abelian() const;

  bool operator==(const PermGroup& o) const {
    return degree_ == o.degree_ && elems_ == o.elems_;
  }

private:
  int degree_ = 0;
  std::vector<Perm> gens_;
  std::vector<Perm> elems_;  // sorted
};

/// Multiplication group <L_x, R_x : x in Q>.
PermGroup mlt(const Loop& q, std::size_t budget = kDefaultGroupBudget);

/// Inner mapping group: stabilizer of 0 in Mlt.  Computed both as the
/// stabilizer and as the closure of the inner generators; throws
/// inner_mismatch if the two disagree.
PermGroup inn(const Loop& q, std::size_t budget = kDefaultGroupBudget);

/// [G,H]: subgroup generated by generator commutators, closed under
/// conjugation by generators of G (normal closure in G).
PermGroup commutator_subgroup(const PermGroup& g, const PermGroup& h,
                              std::size_t budget = kDefaultGroupBudget);

/// Smallest c with the lower central series hitting 1 after c steps;
/// nullopt when the series stabilizes above the trivial group.
std::optional<int> nilpotency_class(const PermGroup& g,
                                    std::size_t budget = kDefaultGroupBudget);

/// Upper central series 1 = Z_0 <= Z_1 <= ... until stationary.
std::vector<PermGroup> center_series(const PermGroup& g);

/// {g in G : g H g^-1 = H}; requires H <= G (not_subgroup otherwise).
PermGroup normalizer(const PermGroup& g, const PermGroup& h);

/// Elements of p-power order / of order coprime to p.  Valid (and verified)
/// for nilpotent groups only; throws not_nilpotent otherwise.
PermGroup sylow_subgroup(const PermGroup& g, int p,
                         std::size_t budget = kDefaultGroupBudget);
PermGroup sylow_complement(const PermGroup& g, int p,
                           std::size_t budget = kDefaultGroupBudget);

std::vector<int> point_orbit(const PermGroup& g, int pt);
PermGroup point_stabilizer(const PermGroup& g, int pt);

}  // namespace loopnil
