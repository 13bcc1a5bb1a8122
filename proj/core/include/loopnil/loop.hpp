#pragma once

#include <utility>
#include <vector>

#include "loopnil/perm.hpp"

namespace loopnil {

/// Sorted set of element indices of a parent loop.  A valid Subloop contains
/// 0 and is closed under mul/ldiv/rdiv of the parent; construction goes
/// through Loop::subloop or Loop::subloop_generated which enforce that.
struct Subloop {
  std::vector<int> elems;  // ascending, first entry is 0
  int parent_order = 0;

  std::size_t size() const { return elems.size(); }
  bool contains(int x) const;
  bool is_whole() const { return static_cast<int>(elems.size()) == parent_order; }
  bool operator==(const Subloop&) const = default;
};

/// Finite loop given by its Cayley table.  Elements are 0..n-1 with the
/// identity at 0; the left/right division tables are precomputed.  Original
/// input labels are kept for I/O.  Immutable after construction.
class Loop {
public:
  Loop() = default;

  /// table[i][j] = i*j over indices 0..n-1, identity 0.  Validates the Latin
  /// square and identity laws.  labels defaults to 1..n.
  static Loop from_table(const std::vector<std::vector<int>>& table,
                         std::vector<int> labels = {});

  int order() const { return n_; }
  int mul(int a, int b) const { return mul_[a * n_ + b]; }
  /// a \ b : unique x with a*x = b
  int ldiv(int a, int b) const { return ldiv_[a * n_ + b]; }
  /// a / b : unique x with x*b = a
  int rdiv(int a, int b) const { return rdiv_[a * n_ + b]; }

  int label(int x) const { return labels_[x]; }
  const std::vector<int>& labels() const { return labels_; }

  const std::vector<int>& mul_table() const { return mul_; }
  const std::vector<int>& ldiv_table() const { return ldiv_; }
  const std::vector<int>& rdiv_table() const { return rdiv_; }

  Perm left_translation(int a) const;
  Perm right_translation(int a) const;

  /// All L_{x,y}, R_{x,y}, T_x in that block order, 2n^2+n entries,
  /// duplicates kept.  Every entry fixes 0.
  std::vector<Perm> inner_generators() const;
  /// Same set with duplicates removed, first occurrence kept.
  std::vector<Perm> inner_generators_dedup() const;

  /// Elements fixed by every inner mapping.
  Subloop center() const;

  bool is_subloop_set(const std::vector<int>& elems) const;
  /// Validating constructor; throws not_a_subloop.
  Subloop subloop(std::vector<int> elems) const;
  /// Smallest subloop containing seed (and 0).
  Subloop subloop_generated(std::vector<int> seed) const;

  bool is_normal(const Subloop& s) const;

  /// Factor loop and the projection Q -> Q/N (as an index map).  The coset
  /// of 0 is the quotient's identity 0.
  std::pair<Loop, std::vector<int>> quotient(const Subloop& normal_subloop) const;

  bool is_associative() const;
  bool is_commutative() const;

  /// (yx) \ (xy); 0 iff x,y commute
  int commutator(int x, int y) const;
  /// ((xy)z) \ (x(yz)); 0 iff x,y,z associate
  int associator(int x, int y, int z) const;

  bool same_table(const Loop& other) const { return n_ == other.n_ && mul_ == other.mul_; }

private:
  int n_ = 0;
  std::vector<int> mul_, ldiv_, rdiv_;
  std::vector<int> labels_;
};

/// Componentwise product on pairs (a,b), indexed a*|Q2|+b.
Loop direct_product(const Loop& q1, const Loop& q2);

/// Subloop as a standalone loop; element i is s.elems[i], labels carried
/// over from the parent.
Loop restrict_to(const Loop& q, const Subloop& s);

/// Every subloop, found by closing each known subloop with each outside
/// element until no new subloop appears.  Ascending by size, then elements.
std::vector<Subloop> all_subloops(const Loop& q);

}  // namespace loopnil
