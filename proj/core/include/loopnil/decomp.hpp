#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopnil/loop.hpp"
#include "loopnil/perm_group.hpp"

namespace loopnil {

/// N* = {f in Mlt Q : f(x)/x in N for all x}; verified to be a normal
/// subgroup of Mlt Q.
PermGroup n_star(const Loop& q, const Subloop& n,
                 std::size_t budget = kDefaultGroupBudget);

/// G(1) = {g(0) : g in G}; throws orbit_not_subloop unless the orbit is a
/// normal subloop (it is whenever G is normal in Mlt Q).
Subloop orbit_subloop(const Loop& q, const PermGroup& g);

/// One recursion step of the prime decomposition: the Sylow orbit P(1),
/// its complement orbit R(1), and the verified pairing (a,b) -> a*b.
struct DecompStep {
  int prime = 0;
  int exponent = 0;
  Subloop p_part;  // P(1), order prime^exponent
  Subloop r_part;  // R(1)
  /// pairing[ia * |r_part| + ib] = p_part.elems[ia] * r_part.elems[ib],
  /// a bijection onto the step's loop.
  std::vector<int> pairing;
};

struct Decomposition {
  std::vector<std::pair<int, Loop>> factors;  // (p, loop of order p^e)
  std::vector<DecompStep> steps;
  std::size_t total_order() const;
};

/// Direct decomposition into loops of prime power order, following the
/// Sylow structure of Mlt Q (which must be nilpotent: mlt_not_nilpotent
/// otherwise).  Every internal identity is verified; a failure throws
/// verification_failed and indicates a bug, not bad input.
Decomposition prime_decompose(const Loop& q,
                              std::size_t budget = kDefaultGroupBudget);

/// Both sides of the p-group equivalence, evaluated independently:
/// Q centrally nilpotent of prime power order  vs.  every element of Mlt Q
/// of prime power order for one common prime.  Throws verification_failed
/// if the two verdicts disagree.
struct PGroupCheck {
  std::optional<int> prime;        // the prime when |Q| is a prime power
  bool loop_side = false;          // cl_cn finite and |Q| a prime power
  bool mlt_side = false;           // element orders of Mlt all powers of one prime
};

PGroupCheck pgroup_check(const Loop& q, std::size_t budget = kDefaultGroupBudget);

std::string decomposition_to_json(const Decomposition& d);

}  // namespace loopnil
