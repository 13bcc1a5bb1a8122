#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loopnil/loop.hpp"

namespace loopnil {

inline constexpr std::size_t kDefaultTupleBudget = 20'000'000;

/// Element of Q^(2^(k+1)) produced by the fork-search closure.
struct PowerTuple {
  std::vector<int> coords;

  /// Coordinates packed base-n, coordinate 0 least significant; decimal
  /// string, or "" when n^|coords| does not fit in 128 bits.
  std::string packed_key(int n) const;

  bool operator==(const PowerTuple&) const = default;
};

/// Generators c_i(a,b) for i = 1..k+1 and all ordered pairs (a,b):
/// coordinate K is a if the i-th binary digit of K (i=1 least significant)
/// is 0, else b.  Duplicates removed, first occurrence kept.
std::vector<PowerTuple> pattern_generators(const Loop& q, int k);

enum class TupleOp : std::uint8_t { gen = 0, mul = 1, ldiv = 2, rdiv = 3 };

const char* tuple_op_name(TupleOp op);

/// One node of a derivation: either a pattern generator (op == gen, `gen`
/// is the generator index) or a coordinatewise operation on two earlier
/// closure tuples (`left`, `right` are closure indices).
struct TraceStep {
  std::uint32_t id = 0;
  TupleOp op = TupleOp::gen;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t gen = 0;

  bool operator==(const TraceStep&) const = default;
};

struct ForkWitness {
  std::uint32_t id = 0;  // closure index
  PowerTuple tuple;
  std::vector<TraceStep> trace;  // ancestors in creation order, last step = id
};

enum class ForkStatus { supernilpotent_at_k, fork_found, inconclusive };

const char* fork_status_name(ForkStatus s);

struct ForkResult {
  ForkStatus status = ForkStatus::inconclusive;
  int k = 0;
  std::size_t closure_size = 0;
  std::size_t budget = 0;
  /// fork_found only: two tuples agreeing everywhere but the last coordinate.
  std::optional<std::pair<ForkWitness, ForkWitness>> witnesses;
};

/// BFS closure of the pattern generators under coordinatewise mul/ldiv/rdiv
/// with instant fork detection on the prefix (all coordinates but the last).
/// Deterministic: generator order, FIFO frontier, operations in order
/// mul, ldiv, rdiv, older-first left operand.
ForkResult fork_search(const Loop& q, int k,
                       std::size_t budget = kDefaultTupleBudget);

/// The full closure in creation order; only valid when it completes without
/// a fork (diagnostics and small-scale oracle checks).
std::vector<PowerTuple> closure_tuples(const Loop& q, int k,
                                       std::size_t budget = kDefaultTupleBudget);

struct SnBounds {
  int lower = 0;                        // forks prove cl_sn > lower
  std::optional<int> upper;             // fork-free closure proves cl_sn <= upper
  std::vector<int> inconclusive_levels;
  std::vector<ForkResult> levels;       // k = 1,2,... as run
};

/// Runs fork_search for k = 1..k_max, stopping at the first fork-free level.
SnBounds sn_bounds(const Loop& q, int k_max,
                   std::size_t budget = kDefaultTupleBudget);

/// Mal'tsev term (x/y)z.
int eval_maltsev(const Loop& q, int x, int y, int z);

/// q_2(x1,x2,x3) = m(x2,x1,x3);
/// q_{n+1}(args) = m(args[2^n - 1], q_n(first half), q_n(second half)).
/// Requires |args| = 2^level - 1, level >= 2 (arity_mismatch otherwise).
int eval_q(const Loop& q, int level, std::span<const int> args);

/// Small term tree over mul/ldiv/rdiv, variables, the unit, and (for
/// polynomials) element constants.  Nodes are arena-indexed; root is last.
struct Term {
  enum class Kind : std::uint8_t { var, unit, constant, mul, ldiv, rdiv };
  struct Node {
    Kind kind;
    int a = -1;  // var slot / constant element / left child
    int b = -1;  // right child
  };
  std::vector<Node> nodes;
  int arity = 0;

  int eval(const Loop& q, std::span<const int> args) const;
  std::string to_string() const;

  static Term variable(int slot, int arity);
  static Term apply(Term::Kind op, const Term& lhs, const Term& rhs);
  /// (yx) \ (xy)
  static Term commutator_term();
  /// ((xy)z) \ (x(yz))
  static Term associator_term();
};

Term random_term(int arity, int max_depth, std::mt19937_64& rng,
                 bool allow_constants, int order);

struct Condition4Counterexample {
  Term term;
  std::vector<std::vector<int>> a_blocks, b_blocks;  // k+1 blocks each
  int lhs = 0, rhs = 0;
};

/// Does the condition-(4) identity hold for this term and these blocks?
/// Argument j of q_{k+1} is t at the j-th combination, counting combinations
/// in binary with the last block varying fastest; the right-hand side is t
/// at the all-b combination.
bool condition4_holds(const Loop& q, int k, const Term& t,
                      const std::vector<std::vector<int>>& a_blocks,
                      const std::vector<std::vector<int>>& b_blocks);

/// Random search for a violation of condition (4) at level k; a violation
/// certifies cl_sn > k.
std::optional<Condition4Counterexample> condition4_falsifier(
    const Loop& q, int k, int trials, int term_depth, std::uint64_t seed);

struct AbsorberWitness {
  Term poly;
  std::string origin;  // "commutator", "associator" or "sampled"
  int arity = 0;
  std::vector<int> input_x, input_y;  // two inputs with different outputs
  int out_x = 0, out_y = 0;
};

/// Searches for a nonconstant polynomial of the given arity absorbing at
/// (1,...,1) into 1; such a witness certifies cl_sn >= arity.  The loop's
/// commutator (arity 2) and associator (arity 3) are always tried first.
std::optional<AbsorberWitness> absorber_falsifier(const Loop& q, int arity,
                                                  int trials, int term_depth,
                                                  std::uint64_t seed);

/// Exhaustive helpers used by the falsifier and by tests.
bool is_absorbing_at_unit(const Loop& q, const Term& poly);
bool is_constant_poly(const Loop& q, const Term& poly);

/// Verifies fork_search(Q/Z(Q), upper-1) is fork-free, where `upper` is an
/// established fork-search upper bound for Q.  Propagates inconclusive
/// results as budget_exceeded.
bool quotient_drop_check(const Loop& q, int upper,
                         std::size_t budget = kDefaultTupleBudget);

/// Recomputes the witness from its trace using only pattern generators and
/// the three coordinatewise operations, and compares with the stored tuple.
bool replay_witness(const Loop& q, int k, const ForkWitness& w);

/// Witness serialization (generator indices, operation codes, parent
/// references).  fork_result_from_json inverts it.
std::string fork_result_to_json(const ForkResult& r, const Loop& q);
ForkResult fork_result_from_json(const std::string& text);

}  // namespace loopnil
