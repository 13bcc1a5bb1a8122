#include "loopnil/supernil.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "loopnil/error.hpp"

namespace loopnil {

using json = nlohmann::json;

const char* tuple_op_name(TupleOp op) {
  switch (op) {
    case TupleOp::gen: return "gen";
    case TupleOp::mul: return "mul";
    case TupleOp::ldiv: return "ldiv";
    case TupleOp::rdiv: return "rdiv";
  }
  return "?";
}

const char* fork_status_name(ForkStatus s) {
  switch (s) {
    case ForkStatus::supernilpotent_at_k: return "supernilpotent_at_k";
    case ForkStatus::fork_found: return "fork_found";
    case ForkStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string PowerTuple::packed_key(int n) const {
  using u128 = unsigned __int128;
  u128 pow = 1, key = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (j > 0) {
      if (pow > (~static_cast<u128>(0)) / static_cast<unsigned>(n)) return "";
      pow *= static_cast<unsigned>(n);
    }
    key += pow * static_cast<unsigned>(coords[j]);
  }
  if (key == 0) return "0";
  std::string s;
  while (key > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(key % 10)));
    key /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<PowerTuple> pattern_generators(const Loop& q, int k) {
  if (k < 1) throw Error(Errc::arity_mismatch, "pattern level k must be >= 1");
  const int n = q.order();
  const int m = 1 << (k + 1);
  std::vector<PowerTuple> out;
  std::set<std::vector<int>> seen;
  std::vector<int> coords(m);
  for (int i = 1; i <= k + 1; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (int kappa = 0; kappa < m; ++kappa)
          coords[kappa] = ((kappa >> (i - 1)) & 1) ? b : a;
        if (seen.insert(coords).second) out.push_back(PowerTuple{coords});
      }
  return out;
}

namespace {

// closure store: flat byte coordinates plus a prefix index.  The index maps
// the first m-1 coordinates to the tuple that first produced them, which
// gives both dedup (same last coordinate) and fork detection (different
// last coordinate) in one probe.
class TupleStore {
public:
  enum class Outcome { fresh, dup, fork, budget };
  struct Result {
    Outcome outcome;
    std::uint32_t index = 0;
    std::uint32_t other = 0;  // fork: the previously stored tuple
  };

  static constexpr std::uint32_t kEmpty = 0xffffffffu;
  static constexpr std::uint64_t kDirectCap = 1ull << 24;

  TupleStore(int n, int m, std::size_t budget) : n_(n), m_(m), budget_(budget) {
    std::uint64_t space = 1;
    direct_ = true;
    for (int j = 0; j + 1 < m_; ++j) {
      if (space > kDirectCap / static_cast<unsigned>(n_)) {
        direct_ = false;
        break;
      }
      space *= static_cast<unsigned>(n_);
    }
    if (std::getenv("LOOPNIL_FORCE_HASH_INDEX")) direct_ = false;  // test hook
    if (direct_) {
      // hot byte array for the dup/fork test, cold index array for witnesses
      direct_last_.assign(space, 0xff);
      direct_idx_.assign(space, kEmpty);
      mask_ = 0;
    } else {
      cap_ = 1 << 12;
      mask_ = cap_ - 1;
      slots_.assign(cap_, kEmpty);
    }
  }

  std::size_t size() const { return count_; }

  const std::uint8_t* coords_of(std::uint32_t idx) const {
    return flat_.data() + static_cast<std::size_t>(idx) * m_;
  }

  bool is_direct() const { return direct_; }

  // direct mode with the prefix rank already computed by the caller
  Result insert_ranked(const std::uint8_t* c, std::uint64_t rank) {
    const std::uint8_t last = direct_last_[rank];
    if (last == c[m_ - 1]) return {Outcome::dup, direct_idx_[rank]};
    if (last == 0xff) {
      if (count_ == budget_) return {Outcome::budget};
      const std::uint32_t idx = append(c);
      direct_last_[rank] = c[m_ - 1];
      direct_idx_[rank] = idx;
      return {Outcome::fresh, idx};
    }
    return {Outcome::fork, append(c), direct_idx_[rank]};
  }

  Result insert(const std::uint8_t* c) {
    if (direct_) {
      std::uint64_t rank = 0, w = 1;
      for (int j = 0; j + 1 < m_; ++j) {
        rank += w * c[j];
        w *= static_cast<unsigned>(n_);
      }
      return insert_ranked(c, rank);
    }

    const std::uint64_t h = hash_bytes(c);
    std::size_t i = h & mask_;
    for (;;) {
      const std::uint32_t s = slots_[i];
      if (s == kEmpty) {
        if (count_ == budget_) return {Outcome::budget};
        const std::uint32_t idx = append(c);
        slots_[i] = idx;
        if (count_ * 2 > cap_) grow();
        return {Outcome::fresh, idx};
      }
      if (std::memcmp(coords_of(s), c, m_ - 1) == 0) {
        if (coords_of(s)[m_ - 1] == c[m_ - 1]) return {Outcome::dup, s};
        return {Outcome::fork, append(c), s};
      }
      i = (i + 1) & mask_;
    }
  }

private:
  std::uint32_t append(const std::uint8_t* c) {
    flat_.insert(flat_.end(), c, c + m_);
    return static_cast<std::uint32_t>(count_++);
  }

  std::uint64_t hash_bytes(const std::uint8_t* c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<unsigned>(m_ - 1);
    int len = m_ - 1;
    int j = 0;
    while (len >= 8) {
      std::uint64_t chunk;
      std::memcpy(&chunk, c + j, 8);
      h ^= chunk;
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 29;
      j += 8;
      len -= 8;
    }
    if (len > 0) {
      std::uint64_t chunk = 0;
      std::memcpy(&chunk, c + j, len);
      h ^= chunk;
      h *= 0x94d049bb133111ebull;
      h ^= h >> 31;
    }
    return h * 0xff51afd7ed558ccdull;
  }

  void grow() {
    cap_ *= 2;
    mask_ = cap_ - 1;
    slots_.assign(cap_, kEmpty);
    for (std::uint32_t idx = 0; idx < count_; ++idx) {
      std::size_t i = hash_bytes(coords_of(idx)) & mask_;
      while (slots_[i] != kEmpty) i = (i + 1) & mask_;
      slots_[i] = idx;
    }
  }

  int n_, m_;
  std::size_t budget_;
  bool direct_;
  std::size_t count_ = 0;
  std::size_t cap_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<std::uint8_t> flat_;
  std::vector<std::uint32_t> slots_;       // hash mode
  std::vector<std::uint8_t> direct_last_;  // direct mode
  std::vector<std::uint32_t> direct_idx_;
};

struct Deriv {
  std::uint32_t a = 0, b = 0;
  TupleOp op = TupleOp::gen;
};

std::vector<TraceStep> build_trace(const std::vector<Deriv>& deriv,
                                   std::uint32_t target) {
  std::set<std::uint32_t> needed;
  std::vector<std::uint32_t> stack{target};
  while (!stack.empty()) {
    std::uint32_t id = stack.back();
    stack.pop_back();
    if (!needed.insert(id).second) continue;
    const Deriv& d = deriv[id];
    if (d.op != TupleOp::gen) {
      stack.push_back(d.a);
      stack.push_back(d.b);
    }
  }
  std::vector<TraceStep> steps;
  steps.reserve(needed.size());
  for (std::uint32_t id : needed) {  // ascending = creation order
    const Deriv& d = deriv[id];
    TraceStep st;
    st.id = id;
    st.op = d.op;
    if (d.op == TupleOp::gen)
      st.gen = d.a;
    else {
      st.left = d.a;
      st.right = d.b;
    }
    steps.push_back(st);
  }
  return steps;
}

PowerTuple tuple_at(const TupleStore& store, int m, std::uint32_t idx) {
  const std::uint8_t* c = store.coords_of(idx);
  PowerTuple t;
  t.coords.assign(c, c + m);
  return t;
}

}  // namespace

namespace {

ForkResult fork_search_impl(const Loop& q, int k, std::size_t budget,
                            std::vector<PowerTuple>* collect) {
  if (k < 1) throw Error(Errc::arity_mismatch, "fork level k must be >= 1");
  if (k > 12) throw Error(Errc::arity_mismatch, "fork level k too large");
  const int n = q.order();
  if (n > 255)
    throw Error(Errc::malformed_input, "loop too large for the closure engine");
  const int m = 1 << (k + 1);

  ForkResult result;
  result.k = k;
  result.budget = budget;

  const auto gens = pattern_generators(q, k);
  TupleStore store(n, m, budget);
  std::vector<Deriv> deriv;
  deriv.reserve(1 << 16);

  auto finish_fork = [&](std::uint32_t fresh, std::uint32_t old) {
    result.status = ForkStatus::fork_found;
    result.closure_size = store.size();
    ForkWitness w1, w2;
    w1.id = old;
    w1.tuple = tuple_at(store, m, old);
    w1.trace = build_trace(deriv, old);
    w2.id = fresh;
    w2.tuple = tuple_at(store, m, fresh);
    w2.trace = build_trace(deriv, fresh);
    result.witnesses = std::make_pair(std::move(w1), std::move(w2));
  };

  // seed with the pattern generators
  for (std::uint32_t gi = 0; gi < gens.size(); ++gi) {
    std::vector<std::uint8_t> c(m);
    for (int j = 0; j < m; ++j) c[j] = static_cast<std::uint8_t>(gens[gi].coords[j]);
    auto r = store.insert(c.data());
    switch (r.outcome) {
      case TupleStore::Outcome::fresh:
        deriv.push_back({gi, 0, TupleOp::gen});
        break;
      case TupleStore::Outcome::dup:
        break;
      case TupleStore::Outcome::fork:
        deriv.push_back({gi, 0, TupleOp::gen});
        finish_fork(r.index, r.other);
        return result;
      case TupleStore::Outcome::budget:
        result.status = ForkStatus::inconclusive;
        result.closure_size = store.size();
        return result;
    }
  }

  const int* mul_t = q.mul_table().data();
  const int* ldiv_t = q.ldiv_table().data();
  const int* rdiv_t = q.rdiv_table().data();
  const int* tables[3] = {mul_t, ldiv_t, rdiv_t};
  constexpr TupleOp kOps[3] = {TupleOp::mul, TupleOp::ldiv, TupleOp::rdiv};

  std::vector<std::uint8_t> tbuf(m), sbuf(m), out(m);
  const bool direct = store.is_direct();

  // FIFO frontier; each tuple pairs with every tuple up to and including
  // itself, ops in order mul, ldiv, rdiv, older operand on the left first
  for (std::uint32_t t = 0; t < store.size(); ++t) {
    std::memcpy(tbuf.data(), store.coords_of(t), m);
    for (std::uint32_t s = 0; s <= t; ++s) {
      std::memcpy(sbuf.data(), store.coords_of(s), m);
      for (int opi = 0; opi < 3; ++opi) {
        const int* tab = tables[opi];
        for (int side = 0; side < 2; ++side) {
          if (side == 1 && s == t) break;
          const std::uint8_t* l = side == 0 ? sbuf.data() : tbuf.data();
          const std::uint8_t* r = side == 0 ? tbuf.data() : sbuf.data();
          TupleStore::Result res;
          if (direct) {
            std::uint64_t rank = 0, w = 1;
            for (int j = 0; j + 1 < m; ++j) {
              const std::uint8_t c = static_cast<std::uint8_t>(tab[l[j] * n + r[j]]);
              out[j] = c;
              rank += w * c;
              w *= static_cast<unsigned>(n);
            }
            out[m - 1] = static_cast<std::uint8_t>(tab[l[m - 1] * n + r[m - 1]]);
            res = store.insert_ranked(out.data(), rank);
          } else {
            for (int j = 0; j < m; ++j)
              out[j] = static_cast<std::uint8_t>(tab[l[j] * n + r[j]]);
            res = store.insert(out.data());
          }
          switch (res.outcome) {
            case TupleStore::Outcome::fresh:
              deriv.push_back({side == 0 ? s : t, side == 0 ? t : s, kOps[opi]});
              break;
            case TupleStore::Outcome::dup:
              break;
            case TupleStore::Outcome::fork:
              deriv.push_back({side == 0 ? s : t, side == 0 ? t : s, kOps[opi]});
              finish_fork(res.index, res.other);
              return result;
            case TupleStore::Outcome::budget:
              result.status = ForkStatus::inconclusive;
              result.closure_size = store.size();
              return result;
          }
        }
      }
    }
  }

  result.status = ForkStatus::supernilpotent_at_k;
  result.closure_size = store.size();
  if (collect) {
    collect->clear();
    collect->reserve(store.size());
    for (std::uint32_t i = 0; i < store.size(); ++i)
      collect->push_back(tuple_at(store, m, i));
  }
  return result;
}

}  // namespace

ForkResult fork_search(const Loop& q, int k, std::size_t budget) {
  return fork_search_impl(q, k, budget, nullptr);
}

std::vector<PowerTuple> closure_tuples(const Loop& q, int k, std::size_t budget) {
  std::vector<PowerTuple> out;
  const ForkResult r = fork_search_impl(q, k, budget, &out);
  if (r.status != ForkStatus::supernilpotent_at_k)
    throw Error(Errc::verification_failed,
                "closure_tuples requires a fork-free complete closure");
  return out;
}

SnBounds sn_bounds(const Loop& q, int k_max, std::size_t budget) {
  if (k_max < 1) throw Error(Errc::arity_mismatch, "k_max must be >= 1");
  SnBounds b;
  for (int k = 1; k <= k_max; ++k) {
    ForkResult r = fork_search(q, k, budget);
    const ForkStatus status = r.status;
    b.levels.push_back(std::move(r));
    if (status == ForkStatus::fork_found) {
      b.lower = k;
    } else if (status == ForkStatus::supernilpotent_at_k) {
      b.upper = k;  // higher levels follow by monotonicity
      break;
    } else {
      b.inconclusive_levels.push_back(k);
    }
  }
  return b;
}

int eval_maltsev(const Loop& q, int x, int y, int z) {
  return q.mul(q.rdiv(x, y), z);
}

int eval_q(const Loop& q, int level, std::span<const int> args) {
  if (level < 2) throw Error(Errc::arity_mismatch, "q_n needs n >= 2");
  if (args.size() != (static_cast<std::size_t>(1) << level) - 1)
    throw Error(Errc::arity_mismatch, "q_n takes 2^n - 1 arguments");
  if (level == 2) return eval_maltsev(q, args[1], args[0], args[2]);
  const std::size_t mid = static_cast<std::size_t>(1) << (level - 1);
  return eval_maltsev(q, args[mid - 1], eval_q(q, level - 1, args.first(mid - 1)),
                      eval_q(q, level - 1, args.subspan(mid)));
}

int Term::eval(const Loop& q, std::span<const int> args) const {
  if (static_cast<int>(args.size()) != arity)
    throw Error(Errc::arity_mismatch, "term arity mismatch");
  std::vector<int> val(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    switch (nd.kind) {
      case Kind::var: val[i] = args[nd.a]; break;
      case Kind::unit: val[i] = 0; break;
      case Kind::constant: val[i] = nd.a; break;
      case Kind::mul: val[i] = q.mul(val[nd.a], val[nd.b]); break;
      case Kind::ldiv: val[i] = q.ldiv(val[nd.a], val[nd.b]); break;
      case Kind::rdiv: val[i] = q.rdiv(val[nd.a], val[nd.b]); break;
    }
  }
  return val.back();
}

namespace {

void term_print(const Term& t, int i, std::ostream& os) {
  const Term::Node& nd = t.nodes[i];
  switch (nd.kind) {
    case Term::Kind::var: os << 'x' << (nd.a + 1); return;
    case Term::Kind::unit: os << '1'; return;
    case Term::Kind::constant: os << '#' << nd.a; return;
    default: break;
  }
  const char sym = nd.kind == Term::Kind::mul ? '*' : nd.kind == Term::Kind::ldiv ? '\\' : '/';
  os << '(';
  term_print(t, nd.a, os);
  os << sym;
  term_print(t, nd.b, os);
  os << ')';
}

}  // namespace

std::string Term::to_string() const {
  std::ostringstream os;
  term_print(*this, static_cast<int>(nodes.size()) - 1, os);
  return os.str();
}

Term Term::variable(int slot, int arity) {
  Term t;
  t.arity = arity;
  t.nodes.push_back({Kind::var, slot, -1});
  return t;
}

Term Term::apply(Term::Kind op, const Term& lhs, const Term& rhs) {
  Term t;
  t.arity = std::max(lhs.arity, rhs.arity);
  t.nodes = lhs.nodes;
  const int off = static_cast<int>(t.nodes.size());
  for (auto nd : rhs.nodes) {
    if (nd.kind == Kind::mul || nd.kind == Kind::ldiv || nd.kind == Kind::rdiv) {
      nd.a += off;
      nd.b += off;
    }
    t.nodes.push_back(nd);
  }
  t.nodes.push_back({op, off - 1, static_cast<int>(t.nodes.size()) - 1});
  return t;
}

Term Term::commutator_term() {
  Term t;
  t.arity = 2;
  t.nodes = {
      {Kind::var, 0, -1},   // x
      {Kind::var, 1, -1},   // y
      {Kind::mul, 1, 0},    // yx
      {Kind::mul, 0, 1},    // xy
      {Kind::ldiv, 2, 3},   // (yx) \ (xy)
  };
  return t;
}

Term Term::associator_term() {
  Term t;
  t.arity = 3;
  t.nodes = {
      {Kind::var, 0, -1},   // x
      {Kind::var, 1, -1},   // y
      {Kind::var, 2, -1},   // z
      {Kind::mul, 0, 1},    // xy
      {Kind::mul, 3, 2},    // (xy)z
      {Kind::mul, 1, 2},    // yz
      {Kind::mul, 0, 5},    // x(yz)
      {Kind::ldiv, 4, 6},   // ((xy)z) \ (x(yz))
  };
  return t;
}

namespace {

int random_node(const int arity, int depth, std::mt19937_64& rng,
                bool allow_constants, int order, std::vector<Term::Node>& nodes) {
  std::uniform_int_distribution<int> coin(0, 99);
  const bool leaf = depth <= 0 || coin(rng) < 30;
  if (leaf) {
    const int roll = coin(rng);
    if (roll < 80) {
      std::uniform_int_distribution<int> pick(0, arity - 1);
      nodes.push_back({Term::Kind::var, pick(rng), -1});
    } else if (roll < 90 || !allow_constants) {
      nodes.push_back({Term::Kind::unit, -1, -1});
    } else {
      std::uniform_int_distribution<int> pick(0, order - 1);
      nodes.push_back({Term::Kind::constant, pick(rng), -1});
    }
    return static_cast<int>(nodes.size()) - 1;
  }
  std::uniform_int_distribution<int> pick_op(0, 2);
  const Term::Kind ops[3] = {Term::Kind::mul, Term::Kind::ldiv, Term::Kind::rdiv};
  const Term::Kind op = ops[pick_op(rng)];
  const int a = random_node(arity, depth - 1, rng, allow_constants, order, nodes);
  const int b = random_node(arity, depth - 1, rng, allow_constants, order, nodes);
  nodes.push_back({op, a, b});
  return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

Term random_term(int arity, int max_depth, std::mt19937_64& rng,
                 bool allow_constants, int order) {
  Term t;
  t.arity = arity;
  random_node(arity, max_depth, rng, allow_constants, order, t.nodes);
  return t;
}

namespace {

// lhs/rhs of the condition-(4) identity; combination j counts in binary with
// the last block varying fastest, the all-b combination is the right side
std::pair<int, int> condition4_eval(const Loop& q, int k, const Term& t,
                                    const std::vector<std::vector<int>>& a_blocks,
                                    const std::vector<std::vector<int>>& b_blocks) {
  const int blocks = k + 1;
  if (static_cast<int>(a_blocks.size()) != blocks ||
      static_cast<int>(b_blocks.size()) != blocks)
    throw Error(Errc::arity_mismatch, "need k+1 tuple pairs");
  int total = 0;
  for (int i = 0; i < blocks; ++i) {
    if (a_blocks[i].size() != b_blocks[i].size())
      throw Error(Errc::arity_mismatch, "paired tuples must have equal length");
    total += static_cast<int>(a_blocks[i].size());
  }
  if (total != t.arity)
    throw Error(Errc::arity_mismatch, "term arity does not match tuple blocks");

  std::vector<int> argbuf(total);
  auto fill = [&](unsigned kappa) {
    int pos = 0;
    for (int i = 1; i <= blocks; ++i) {
      const bool use_b = (kappa >> (blocks - i)) & 1u;
      const auto& blk = use_b ? b_blocks[i - 1] : a_blocks[i - 1];
      for (int v : blk) argbuf[pos++] = v;
    }
  };

  const unsigned count = 1u << blocks;
  std::vector<int> lhs_args;
  lhs_args.reserve(count - 1);
  for (unsigned kappa = 0; kappa + 1 < count; ++kappa) {
    fill(kappa);
    lhs_args.push_back(t.eval(q, argbuf));
  }
  fill(count - 1);
  const int rhs = t.eval(q, argbuf);
  const int lhs = eval_q(q, blocks, lhs_args);
  return {lhs, rhs};
}

}  // namespace

bool condition4_holds(const Loop& q, int k, const Term& t,
                      const std::vector<std::vector<int>>& a_blocks,
                      const std::vector<std::vector<int>>& b_blocks) {
  auto [lhs, rhs] = condition4_eval(q, k, t, a_blocks, b_blocks);
  return lhs == rhs;
}

std::optional<Condition4Counterexample> condition4_falsifier(
    const Loop& q, int k, int trials, int term_depth, std::uint64_t seed) {
  if (k < 1) throw Error(Errc::arity_mismatch, "k must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> block_size(1, 2);
  std::uniform_int_distribution<int> elem(0, q.order() - 1);
  for (int trial = 0; trial < trials; ++trial) {
    const int blocks = k + 1;
    std::vector<std::vector<int>> a(blocks), b(blocks);
    int total = 0;
    for (int i = 0; i < blocks; ++i) {
      const int sz = block_size(rng);
      a[i].resize(sz);
      b[i].resize(sz);
      for (int j = 0; j < sz; ++j) {
        a[i][j] = elem(rng);
        b[i][j] = elem(rng);
      }
      total += sz;
    }
    Term t = random_term(total, term_depth, rng, /*allow_constants=*/false,
                         q.order());
    auto [lhs, rhs] = condition4_eval(q, k, t, a, b);
    if (lhs != rhs)
      return Condition4Counterexample{std::move(t), std::move(a), std::move(b),
                                      lhs, rhs};
  }
  return std::nullopt;
}

namespace {

constexpr long kExhaustiveCap = 2'000'000;

long checked_pow(int n, int arity) {
  long total = 1;
  for (int i = 0; i < arity; ++i) {
    total *= n;
    if (total > kExhaustiveCap)
      throw Error(Errc::arity_mismatch, "arity too large for exhaustive scan");
  }
  return total;
}

}  // namespace

bool is_absorbing_at_unit(const Loop& q, const Term& poly) {
  const int n = q.order();
  const long total = checked_pow(n, poly.arity);
  std::vector<int> in(poly.arity, 0);
  for (long it = 0; it < total; ++it) {
    long x = it;
    bool has_unit = false;
    for (int i = 0; i < poly.arity; ++i) {
      in[i] = static_cast<int>(x % n);
      x /= n;
      has_unit |= in[i] == 0;
    }
    if (has_unit && poly.eval(q, in) != 0) return false;
  }
  return true;
}

bool is_constant_poly(const Loop& q, const Term& poly) {
  const int n = q.order();
  const long total = checked_pow(n, poly.arity);
  std::vector<int> in(poly.arity, 0);
  const int first = poly.eval(q, in);
  for (long it = 1; it < total; ++it) {
    long x = it;
    for (int i = 0; i < poly.arity; ++i) {
      in[i] = static_cast<int>(x % n);
      x /= n;
    }
    if (poly.eval(q, in) != first) return false;
  }
  return true;
}

namespace {

std::optional<AbsorberWitness> try_absorber(const Loop& q, const Term& poly,
                                            const std::string& origin) {
  if (!is_absorbing_at_unit(q, poly)) return std::nullopt;
  const int n = q.order();
  const long total = checked_pow(n, poly.arity);
  std::vector<int> in(poly.arity, 0);
  const int first = poly.eval(q, in);
  std::vector<int> first_in = in;
  for (long it = 1; it < total; ++it) {
    long x = it;
    for (int i = 0; i < poly.arity; ++i) {
      in[i] = static_cast<int>(x % n);
      x /= n;
    }
    const int v = poly.eval(q, in);
    if (v != first) {
      AbsorberWitness w;
      w.poly = poly;
      w.origin = origin;
      w.arity = poly.arity;
      w.input_x = first_in;
      w.input_y = in;
      w.out_x = first;
      w.out_y = v;
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<AbsorberWitness> absorber_falsifier(const Loop& q, int arity,
                                                  int trials, int term_depth,
                                                  std::uint64_t seed) {
  if (arity < 2) throw Error(Errc::arity_mismatch, "absorber arity must be >= 2");
  if (arity == 2) {
    if (auto w = try_absorber(q, Term::commutator_term(), "commutator")) return w;
  }
  if (arity == 3) {
    if (auto w = try_absorber(q, Term::associator_term(), "associator")) return w;
  }
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    Term t = random_term(arity, term_depth, rng, /*allow_constants=*/true,
                         q.order());
    if (auto w = try_absorber(q, t, "sampled")) return w;
  }
  return std::nullopt;
}

bool quotient_drop_check(const Loop& q, int upper, std::size_t budget) {
  auto [factor, proj] = q.quotient(q.center());
  (void)proj;
  if (upper <= 1) return factor.order() == 1;
  const ForkResult r = fork_search(factor, upper - 1, budget);
  if (r.status == ForkStatus::inconclusive)
    throw Error(Errc::budget_exceeded, "quotient fork search ran out of budget")
        .with_partial(r.closure_size);
  return r.status == ForkStatus::supernilpotent_at_k;
}

bool replay_witness(const Loop& q, int k, const ForkWitness& w) {
  if (w.trace.empty()) return false;
  std::vector<PowerTuple> gens;
  try {
    gens = pattern_generators(q, k);
  } catch (const Error&) {
    return false;
  }
  const std::size_t m = static_cast<std::size_t>(1) << (k + 1);
  std::map<std::uint32_t, std::vector<int>> val;
  std::uint32_t prev_id = 0;
  bool first = true;
  for (const auto& st : w.trace) {
    if (!first && st.id <= prev_id) return false;  // must be ascending
    first = false;
    prev_id = st.id;
    if (val.count(st.id)) return false;
    if (st.op == TupleOp::gen) {
      if (st.gen >= gens.size()) return false;
      val[st.id] = gens[st.gen].coords;
      continue;
    }
    auto li = val.find(st.left);
    auto ri = val.find(st.right);
    if (li == val.end() || ri == val.end()) return false;
    const auto& l = li->second;
    const auto& r = ri->second;
    std::vector<int> out(m);
    for (std::size_t j = 0; j < m; ++j) {
      switch (st.op) {
        case TupleOp::mul: out[j] = q.mul(l[j], r[j]); break;
        case TupleOp::ldiv: out[j] = q.ldiv(l[j], r[j]); break;
        case TupleOp::rdiv: out[j] = q.rdiv(l[j], r[j]); break;
        default: return false;
      }
    }
    val[st.id] = std::move(out);
  }
  if (w.trace.back().id != w.id) return false;
  return val.at(w.id) == w.tuple.coords;
}

namespace {

json witness_to_json(const ForkWitness& w, const Loop& q) {
  json steps = json::array();
  for (const auto& st : w.trace) {
    json s{{"id", st.id}, {"op", tuple_op_name(st.op)}};
    if (st.op == TupleOp::gen)
      s["gen"] = st.gen;
    else {
      s["left"] = st.left;
      s["right"] = st.right;
    }
    steps.push_back(std::move(s));
  }
  const std::string key = w.tuple.packed_key(q.order());
  json out{{"id", w.id}, {"coords", w.tuple.coords}, {"trace", std::move(steps)}};
  if (key.empty())
    out["packed_key"] = nullptr;
  else
    out["packed_key"] = key;
  return out;
}

ForkWitness witness_from_json(const json& j) {
  ForkWitness w;
  w.id = j.at("id").get<std::uint32_t>();
  w.tuple.coords = j.at("coords").get<std::vector<int>>();
  for (const auto& s : j.at("trace")) {
    TraceStep st;
    st.id = s.at("id").get<std::uint32_t>();
    const std::string op = s.at("op").get<std::string>();
    if (op == "gen") {
      st.op = TupleOp::gen;
      st.gen = s.at("gen").get<std::uint32_t>();
    } else {
      st.op = op == "mul" ? TupleOp::mul : op == "ldiv" ? TupleOp::ldiv : TupleOp::rdiv;
      st.left = s.at("left").get<std::uint32_t>();
      st.right = s.at("right").get<std::uint32_t>();
    }
    w.trace.push_back(st);
  }
  return w;
}

}  // namespace

std::string fork_result_to_json(const ForkResult& r, const Loop& q) {
  json j{{"k", r.k},
         {"status", fork_status_name(r.status)},
         {"closure_size", r.closure_size},
         {"budget", r.budget}};
  if (r.witnesses) {
    j["witnesses"] = json::array(
        {witness_to_json(r.witnesses->first, q), witness_to_json(r.witnesses->second, q)});
  }
  return j.dump();
}

ForkResult fork_result_from_json(const std::string& text) {
  json j = json::parse(text);
  ForkResult r;
  r.k = j.at("k").get<int>();
  r.closure_size = j.at("closure_size").get<std::size_t>();
  r.budget = j.at("budget").get<std::size_t>();
  const std::string status = j.at("status").get<std::string>();
  if (status == "fork_found")
    r.status = ForkStatus::fork_found;
  else if (status == "supernilpotent_at_k")
    r.status = ForkStatus::supernilpotent_at_k;
  else
    r.status = ForkStatus::inconclusive;
  if (j.contains("witnesses")) {
    r.witnesses = std::make_pair(witness_from_json(j["witnesses"][0]),
                                 witness_from_json(j["witnesses"][1]));
  }
  return r;
}

}  // namespace loopnil
