#include "loopnil/loop.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "loopnil/error.hpp"

namespace loopnil {

bool Subloop::contains(int x) const {
  return std::binary_search(elems.begin(), elems.end(), x);
}

Loop Loop::from_table(const std::vector<std::vector<int>>& table,
                      std::vector<int> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(Errc::malformed_input, "empty table");

  Loop q;
  q.n_ = n;
  q.mul_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n)
      throw Error(Errc::malformed_input, "table is not square").at(i + 1, -1);
    for (int j = 0; j < n; ++j) {
      int v = table[i][j];
      if (v < 0 || v >= n)
        throw Error(Errc::malformed_input, "entry out of range").at(i + 1, j + 1);
      q.mul_[i * n + j] = v;
    }
  }

  // Latin square: rows and columns are permutations of 0..n-1
  std::vector<int> seen(n);
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      int v = q.mul_[i * n + j];
      if (seen[v]++)
        throw Error(Errc::not_latin_square, "repeated entry in row").at(i + 1, j + 1);
    }
  }
  for (int j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int i = 0; i < n; ++i) {
      int v = q.mul_[i * n + j];
      if (seen[v]++)
        throw Error(Errc::not_latin_square, "repeated entry in column").at(i + 1, j + 1);
    }
  }

  for (int x = 0; x < n; ++x)
    if (q.mul_[0 * n + x] != x || q.mul_[x * n + 0] != x)
      throw Error(Errc::no_identity, "element 0 is not a two-sided identity");

  q.ldiv_.assign(static_cast<std::size_t>(n) * n, -1);
  q.rdiv_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int c = q.mul_[a * n + b];
      q.ldiv_[a * n + c] = b;  // a \ c = b
      q.rdiv_[c * n + b] = a;  // c / b = a
    }

  if (labels.empty()) {
    labels.resize(n);
    std::iota(labels.begin(), labels.end(), 1);
  } else if (static_cast<int>(labels.size()) != n) {
    throw Error(Errc::malformed_input, "label count does not match order");
  }
  q.labels_ = std::move(labels);
  return q;
}

Perm Loop::left_translation(int a) const {
  std::vector<int> img(n_);
  for (int x = 0; x < n_; ++x) img[x] = mul(a, x);
  return Perm(std::move(img));
}

Perm Loop::right_translation(int a) const {
  std::vector<int> img(n_);
  for (int x = 0; x < n_; ++x) img[x] = mul(x, a);
  return Perm(std::move(img));
}

std::vector<Perm> Loop::inner_generators() const {
  std::vector<Perm> gens;
  gens.reserve(2 * static_cast<std::size_t>(n_) * n_ + n_);
  std::vector<int> img(n_);
  // L_{x,y}(z) = (xy) \ (x(yz))
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y) {
      const int xy = mul(x, y);
      for (int z = 0; z < n_; ++z) img[z] = ldiv(xy, mul(x, mul(y, z)));
      gens.emplace_back(img);
    }
  // R_{x,y}(z) = ((zy)x) / (yx)
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y) {
      const int yx = mul(y, x);
      for (int z = 0; z < n_; ++z) img[z] = rdiv(mul(mul(z, y), x), yx);
      gens.emplace_back(img);
    }
  // T_x(z) = (xz) / x
  for (int x = 0; x < n_; ++x) {
    for (int z = 0; z < n_; ++z) img[z] = rdiv(mul(x, z), x);
    gens.emplace_back(img);
  }
  return gens;
}

std::vector<Perm> Loop::inner_generators_dedup() const {
  auto gens = inner_generators();
  std::vector<Perm> out;
  std::set<Perm> seen;
  for (auto& g : gens)
    if (seen.insert(g).second) out.push_back(std::move(g));
  return out;
}

Subloop Loop::center() const {
  const auto gens = inner_generators_dedup();
  std::vector<int> elems;
  for (int a = 0; a < n_; ++a) {
    bool fixed = true;
    for (const auto& g : gens)
      if (g(a) != a) {
        fixed = false;
        break;
      }
    if (fixed) elems.push_back(a);
  }
  return Subloop{std::move(elems), n_};
}

bool Loop::is_subloop_set(const std::vector<int>& elems) const {
  if (elems.empty()) return false;
  std::vector<char> in(n_, 0);
  for (int e : elems) {
    if (e < 0 || e >= n_) return false;
    in[e] = 1;
  }
  if (!in[0]) return false;
  for (int a : elems)
    for (int b : elems)
      if (!in[mul(a, b)] || !in[ldiv(a, b)] || !in[rdiv(a, b)]) return false;
  return true;
}

Subloop Loop::subloop(std::vector<int> elems) const {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!is_subloop_set(elems))
    throw Error(Errc::not_a_subloop, "set is not closed under mul/ldiv/rdiv");
  return Subloop{std::move(elems), n_};
}

Subloop Loop::subloop_generated(std::vector<int> seed) const {
  std::vector<char> in(n_, 0);
  std::vector<int> work;
  auto add = [&](int e) {
    if (!in[e]) {
      in[e] = 1;
      work.push_back(e);
    }
  };
  add(0);
  for (int e : seed) {
    if (e < 0 || e >= n_)
      throw Error(Errc::malformed_input, "seed element out of range");
    add(e);
  }
  // fixed-point closure by table lookups
  for (std::size_t i = 0; i < work.size(); ++i) {
    const int a = work[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const int b = work[j];
      add(mul(a, b));
      add(mul(b, a));
      add(ldiv(a, b));
      add(ldiv(b, a));
      add(rdiv(a, b));
      add(rdiv(b, a));
    }
  }
  std::sort(work.begin(), work.end());
  return Subloop{std::move(work), n_};
}

bool Loop::is_normal(const Subloop& s) const {
  if (!is_subloop_set(s.elems))
    throw Error(Errc::not_a_subloop, "is_normal: argument is not a subloop");
  for (const auto& g : inner_generators_dedup())
    for (int e : s.elems)
      if (!s.contains(g(e))) return false;
  return true;
}

std::pair<Loop, std::vector<int>> Loop::quotient(const Subloop& n) const {
  if (!is_normal(n))
    throw Error(Errc::not_normal, "quotient requires a normal subloop");

  std::vector<int> coset(n_, -1);
  std::vector<int> reps;
  for (int x = 0; x < n_; ++x) {
    if (coset[x] != -1) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int e : n.elems) {
      const int y = mul(x, e);
      if (coset[y] != -1)
        throw Error(Errc::not_normal, "cosets do not partition the loop");
      coset[y] = c;
    }
  }

  const int m = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[i][j] = coset[mul(reps[i], reps[j])];
  // well-definedness: the product coset may not depend on representatives
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y)
      if (table[coset[x]][coset[y]] != coset[mul(x, y)])
        throw Error(Errc::not_normal, "coset multiplication is not well-defined");

  return {Loop::from_table(table), std::move(coset)};
}

bool Loop::is_associative() const {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      const int ab = mul(a, b);
      for (int c = 0; c < n_; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
    }
  return true;
}

bool Loop::is_commutative() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

int Loop::commutator(int x, int y) const { return ldiv(mul(y, x), mul(x, y)); }

int Loop::associator(int x, int y, int z) const {
  return ldiv(mul(mul(x, y), z), mul(x, mul(y, z)));
}

Loop direct_product(const Loop& q1, const Loop& q2) {
  const int n1 = q1.order(), n2 = q2.order();
  const int n = n1 * n2;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 = 0; a2 < n2; ++a2)
      for (int b1 = 0; b1 < n1; ++b1)
        for (int b2 = 0; b2 < n2; ++b2)
          table[a1 * n2 + a2][b1 * n2 + b2] = q1.mul(a1, b1) * n2 + q2.mul(a2, b2);
  return Loop::from_table(table);
}

Loop restrict_to(const Loop& q, const Subloop& s) {
  if (!q.is_subloop_set(s.elems))
    throw Error(Errc::not_a_subloop, "restrict_to: argument is not a subloop");
  const int m = static_cast<int>(s.elems.size());
  std::vector<int> pos(q.order(), -1);
  for (int i = 0; i < m; ++i) pos[s.elems[i]] = i;
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  std::vector<int> labels(m);
  for (int i = 0; i < m; ++i) {
    labels[i] = q.label(s.elems[i]);
    for (int j = 0; j < m; ++j) table[i][j] = pos[q.mul(s.elems[i], s.elems[j])];
  }
  return Loop::from_table(table, std::move(labels));
}

std::vector<Subloop> all_subloops(const Loop& q) {
  std::set<std::vector<int>> seen;
  std::vector<Subloop> out;
  std::vector<Subloop> frontier;

  auto push = [&](Subloop s) {
    if (seen.insert(s.elems).second) {
      out.push_back(s);
      frontier.push_back(std::move(s));
    }
  };
  push(q.subloop_generated({}));

  while (!frontier.empty()) {
    Subloop s = std::move(frontier.back());
    frontier.pop_back();
    if (s.is_whole()) continue;
    for (int e = 0; e < q.order(); ++e) {
      if (s.contains(e)) continue;
      auto seeds = s.elems;
      seeds.push_back(e);
      push(q.subloop_generated(std::move(seeds)));
    }
  }

  std::sort(out.begin(), out.end(), [](const Subloop& a, const Subloop& b) {
    if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size();
    return a.elems < b.elems;
  });
  return out;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_input: return "MalformedInput";
    case Errc::not_latin_square: return "NotLatinSquare";
    case Errc::no_identity: return "NoIdentity";
    case Errc::not_a_subloop: return "NotASubloop";
    case Errc::not_normal: return "NotNormal";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::inner_mismatch: return "InnerMismatch";
    case Errc::not_subgroup: return "NotSubgroup";
    case Errc::not_nilpotent: return "NotNilpotent";
    case Errc::orbit_not_subloop: return "OrbitNotSubloop";
    case Errc::mlt_not_nilpotent: return "MltNotNilpotent";
    case Errc::verification_failed: return "VerificationFailed";
    case Errc::arity_mismatch: return "ArityMismatch";
  }
  return "UnknownError";
}

}  // namespace loopnil
