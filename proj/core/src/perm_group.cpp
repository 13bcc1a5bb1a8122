#include "loopnil/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "loopnil/error.hpp"

namespace loopnil {

namespace {

std::vector<Perm> dedup_gens(int degree, const std::vector<Perm>& gens) {
  std::vector<Perm> out;
  std::unordered_set<Perm, PermHash> seen;
  for (const auto& g : gens) {
    if (g.degree() != degree)
      throw Error(Errc::malformed_input, "generator degree mismatch");
    if (g.is_identity()) continue;
    if (seen.insert(g).second) out.push_back(g);
  }
  return out;
}

}  // namespace

PermGroup PermGroup::trivial(int degree) {
  PermGroup g;
  g.degree_ = degree;
  g.elems_ = {Perm::identity(degree)};
  return g;
}

PermGroup PermGroup::generate(int degree, const std::vector<Perm>& gens,
                              std::size_t budget) {
  PermGroup g;
  g.degree_ = degree;
  g.gens_ = dedup_gens(degree, gens);

  std::unordered_set<Perm, PermHash> seen;
  std::deque<Perm> frontier;
  auto push = [&](Perm p) {
    if (seen.insert(p).second) {
      if (seen.size() > budget)
        throw Error(Errc::budget_exceeded, "group enumeration budget exhausted")
            .with_partial(seen.size() - 1);
      frontier.push_back(std::move(p));
    }
  };
  push(Perm::identity(degree));
  while (!frontier.empty()) {
    Perm f = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& s : g.gens_) push(compose(f, s));
  }

  g.elems_.assign(seen.begin(), seen.end());
  std::sort(g.elems_.begin(), g.elems_.end());
  return g;
}

PermGroup PermGroup::from_elements(std::vector<Perm> elems,
                                   std::vector<Perm> gens_hint) {
  if (elems.empty()) throw Error(Errc::not_subgroup, "empty element set");
  const int degree = elems[0].degree();
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

  PermGroup g;
  g.degree_ = degree;
  g.elems_ = std::move(elems);
  if (!g.contains(Perm::identity(degree)))
    throw Error(Errc::not_subgroup, "identity missing");

  try {
    if (gens_hint.empty()) {
      // greedy small generating set; doubles as a closure check
      PermGroup k = PermGroup::trivial(degree);
      for (const auto& e : g.elems_) {
        if (k.contains(e)) continue;
        g.gens_.push_back(e);
        k = PermGroup::generate(degree, g.gens_, g.elems_.size());
      }
      if (k.order() != g.order())
        throw Error(Errc::not_subgroup, "element set is not closed");
    } else {
      PermGroup k = PermGroup::generate(degree, gens_hint, g.elems_.size());
      if (k.elems_ != g.elems_)
        throw Error(Errc::not_subgroup, "hinted generators span a different group");
      g.gens_ = dedup_gens(degree, gens_hint);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::budget_exceeded)
      throw Error(Errc::not_subgroup, "element set is not closed");
    throw;
  }
  return g;
}

bool PermGroup::contains(const Perm& p) const {
  return std::binary_search(elems_.begin(), elems_.end(), p);
}

bool PermGroup::is_subgroup_of(const PermGroup& g) const {
  for (const auto& e : elems_)
    if (!g.contains(e)) return false;
  return true;
}

bool PermGroup::is_abelian() const {
  for (const auto& a : gens_)
    for (const auto& b : gens_)
      if (compose(a, b) != compose(b, a)) return false;
  return true;
}

PermGroup mlt(const Loop& q, std::size_t budget) {
  std::vector<Perm> gens;
  gens.reserve(2 * q.order());
  for (int a = 0; a < q.order(); ++a) gens.push_back(q.left_translation(a));
  for (int a = 0; a < q.order(); ++a) gens.push_back(q.right_translation(a));
  return PermGroup::generate(q.order(), gens, budget);
}

PermGroup inn(const Loop& q, std::size_t budget) {
  const PermGroup m = mlt(q, budget);
  std::vector<Perm> stab;
  for (const auto& f : m.elements())
    if (f.fixes(0)) stab.push_back(f);

  const auto gens = q.inner_generators_dedup();
  const PermGroup by_gens = PermGroup::generate(q.order(), gens, budget);
  PermGroup by_stab = PermGroup::from_elements(std::move(stab));
  if (!(by_gens == by_stab))
    throw Error(Errc::inner_mismatch,
                "stabilizer of 0 differs from the span of the inner generators");
  // keep the stabilizer's element set with the small inner generating set
  return PermGroup::from_elements(by_stab.elements(), gens.empty()
                                      ? std::vector<Perm>{}
                                      : gens);
}

PermGroup commutator_subgroup(const PermGroup& g, const PermGroup& h,
                              std::size_t budget) {
  const int degree = g.degree();
  std::vector<Perm> gens;
  std::unordered_set<Perm, PermHash> seen;
  auto add = [&](const Perm& p) {
    if (p.is_identity()) return false;
    if (!seen.insert(p).second) return false;
    gens.push_back(p);
    return true;
  };
  for (const auto& a : g.generators())
    for (const auto& b : h.generators()) add(group_commutator(a, b));

  PermGroup k = gens.empty() ? PermGroup::trivial(degree)
                             : PermGroup::generate(degree, gens, budget);
  // normal closure under conjugation by generators of g
  bool changed = true;
  while (changed) {
    changed = false;
    const auto snapshot = gens;
    for (const auto& c : g.generators())
      for (const auto& s : snapshot) {
        Perm t = conjugate(c, s);
        if (!k.contains(t) && add(t)) changed = true;
      }
    if (changed) k = PermGroup::generate(degree, gens, budget);
  }
  return k;
}

std::optional<int> nilpotency_class(const PermGroup& g, std::size_t budget) {
  if (g.order() == 1) return 0;
  PermGroup gamma = g;
  for (int i = 1;; ++i) {
    PermGroup next = commutator_subgroup(g, gamma, budget);
    if (next.order() == 1) return i;
    if (next == gamma) return std::nullopt;  // stabilized above trivial
    gamma = std::move(next);
  }
}

std::vector<PermGroup> center_series(const PermGroup& g) {
  std::vector<PermGroup> series;
  series.push_back(PermGroup::trivial(g.degree()));
  for (;;) {
    const PermGroup& z = series.back();
    std::vector<Perm> next;
    for (const auto& e : g.elements()) {
      bool central = true;
      for (const auto& s : g.generators())
        if (!z.contains(group_commutator(e, s))) {
          central = false;
          break;
        }
      if (central) next.push_back(e);
    }
    if (next.size() == z.order()) break;
    series.push_back(PermGroup::from_elements(std::move(next)));
  }
  return series;
}

PermGroup normalizer(const PermGroup& g, const PermGroup& h) {
  if (!h.is_subgroup_of(g))
    throw Error(Errc::not_subgroup, "normalizer: H is not contained in G");
  std::vector<Perm> elems;
  for (const auto& e : g.elements()) {
    bool ok = true;
    for (const auto& s : h.generators())
      if (!h.contains(conjugate(e, s))) {
        ok = false;
        break;
      }
    if (ok) elems.push_back(e);
  }
  PermGroup n = PermGroup::from_elements(std::move(elems));
  if (!h.is_subgroup_of(n))
    throw Error(Errc::verification_failed, "normalizer does not contain H");
  return n;
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PermGroup order_filter(const PermGroup& g, int p, bool keep_p_power,
                       std::size_t budget) {
  if (!is_prime(p)) throw Error(Errc::malformed_input, "p must be prime");
  if (!nilpotency_class(g, budget))
    throw Error(Errc::not_nilpotent, "Sylow filtering requires a nilpotent group");
  std::vector<Perm> elems;
  for (const auto& e : g.elements()) {
    const long ord = perm_order(e);
    bool keep;
    if (keep_p_power) {
      long t = ord;
      while (t % p == 0) t /= p;
      keep = (t == 1);  // order is a power of p
    } else {
      keep = (ord % p != 0);  // order coprime to p
    }
    if (keep) elems.push_back(e);
  }
  return PermGroup::from_elements(std::move(elems));
}

}  // namespace

PermGroup sylow_subgroup(const PermGroup& g, int p, std::size_t budget) {
  return order_filter(g, p, true, budget);
}

PermGroup sylow_complement(const PermGroup& g, int p, std::size_t budget) {
  PermGroup r = order_filter(g, p, false, budget);
  PermGroup s = order_filter(g, p, true, budget);
  if (s.order() * r.order() != g.order())
    throw Error(Errc::verification_failed, "Sylow factorization |P||R| != |G|");
  return r;
}

std::vector<int> point_orbit(const PermGroup& g, int pt) {
  std::vector<char> in(g.degree(), 0);
  for (const auto& e : g.elements()) in[e(pt)] = 1;
  std::vector<int> orbit;
  for (int x = 0; x < g.degree(); ++x)
    if (in[x]) orbit.push_back(x);
  return orbit;
}

PermGroup point_stabilizer(const PermGroup& g, int pt) {
  std::vector<Perm> elems;
  for (const auto& e : g.elements())
    if (e.fixes(pt)) elems.push_back(e);
  return PermGroup::from_elements(std::move(elems));
}

}  // namespace loopnil
