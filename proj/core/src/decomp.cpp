#include "loopnil/decomp.hpp"

#include <algorithm>

#include "json.hpp"
#include "loopnil/error.hpp"
#include "loopnil/nilpotence.hpp"

namespace loopnil {

using json = nlohmann::json;

PermGroup n_star(const Loop& q, const Subloop& n, std::size_t budget) {
  if (!q.is_normal(n))
    throw Error(Errc::not_normal, "n_star requires a normal subloop");
  const PermGroup m = mlt(q, budget);
  std::vector<Perm> elems;
  for (const auto& f : m.elements()) {
    bool ok = true;
    for (int x = 0; x < q.order(); ++x)
      if (!n.contains(q.rdiv(f(x), x))) {
        ok = false;
        break;
      }
    if (ok) elems.push_back(f);
  }
  PermGroup star = PermGroup::from_elements(std::move(elems));
  for (const auto& g : m.generators())
    for (const auto& s : star.generators())
      if (!star.contains(conjugate(g, s)))
        throw Error(Errc::verification_failed, "N* is not normal in Mlt");
  return star;
}

Subloop orbit_subloop(const Loop& q, const PermGroup& g) {
  std::vector<char> in(q.order(), 0);
  for (const auto& f : g.elements()) in[f(0)] = 1;
  std::vector<int> elems;
  for (int x = 0; x < q.order(); ++x)
    if (in[x]) elems.push_back(x);
  if (!q.is_subloop_set(elems))
    throw Error(Errc::orbit_not_subloop, "orbit of 0 is not a subloop");
  Subloop s{std::move(elems), q.order()};
  if (!q.is_normal(s))
    throw Error(Errc::orbit_not_subloop, "orbit of 0 is not a normal subloop");
  if (g.order() % s.size() != 0)
    throw Error(Errc::verification_failed, "|G(1)| does not divide |G|");
  return s;
}

std::size_t Decomposition::total_order() const {
  std::size_t t = 1;
  for (const auto& [p, loop] : factors) t *= loop.order();
  return t;
}

namespace {

// (p, e) when n is a nontrivial prime power
std::optional<std::pair<int, int>> prime_power(int n) {
  if (n < 2) return std::nullopt;
  int p = 0;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return std::make_pair(n, 1);  // n prime
  int e = 0, m = n;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  if (m != 1) return std::nullopt;
  return std::make_pair(p, e);
}

int smallest_prime_factor(int n) {
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

void decompose_rec(const Loop& q, std::size_t budget, Decomposition& out) {
  const int n = q.order();
  if (n == 1) return;  // empty product
  if (auto pe = prime_power(n)) {
    out.factors.emplace_back(pe->first, q);
    return;
  }

  const int p = smallest_prime_factor(n);
  const PermGroup m = mlt(q, budget);
  const PermGroup sylow = sylow_subgroup(m, p, budget);
  const PermGroup rest = sylow_complement(m, p, budget);

  const Subloop a = orbit_subloop(q, sylow);
  const Subloop b = orbit_subloop(q, rest);

  // A cap B = {0}, |A| the full p-part of n, |A||B| = n
  for (int e : a.elems)
    if (e != 0 && b.contains(e))
      throw Error(Errc::verification_failed, "P(1) and R(1) intersect");
  int ppart = 1;
  {
    int t = n;
    while (t % p == 0) {
      t /= p;
      ppart *= p;
    }
  }
  if (static_cast<int>(a.size()) != ppart)
    throw Error(Errc::verification_failed, "|P(1)| is not the full p-part");
  if (a.size() * b.size() != static_cast<std::size_t>(n))
    throw Error(Errc::verification_failed, "|P(1)||R(1)| != |Q|");

  // pairing (a,b) -> a*b must be a bijection A x B -> Q
  DecompStep step;
  step.prime = p;
  step.exponent = 0;
  for (int t = ppart; t > 1; t /= p) ++step.exponent;
  step.p_part = a;
  step.r_part = b;
  step.pairing.resize(a.size() * b.size());
  std::vector<char> hit(n, 0);
  for (std::size_t ia = 0; ia < a.size(); ++ia)
    for (std::size_t ib = 0; ib < b.size(); ++ib) {
      const int prod = q.mul(a.elems[ia], b.elems[ib]);
      step.pairing[ia * b.size() + ib] = prod;
      if (hit[prod]++)
        throw Error(Errc::verification_failed, "pairing is not a bijection");
    }

  // ... and a loop isomorphism from the direct product
  for (std::size_t ia1 = 0; ia1 < a.size(); ++ia1)
    for (std::size_t ib1 = 0; ib1 < b.size(); ++ib1)
      for (std::size_t ia2 = 0; ia2 < a.size(); ++ia2)
        for (std::size_t ib2 = 0; ib2 < b.size(); ++ib2) {
          const int lhs = q.mul(step.pairing[ia1 * b.size() + ib1],
                                step.pairing[ia2 * b.size() + ib2]);
          const int pa = q.mul(a.elems[ia1], a.elems[ia2]);
          const int pb = q.mul(b.elems[ib1], b.elems[ib2]);
          const auto ja = std::lower_bound(a.elems.begin(), a.elems.end(), pa);
          const auto jb = std::lower_bound(b.elems.begin(), b.elems.end(), pb);
          const int rhs = step.pairing[(ja - a.elems.begin()) * b.size() +
                                       (jb - b.elems.begin())];
          if (lhs != rhs)
            throw Error(Errc::verification_failed, "pairing is not a homomorphism");
        }

  out.steps.push_back(std::move(step));
  out.factors.emplace_back(p, restrict_to(q, a));
  decompose_rec(restrict_to(q, b), budget, out);
}

}  // namespace

Decomposition prime_decompose(const Loop& q, std::size_t budget) {
  if (!nilpotency_class(mlt(q, budget), budget))
    throw Error(Errc::mlt_not_nilpotent, "Mlt Q is not nilpotent");
  Decomposition out;
  decompose_rec(q, budget, out);
  if (out.total_order() != static_cast<std::size_t>(q.order()))
    throw Error(Errc::verification_failed, "factor orders do not multiply back");
  return out;
}

PGroupCheck pgroup_check(const Loop& q, std::size_t budget) {
  PGroupCheck c;

  const auto pe = prime_power(q.order());
  if (pe) c.prime = pe->first;
  const bool nilpotent = upper_central_series(q).terminated;
  c.loop_side = q.order() == 1 || (nilpotent && pe.has_value());

  const PermGroup m = mlt(q, budget);
  long common = 0;
  bool single = true;
  auto note_prime = [&](long d) {
    if (common == 0)
      common = d;
    else if (common != d)
      single = false;
  };
  for (const auto& f : m.elements()) {
    long ord = perm_order(f);
    for (long d = 2; single && d * d <= ord; ++d)
      while (ord % d == 0) {
        ord /= d;
        note_prime(d);
      }
    if (ord > 1) note_prime(ord);
    if (!single) break;
  }
  c.mlt_side = single;

  if (c.loop_side != c.mlt_side)
    throw Error(Errc::verification_failed,
                "p-group equivalence violated (implementation bug)");
  if (c.loop_side && c.prime && common != 0 && common != *c.prime)
    throw Error(Errc::verification_failed, "Mlt prime differs from |Q| prime");
  return c;
}

std::string decomposition_to_json(const Decomposition& d) {
  json factors = json::array();
  for (const auto& [p, loop] : d.factors) {
    json table = json::array();
    for (int i = 0; i < loop.order(); ++i) {
      json row = json::array();
      for (int j = 0; j < loop.order(); ++j) row.push_back(loop.mul(i, j));
      table.push_back(std::move(row));
    }
    factors.push_back(json{{"prime", p},
                           {"order", loop.order()},
                           {"labels", loop.labels()},
                           {"table", std::move(table)}});
  }
  json steps = json::array();
  for (const auto& s : d.steps) {
    steps.push_back(json{{"prime", s.prime},
                         {"exponent", s.exponent},
                         {"p_part", s.p_part.elems},
                         {"r_part", s.r_part.elems},
                         {"pairing", s.pairing}});
  }
  return json{{"factors", std::move(factors)}, {"steps", std::move(steps)}}.dump();
}

}  // namespace loopnil
