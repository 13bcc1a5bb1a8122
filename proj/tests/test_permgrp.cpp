#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>

#include "doctest.h"
#include "loopnil/error.hpp"
#include "loopnil/perm_group.hpp"
#include "test_util.hpp"

using namespace loopnil;
using testutil::load;

namespace {

// the group table acting on itself by left translations
PermGroup regular(const Loop& g, std::size_t budget = kDefaultGroupBudget) {
  std::vector<Perm> gens;
  for (int a = 0; a < g.order(); ++a) gens.push_back(g.left_translation(a));
  return PermGroup::generate(g.order(), gens, budget);
}

}  // namespace

TEST_CASE("generate: basics") {
  CHECK(PermGroup::generate(4, {}).order() == 1);

  std::vector<int> cyc(5);
  for (int i = 0; i < 5; ++i) cyc[i] = (i + 1) % 5;
  CHECK(PermGroup::generate(5, {Perm(cyc)}).order() == 5);

  const PermGroup m = mlt(load("ex6.txt"));
  CHECK(m.order() == 24);

  // idempotent: regenerating from the full element set gives the same set
  const PermGroup again = PermGroup::generate(6, m.elements());
  CHECK(again == m);
}

TEST_CASE("generate: budget exceeded reports partial count") {
  const Loop s3 = load("s3.txt");
  try {
    mlt(s3, 10);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
    CHECK(e.partial() == 10);
  }
}

TEST_CASE("mlt and inn") {
  const Loop z6 = load("z6.txt");
  CHECK(mlt(z6).order() == 6);  // abelian: Mlt is regular
  CHECK(inn(z6).order() == 1);

  const Loop ex6 = load("ex6.txt");
  CHECK(mlt(ex6).order() == 24);
  CHECK(inn(ex6).order() == 4);

  // |Mlt(G)| = |G| * |G/Z(G)| for groups
  const Loop d4 = load("d4.txt");
  const auto z = d4.center();
  CHECK(mlt(d4).order() == d4.order() * (d4.order() / z.size()));
  CHECK(mlt(d4).order() == 32);
}

TEST_CASE("inn via stabilizer equals inn via generators on the corpus") {
  for (const auto& [name, q] : testutil::corpus_up_to(8)) {
    INFO(name);
    const PermGroup m = mlt(q);
    const PermGroup i = inn(q);  // throws inner_mismatch if the two disagree
    std::size_t fixing = 0;
    for (const auto& f : m.elements())
      if (f.fixes(0)) ++fixing;
    CHECK(i.order() == fixing);
    CHECK(i.order() * q.order() == m.order());  // orbit-stabilizer, Mlt transitive
  }
}

TEST_CASE("nilpotency class") {
  CHECK(nilpotency_class(PermGroup::trivial(3)) == 0);
  CHECK(nilpotency_class(regular(load("z8.txt"))) == 1);
  CHECK(nilpotency_class(mlt(load("ex6.txt"))) == std::nullopt);
  CHECK(nilpotency_class(regular(load("d4.txt"))) == 2);
  CHECK(nilpotency_class(regular(load("q8.txt"))) == 2);
  CHECK(nilpotency_class(regular(load("s3.txt"))) == std::nullopt);
}

TEST_CASE("nilpotency class of D4 against an all-pairs oracle") {
  const PermGroup g = regular(load("d4.txt"));
  // independent oracle: gamma_{i+1} = <[g,h] : g in G, h in gamma_i>, all
  // pairs, closed by naive pairwise products
  auto step = [&](const std::set<Perm>& h) {
    std::vector<Perm> comms;
    for (const auto& a : g.elements())
      for (const auto& b : h) comms.push_back(group_commutator(a, b));
    return testutil::naive_closure(comms, g.degree());
  };
  std::set<Perm> gamma(g.elements().begin(), g.elements().end());
  int cls = 0;
  for (int i = 1; i < 10; ++i) {
    gamma = step(gamma);
    if (gamma.size() == 1) {
      cls = i;
      break;
    }
  }
  CHECK(cls == 2);
  CHECK(nilpotency_class(g) == cls);
}

TEST_CASE("lower central series members are normal and descending") {
  const PermGroup g = mlt(load("d4.txt"));
  PermGroup gamma = g;
  for (int i = 0; i < 6; ++i) {
    PermGroup next = commutator_subgroup(g, gamma);
    CHECK(next.is_subgroup_of(gamma));
    for (const auto& c : g.generators())
      for (const auto& s : next.elements())
        CHECK(next.contains(conjugate(c, s)));
    if (next.order() == 1) break;
    gamma = next;
  }
}

TEST_CASE("upper central series") {
  const PermGroup a = regular(load("z6.txt"));
  auto sa = center_series(a);
  REQUIRE(sa.size() == 2);
  CHECK(sa[0].order() == 1);
  CHECK(sa[1] == a);

  const PermGroup d = regular(load("d4.txt"));
  auto sd = center_series(d);
  REQUIRE(sd.size() == 3);
  CHECK(sd[0].order() == 1);
  CHECK(sd[1].order() == 2);
  CHECK(sd[2] == d);
  // oracle: Z_1 = elements commuting with every element
  std::vector<Perm> z1;
  for (const auto& e : d.elements()) {
    bool central = true;
    for (const auto& f : d.elements())
      if (compose(e, f) != compose(f, e)) {
        central = false;
        break;
      }
    if (central) z1.push_back(e);
  }
  CHECK(sd[1].elements() == PermGroup::from_elements(z1).elements());

  // non-nilpotent: stabilizes below G
  const PermGroup m = mlt(load("ex6.txt"));
  auto sm = center_series(m);
  CHECK(sm.back().order() < m.order());
}

TEST_CASE("normalizer") {
  const PermGroup s3 = regular(load("s3.txt"));
  // a 2-element subgroup: generated by any involution
  Perm invo;
  for (const auto& e : s3.elements())
    if (perm_order(e) == 2) {
      invo = e;
      break;
    }
  const PermGroup h = PermGroup::generate(6, {invo});
  REQUIRE(h.order() == 2);
  const PermGroup n = normalizer(s3, h);
  CHECK(n.order() == 2);
  // oracle: brute force over all g
  std::size_t brute = 0;
  for (const auto& g : s3.elements()) {
    bool ok = true;
    for (const auto& s : h.elements())
      if (!h.contains(conjugate(g, s))) {
        ok = false;
        break;
      }
    if (ok) ++brute;
  }
  CHECK(n.order() == brute);

  // H normal in G -> normalizer is G; H = G -> G
  const PermGroup a3 = [&] {
    std::vector<Perm> el;
    for (const auto& e : s3.elements())
      if (perm_order(e) != 2) el.push_back(e);
    return PermGroup::from_elements(el);
  }();
  CHECK(normalizer(s3, a3) == s3);
  CHECK(normalizer(s3, s3) == s3);

  CHECK_THROWS_AS(normalizer(h, s3), Error);  // not a subgroup of h
}

TEST_CASE("sylow subgroups of nilpotent groups") {
  const PermGroup z6 = regular(load("z6.txt"));
  CHECK(sylow_subgroup(z6, 2).order() == 2);
  CHECK(sylow_complement(z6, 2).order() == 3);

  const PermGroup d4 = regular(load("d4.txt"));
  CHECK(sylow_subgroup(d4, 2) == d4);
  CHECK(sylow_complement(d4, 2).order() == 1);

  const PermGroup zd = regular(load("z3xd4.txt"));
  const PermGroup p = sylow_subgroup(zd, 2);
  const PermGroup r = sylow_complement(zd, 2);
  CHECK(p.order() == 8);
  CHECK(r.order() == 3);
  // oracle: element-order filter plus closure check
  for (const auto& e : p.elements()) {
    long o = perm_order(e);
    while (o % 2 == 0) o /= 2;
    CHECK(o == 1);
  }
  for (const auto& e : r.elements()) CHECK(perm_order(e) % 2 == 1);
  for (const auto& x : p.elements())
    for (const auto& y : p.elements()) CHECK(p.contains(compose(x, y)));

  CHECK_THROWS_AS(sylow_subgroup(regular(load("s3.txt")), 2), Error);
}

TEST_CASE("orbits and stabilizers") {
  for (const auto& [name, q] : testutil::corpus_up_to(8)) {
    INFO(name);
    const PermGroup m = mlt(q);
    const auto orbit = point_orbit(m, 0);
    CHECK(static_cast<int>(orbit.size()) == q.order());  // Mlt is transitive
    for (int pt = 0; pt < q.order(); ++pt) {
      const auto orb = point_orbit(m, pt);
      const PermGroup stab = point_stabilizer(m, pt);
      CHECK(orb.size() * stab.order() == m.order());
    }
  }
  const PermGroup t = PermGroup::trivial(5);
  CHECK(point_orbit(t, 3) == std::vector<int>{3});
}

TEST_CASE("composition convention pins the inner generator formulas") {
  // (f o g)(x) = f(g(x)): with the other convention the inner generators
  // would not span the stabilizer (inn() itself asserts that agreement);
  // check the convention directly on translations.
  const Loop q = load("ex6.txt");
  const Perm f = q.left_translation(2), g = q.right_translation(4);
  for (int x = 0; x < q.order(); ++x) CHECK(compose(f, g)(x) == f(g(x)));
  for (const auto& [name, loop] : testutil::corpus_up_to(6)) {
    INFO(name);
    CHECK_NOTHROW(inn(loop));
  }
}
