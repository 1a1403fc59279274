#include <doctest.h>

#include "oracles/oracles.hpp"
#include "ttperm/twisted.hpp"

using namespace ttperm;

namespace {

// number of monomials a^i b^j c^k (k <= kmax) with i+j+k = q and shift j*sb + k*sc = s
int monomial_count(int q, int s, int sb, int sc, int kmax) {
  int n = 0;
  for (int j = 0; j <= q; ++j)
    for (int k = 0; k <= kmax && j + k <= q; ++k)
      if (j * sb + k * sc == s) ++n;
  return n;
}

int dimension(const Presentation& p) { return static_cast<int>(p.free_rank + p.torsion.size()); }

}  // namespace

TEST_CASE("canonical u powers") {
  Ring z = Ring::integers();
  auto c3 = cyclic_group(3);
  Subgroup one = Subgroup::trivial(c3);
  auto y = canonical_u_power(one, 2, z);
  REQUIRE(y->lo() == 0);
  REQUIRE(y->hi() == 4);
  CHECK(y->rank(0) == 1);
  for (int n = 1; n <= 4; ++n) CHECK(y->term(n)->same_action(*perm_module(one, z)));
  CHECK(y->d(1) == Matrix::from_rows({{1, 1, 1}}));
  CHECK(y->d(3) == Matrix::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
  CHECK(y->d(2) == y->d(4));
  CHECK(same_complex(*canonical_u_power(one, 0, z), *unit_complex(c3, z)));

  for (const auto& ring : {z, Ring::prime_field(2), Ring::prime_field(3)})
    for (auto g : {cyclic_group(2), cyclic_group(3), cyclic_group(4), parse_group("C2xC2")}) {
      TwistedCohomology tc(g, ring);
      for (const auto& n : tc.normals())
        for (int q = 1; q <= 3; ++q) {
          for (const auto& [deg, h] : homology_all(*canonical_u_power(n, q, ring)))
            CHECK(h == (deg == tc.two_prime() * q ? Presentation{1, {}} : Presentation{}));
        }
    }
  CHECK_THROWS_AS(u_complex(Subgroup::trivial(cyclic_group(4)), z), PreconditionError);
}

TEST_CASE("u_N is invertible and its powers are canonical") {
  Ring z = Ring::integers();
  for (auto g : {cyclic_group(2), cyclic_group(4), parse_group("C2xC2"), cyclic_group(3)}) {
    TwistedCohomology tc(g, z);
    for (const auto& n : tc.normals()) {
      auto u = u_complex(n, z);
      auto r = find_homotopy_equivalence(tensor(*u, *dual(*u)), unit_complex(g, z));
      REQUIRE(r.status == EquivalenceResult::Status::Equivalent);
      CHECK(verify_equivalence(*r.equivalence));
      CHECK(find_homotopy_equivalence(tensor(*u, *u), canonical_u_power(n, 2, z)).status ==
            EquivalenceResult::Status::Equivalent);
    }
  }
}

TEST_CASE("generator maps and their cases") {
  SUBCASE("C2 over F2") {
    TwistedCohomology tc(cyclic_group(2), Ring::prime_field(2));
    CHECK(tc.twist_case() == TwistCase::C1);
    const auto& g = tc.generators();
    REQUIRE(g.size() == 2);
    CHECK(g[1].shift == -1);
    CHECK(g[1].twist == Twist{1});
    for (const auto& x : g) CHECK(x.nonzero);
  }
  SUBCASE("C2 over Z") {
    TwistedCohomology tc(cyclic_group(2), Ring::integers());
    CHECK(tc.twist_case() == TwistCase::C2);
    const auto& g = tc.generators();
    CHECK(g[1].shift == -2);
    CHECK(g[1].twist == Twist{2});
  }
  SUBCASE("C3 over F3 has c") {
    TwistedCohomology tc(cyclic_group(3), Ring::prime_field(3));
    CHECK(tc.twist_case() == TwistCase::C3);
    const auto& g = tc.generators();
    REQUIRE(g.size() == 3);
    CHECK(g[2].name == "c");
    CHECK(g[2].shift == -1);
    for (const auto& x : g) CHECK(x.nonzero);
    CHECK(c_squared_vanishes(tc, 0));
  }
  SUBCASE("C3 over Z has no c") {
    TwistedCohomology tc(cyclic_group(3), Ring::integers());
    CHECK(tc.twist_case() == TwistCase::C4);
    CHECK(tc.generators().size() == 2);
    CHECK_THROWS_AS(c_squared_vanishes(tc, 0), PreconditionError);
  }
  SUBCASE("a vanishes over Q") {
    TwistedCohomology tc(cyclic_group(3), Ring::rationals());
    CHECK_FALSE(tc.generators()[0].nonzero);
    CHECK(tc.generators()[1].nonzero);
  }
}

TEST_CASE("field tables are polynomial") {
  SUBCASE("C2 over F2 is k[a,b]") {
    TwistedCohomology tc(cyclic_group(2), Ring::prime_field(2));
    auto t = twisted_table(tc, 4);
    for (const auto& e : t.entries) {
      CHECK(dimension(e.group) == monomial_count(e.twist[0], e.shift, -1, 0, 0));
      CHECK(e.spanned);
    }
    CHECK(ring_presentation(tc, t).relations.empty());
  }
  SUBCASE("C3 over F3 is k[a,b,c]/c^2") {
    TwistedCohomology tc(cyclic_group(3), Ring::prime_field(3));
    auto t = twisted_table(tc, 4);
    for (const auto& e : t.entries) CHECK(dimension(e.group) == monomial_count(e.twist[0], e.shift, -2, -1, 1));
    auto rp = ring_presentation(tc, t);
    REQUIRE(rp.relations.size() == 1);
    CHECK(rp.relations[0].str() == "c^2 = 0");
  }
  SUBCASE("C2xC2 over F2 has the cubic relation") {
    TwistedCohomology tc(parse_group("C2xC2"), Ring::prime_field(2));
    auto rp = ring_presentation(tc, twisted_table(tc, 3));
    REQUIRE(rp.relations.size() == 1);
    CHECK(rp.relations[0].terms.size() == 3);
    CHECK(rp.relations[0].twist == Twist{1, 1, 1});
  }
}

TEST_CASE("integral tables agree with the brute-force oracle") {
  Ring z = Ring::integers();
  for (int p : {2, 3}) {
    TwistedCohomology tc(cyclic_group(p), z);
    auto t = twisted_table(tc, 4);
    for (const auto& e : t.entries) {
      auto y = tc.canonical(e.twist);
      CHECK_MESSAGE(oracle::matches(oracle::brute_force_hom(*y, e.shift), e.group),
                    "p=" << p << " (" << e.shift << "," << e.twist[0] << ")");
      if (p == 3 && e.shift % 2 != 0) CHECK(e.group.is_zero());
    }
    auto rp = ring_presentation(tc, t);
    REQUIRE(rp.relations.size() == 1);
    CHECK(rp.relations[0].str() == std::to_string(p) + "*a = 0");
    // p*b survives: b generates a free group
    REQUIRE(rp.notes.size() == 1);
    CHECK(rp.notes[0].rfind(std::to_string(p) + "*b != 0", 0) == 0);

    auto w = p_times_a_null_homotopy(tc, 0);
    REQUIRE(w);
    const auto& a = tc.generators()[0];
    Vector pa(a.cycle);
    for (auto& x : pa) x *= p;
    CHECK(tc.canonical(a.twist)->d(1) * *w == pa);
  }
}

TEST_CASE("odd-shift classes escape the monomials for C2xC2 over Z") {
  TwistedCohomology tc(parse_group("C2xC2"), Ring::integers());
  auto t = twisted_table(tc, 2);
  const TableEntry* e = t.find(-1, Twist{0, 1, 1});
  REQUIRE(e);
  CHECK(e->group == Presentation{0, {Scalar(2)}});
  CHECK(e->monomials.empty());
  CHECK_FALSE(e->spanned);
  CHECK(oracle::matches(oracle::brute_force_hom(*tc.canonical(Twist{0, 1, 1}), -1), e->group));
  CHECK_THROWS_AS(ring_presentation(tc, t), TheoryCheckFailure);
}

TEST_CASE("coprime coefficients concentrate each twist in one shift") {
  for (const auto& ring : {Ring::rationals(), Ring::prime_field(5)})
    for (int p : {2, 3}) {
      TwistedCohomology tc(cyclic_group(p), ring);
      auto t = twisted_table(tc, 4);
      for (const auto& e : t.entries) {
        int q = e.twist[0];
        bool expect;
        // over such rings u_N is L[1] for p = 2 and 1[2] for odd p
        if (p == 2) expect = q % 2 == 0 && e.shift == -q;
        else expect = e.shift == -2 * q;
        CHECK_MESSAGE(dimension(e.group) == (expect ? 1 : 0), ring.name() << " p=" << p << " (" << e.shift << "," << q << ")");
      }
      CHECK_NOTHROW(ring_presentation(tc, t));
    }
}

TEST_CASE("restriction of u_N and its classes") {
  Ring z = Ring::integers();
  for (auto g : {cyclic_group(4), parse_group("C2xC2")}) {
    TwistedCohomology tc(g, z);
    for (const auto& n : tc.normals())
      for (const auto& h : all_subgroups(g)) {
        auto r = restriction_check(g, n, h, z);
        CHECK_MESSAGE(r.ok(), g->name() << " N=" << n.describe() << " H=" << h.describe());
        CHECK(r.u_equivalent);
        CHECK(r.contained == h.is_subgroup_of(n));
      }
  }
  auto c9 = cyclic_group(9);
  Subgroup n = Subgroup::generated(c9, {3});
  for (const auto& h : all_subgroups(c9)) {
    auto r = restriction_check(c9, n, h, Ring::prime_field(3));
    CHECK(r.ok());
    CHECK(r.classes.count("c") == 1);
  }
}

TEST_CASE("base change of the generator maps") {
  auto r2 = base_change_class_check(cyclic_group(2));
  CHECK(r2.ok());
  CHECK(r2.b_ok);
  CHECK(r2.power.at("b") == 2);
  auto r3 = base_change_class_check(cyclic_group(3));
  CHECK(r3.ok());
  CHECK(r3.a_ok);
  CHECK(r3.power.at("a") == 1);
  CHECK(r3.power.at("b") == 1);
  CHECK(r3.power.at("c") == 2);
}

TEST_CASE("twist-zero localizations of cyclic groups") {
  Ring z = Ring::integers();
  for (int p : {2, 3}) {
    auto g = cyclic_group(p);
    TwistedCohomology tc(g, z);
    int maxq = p == 2 ? 10 : 6;
    auto t = twisted_table(tc, maxq);
    Presentation zp{0, {Scalar(p)}};
    auto at_one = localize_twist0(tc, t, Subgroup::trivial(g), -8, 8);
    CHECK(at_one.inverted == std::vector<std::string>{"b"});
    CHECK(at_one.all_stable());
    auto at_g = localize_twist0(tc, t, Subgroup::whole(g), -8, 8);
    CHECK(at_g.inverted == std::vector<std::string>{"a"});
    CHECK(at_g.all_stable());
    for (int d = -8; d <= 8; ++d) {
      Presentation e1 = d == 0 ? Presentation{1, {}} : (d > 0 && d % 2 == 0 ? zp : Presentation{});
      Presentation eg = d <= 0 && d % 2 == 0 ? zp : Presentation{};
      CHECK_MESSAGE(at_one.pieces.at(d) == e1, "p=" << p << " d=" << d);
      CHECK_MESSAGE(at_g.pieces.at(d) == eg, "p=" << p << " d=" << d);
    }
    CHECK_THROWS_AS(localize_twist0(tc, twisted_table(tc, 0), Subgroup::trivial(g), 0, 0), BoundExceeded);
  }
}

TEST_CASE("threaded tables match serial ones") {
  for (const auto& ring : {Ring::integers(), Ring::prime_field(2)}) {
    TwistedCohomology a(parse_group("C2xC2"), ring), b(parse_group("C2xC2"), ring);
    auto ta = twisted_table(a, 2, -3, 0, 1);
    auto tb = twisted_table(b, 2, -3, 0, 3);
    REQUIRE(ta.entries.size() == tb.entries.size());
    for (std::size_t i = 0; i < ta.entries.size(); ++i) {
      CHECK(ta.entries[i].group == tb.entries[i].group);
      CHECK(ta.entries[i].evaluation == tb.entries[i].evaluation);
      CHECK(ta.entries[i].relations == tb.entries[i].relations);
    }
  }
}
