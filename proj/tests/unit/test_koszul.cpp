#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ttperm/koszul.hpp"

using namespace ttperm;

TEST_CASE("tensor-induction along an index-1 inclusion is the identity") {
  Ring z = Ring::integers();
  auto g = cyclic_group(3);
  auto x = fixtures::hand_u(Subgroup::trivial(g), z);
  auto y = tensor_induce(*x, identity_hom(g));
  CHECK(same_complex(*x, *y));
}

TEST_CASE("tensor-induction from the trivial group to C2") {
  Ring z = Ring::integers();
  auto g = cyclic_group(2);
  auto inc = inclusion(Subgroup::trivial(g));
  auto y = tensor_induce(*elementary_complex(inc.source, z), inc);
  REQUIRE(y->lo() == 0);
  REQUIRE(y->hi() == 2);
  CHECK(y->rank(0) == 1);
  CHECK(y->term(0)->is_permutation());
  CHECK(y->term(1)->same_action(*perm_module(Subgroup::trivial(g), z)));
  REQUIRE(y->rank(2) == 1);
  CHECK(y->term(2)->sign(1, 0) == -1);
  CHECK(is_acyclic(*y));
}

TEST_CASE("tensor-induction multiplies the top degree by the index") {
  Ring z = Ring::integers();
  for (auto g : {cyclic_group(4), parse_group("C2xC2"), cyclic_group(9), cyclic_group(6)}) {
    for (const auto& h : all_subgroups(g)) {
      if (!h.is_normal() || h.index() > 4) continue;
      auto inc = inclusion(h);
      std::vector<ComplexPtr> xs{elementary_complex(inc.source, z)};
      if (inc.source->order() > 1) xs.push_back(fixtures::hand_u(Subgroup::trivial(inc.source), z));
      for (const auto& x : xs) {
        auto y = tensor_induce(*x, inc);
        CHECK(y->hi() == h.index() * x->hi());
        CHECK(y->total_rank() == static_cast<int>(std::pow(x->total_rank(), h.index())));
      }
    }
  }
  auto c8 = cyclic_group(8);
  CHECK_THROWS_AS(tensor_induce(*elementary_complex(cyclic_group(1), z), inclusion(Subgroup::trivial(c8))),
                  BoundExceeded);
}

TEST_CASE("normal filtrations have index-p normal steps") {
  for (auto g : {cyclic_group(8), dihedral_group(8), parse_group("C2xC2"), cyclic_group(9), quaternion_group()}) {
    int p = p_group_prime(*g);
    for (const auto& h : all_subgroups(g)) {
      auto chain = normal_filtration(h);
      CHECK(chain.front() == h);
      CHECK(chain.back().is_whole());
      for (std::size_t i = 1; i < chain.size(); ++i) {
        CHECK(chain[i].order() == p * chain[i - 1].order());
        CHECK(chain[i - 1].is_normal_in(chain[i]));
      }
    }
  }
}

TEST_CASE("sign modification") {
  Ring z = Ring::integers();
  auto g = cyclic_group(2);
  Subgroup one = Subgroup::trivial(g);
  auto inc = inclusion(one);

  SUBCASE("permutation input is returned unchanged") {
    auto x = fixtures::hand_u(one, z);
    auto sm = sign_modify(x, one);
    CHECK(sm.noop());
    CHECK(sm.result == x);
  }
  SUBCASE("signs are erased over F2") {
    Ring f2 = Ring::prime_field(2);
    auto y = tensor_induce(*elementary_complex(inc.source, f2), inc);
    auto sm = sign_modify(y, one);
    CHECK(sm.noop());
  }
  SUBCASE("integral case gives a permutation complex with contractible restriction") {
    auto y = tensor_induce(*elementary_complex(inc.source, z), inc);
    auto sm = sign_modify(y, one);
    CHECK_FALSE(sm.noop());
    CHECK(sm.result->all_permutation());
    CHECK(sm.result->rank(0) == 1);
    CHECK(is_acyclic(*sm.result));
    auto r = is_contractible(*restrict_complex(*sm.result, inc));
    CHECK(r.contractible);
  }
}

TEST_CASE("sign modification steps are equivalences below the index-2 subgroup") {
  Ring z = Ring::integers();
  auto g = parse_group("C2xC2");
  for (const auto& h : all_subgroups(g)) {
    if (h.index() != 2) continue;
    auto inc = inclusion(h);
    auto first = koszul_object(inc.source, Subgroup::trivial(inc.source), z);
    auto sm = sign_modify(tensor_induce(*first.complex, inc), h);
    REQUIRE_FALSE(sm.noop());
    for (const auto& st : sm.steps)
      for (const auto& sub : all_subgroups(g)) {
        if (!sub.is_subgroup_of(h)) continue;
        auto res = restrict_map(st.comparison, inclusion(sub));
        CHECK_MESSAGE(is_contractible(*cone(res)).contractible, "step " << st.degree << " over " << sub.describe());
      }
  }
}

TEST_CASE("Koszul objects") {
  Ring z = Ring::integers();
  SUBCASE("C3 over F3 from the trivial subgroup") {
    auto g = cyclic_group(3);
    auto k = koszul_object(g, Subgroup::trivial(g), Ring::prime_field(3));
    CHECK(k.complex->rank(0) == 1);
    CHECK(k.complex->term(1)->same_action(*perm_module(Subgroup::trivial(g), Ring::prime_field(3))));
    CHECK(k.check.ok());
  }
  SUBCASE("H = G is the elementary complex") {
    auto g = cyclic_group(4);
    auto k = koszul_object(g, Subgroup::whole(g), z);
    CHECK(same_complex(*k.complex, *elementary_complex(g, z)));
    CHECK(is_contractible(*k.complex).contractible);
  }
  SUBCASE("C4 over Z from C2") {
    auto g = cyclic_group(4);
    auto h = Subgroup::generated(g, {2});
    auto k = koszul_object(g, h, z);
    CHECK(k.check.ok());
    REQUIRE(k.check.certificate);
    CHECK(verify_contraction(*restrict_complex(*k.complex, inclusion(h)), *k.check.certificate));
    REQUIRE(k.audit.size() == 1);
    CHECK_FALSE(k.audit[0].modification_noop);
  }
  SUBCASE("odd primes need no modification") {
    auto g = cyclic_group(9);
    auto k = koszul_object(g, Subgroup::generated(g, {3}), z);
    CHECK(k.complex->all_permutation());
    CHECK(k.complex->hi() == 3);
  }
}

TEST_CASE("Koszul postconditions survive base change") {
  Ring z = Ring::integers();
  auto c2 = cyclic_group(2);
  auto rep = base_change_koszul_check(koszul_object(c2, Subgroup::trivial(c2), z));
  CHECK(rep.ok());
  bool saw_q = false;
  for (const auto& e : rep.entries)
    if (e.ring == "Q") {
      saw_q = true;
      REQUIRE(e.whole_contractible);
      CHECK(*e.whole_contractible);
    }
  CHECK(saw_q);
  auto c4 = cyclic_group(4);
  CHECK(base_change_koszul_check(koszul_object(c4, Subgroup::generated(c4, {2}), z)).ok());
}

TEST_CASE("Mackey formula for restricted tensor-induction") {
  Ring z = Ring::integers();
  auto g = cyclic_group(4);
  Subgroup h = Subgroup::generated(g, {2});
  auto inc = inclusion(h);
  // contractible once restricted to the trivial group
  auto x = koszul_object(inc.source, Subgroup::trivial(inc.source), z).complex;
  for (const auto& k : all_subgroups(g)) {
    auto rep = mackey_restrict_check(*x, h, k);
    CHECK(rep.ok());
    if (k.is_whole()) CHECK(rep.factors == 1);
  }
  auto rep = mackey_restrict_check(*x, h, Subgroup::trivial(g));
  CHECK(rep.factors == 2);
  CHECK(rep.lhs_contractible);
  auto triv = mackey_restrict_check(*unit_complex(inc.source, z), h, h);
  CHECK(triv.ok());
  CHECK_FALSE(triv.lhs_contractible);
}
