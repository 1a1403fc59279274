#include <doctest.h>

#include "oracles/oracles.hpp"
#include "ttperm/group.hpp"

using namespace ttperm;

TEST_CASE("subgroup enumeration agrees with subset search") {
  for (auto g : {cyclic_group(4), cyclic_group(6), cyclic_group(8), parse_group("C2xC2"), dihedral_group(8),
                 quaternion_group(), dihedral_group(6), parse_group("C2xC4")}) {
    auto subs = all_subgroups(g);
    std::set<std::uint64_t> mine;
    for (const auto& s : subs) mine.insert(s.mask());
    CHECK_MESSAGE(mine == oracle::brute_subgroups(*g), g->name());
  }
}

TEST_CASE("subgroup counts of small groups") {
  CHECK(all_subgroups(cyclic_group(4)).size() == 3);
  CHECK(all_subgroups(parse_group("C2xC2")).size() == 5);
  auto c8 = all_subgroups(cyclic_group(8));
  REQUIRE(c8.size() == 4);
  for (std::size_t i = 0; i + 1 < c8.size(); ++i) CHECK(c8[i].is_subgroup_of(c8[i + 1]));
  auto d8 = dihedral_group(8);
  CHECK(all_subgroups(d8).size() == 10);
  CHECK(conjugacy_classes(d8).size() == 8);
  CHECK(all_subgroups(quaternion_group()).size() == 6);
}

TEST_CASE("group constructors produce valid tables") {
  auto q8 = quaternion_group();
  CHECK(q8->order() == 8);
  CHECK_FALSE(q8->is_abelian());
  int elements_of_order_4 = 0;
  for (int a = 0; a < 8; ++a) elements_of_order_4 += q8->element_order(a) == 4;
  CHECK(elements_of_order_4 == 6);
  auto d8 = dihedral_group(8);
  int involutions = 0;
  for (int a = 0; a < 8; ++a) involutions += d8->element_order(a) == 2;
  CHECK(involutions == 5);
  auto j = group_from_json_text(R"({"kind":"product","factors":[{"kind":"cyclic","n":2},{"kind":"cyclic","n":3}]})");
  CHECK(j->order() == 6);
  CHECK(structure_name(*j) == "C6");
  CHECK_THROWS_AS(group_from_json_text(R"({"kind":"table","mul":[[0,1],[0,1]]})"), PreconditionError);
  CHECK_THROWS_AS(parse_group("C2xC2xC2xC2xC2xC2xC2"), PreconditionError);
}

TEST_CASE("normalizers, Weyl groups and quotients") {
  auto d8 = dihedral_group(8);
  for (const auto& c : conjugacy_classes(d8)) {
    CHECK(c.normalizer_order * static_cast<int>(c.members.size()) == 8);
    CHECK(c.weyl_order * c.representative.order() == c.normalizer_order);
  }
  auto c4 = cyclic_group(4);
  Subgroup two = Subgroup::generated(c4, {2});
  auto q = quotient_map(two);
  CHECK(q.target->order() == 2);
  CHECK(q.kernel() == two);
  auto inc = inclusion(two);
  CHECK(inc.source->order() == 2);
  CHECK(inc.is_injective());
  CHECK(compose(q, inc).image().is_trivial());
}

TEST_CASE("sections category object counts") {
  for (int p : {2, 3}) {
    for (int n = 1; n <= 3; ++n) {
      int order = 1;
      for (int i = 0; i < n; ++i) order *= p;
      auto cat = sections_category(cyclic_group(order), p);
      CHECK(cat.objects.size() == static_cast<std::size_t>(2 * n + 1));
    }
  }
  auto cat = sections_category(cyclic_group(2), 2);
  Subgroup one = Subgroup::trivial(cat.group), all = Subgroup::whole(cat.group);
  int a = cat.find(one, one), b = cat.find(all, one), c = cat.find(all, all);
  CHECK(cat.is_morphism(a, b, 0));
  CHECK(cat.is_morphism(c, b, 0));
  CHECK_FALSE(cat.is_morphism(b, a, 0));
  // composition of morphisms is a morphism
  for (const auto& f : cat.morphisms)
    for (const auto& g : cat.morphisms)
      if (f.target == g.source) CHECK(cat.is_morphism(f.source, g.target, cat.group->mul(f.element, g.element)));
}

TEST_CASE("orbit category counts equivariant maps") {
  for (auto g : {cyclic_group(6), dihedral_group(6), parse_group("C2xC2")}) {
    auto oc = orbit_category(g);
    for (std::size_t i = 0; i < oc.objects.size(); ++i)
      for (std::size_t j = 0; j < oc.objects.size(); ++j)
        CHECK(oc.maps[i][j] == oracle::brute_orbit_maps(oc.objects[i], oc.objects[j]));
  }
  auto c6 = cyclic_group(6);
  auto oc = orbit_category(c6);
  std::size_t triv = 0, c2 = 0;
  for (std::size_t i = 0; i < oc.objects.size(); ++i) {
    if (oc.objects[i].order() == 1) triv = i;
    if (oc.objects[i].order() == 2) c2 = i;
  }
  CHECK(oc.maps[triv][c2] == 3);
  CHECK(oc.automorphism_orbits[triv][c2] == 1);
}
