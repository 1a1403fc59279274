#include <doctest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "ttperm/module.hpp"

using namespace ttperm;

namespace {

int double_cosets(const Subgroup& h, const Subgroup& k) {
  const Group& g = h.group();
  std::set<std::vector<int>> seen;
  for (int x = 0; x < g.order(); ++x) {
    std::set<int> dc;
    for (int a : h.elements())
      for (int b : k.elements()) dc.insert(g.mul(a, g.mul(x, b)));
    seen.insert(std::vector<int>(dc.begin(), dc.end()));
  }
  return static_cast<int>(seen.size());
}

}  // namespace

TEST_CASE("permutation modules and their Hom spaces") {
  Ring z = Ring::integers();
  for (auto g : {cyclic_group(4), dihedral_group(8), parse_group("C2xC2"), cyclic_group(6)}) {
    auto subs = all_subgroups(g);
    for (const auto& h : subs)
      for (const auto& k : subs) {
        auto mh = perm_module(h, z);
        auto mk = perm_module(k, z);
        CHECK(mh->rank() == h.index());
        auto hb = equivariant_hom_basis(*mh, *mk);
        CHECK(static_cast<int>(hb.size()) == double_cosets(h, k));
        for (std::size_t e = 0; e < hb.size(); ++e) CHECK(is_equivariant(hb.element(e), *mh, *mk));
      }
  }
}

TEST_CASE("signed Hom spaces vanish on inconsistent orbits") {
  auto c2 = cyclic_group(2);
  Ring z = Ring::integers();
  auto l = sign_module(Subgroup::trivial(c2), z);
  auto triv = SignedPermModule::trivial(c2, z);
  CHECK(equivariant_hom_basis(*l, *triv).size() == 0);
  CHECK(equivariant_hom_basis(*l, *l).size() == 1);
  auto f2 = Ring::prime_field(2);
  auto l2 = sign_module(Subgroup::trivial(c2), f2);
  CHECK(l2->is_permutation());
  CHECK(equivariant_hom_basis(*l2, *SignedPermModule::trivial(c2, f2)).size() == 1);
}

TEST_CASE("tensor, restriction and induction of modules") {
  Ring z = Ring::integers();
  auto c4 = cyclic_group(4);
  Subgroup two = Subgroup::generated(c4, {2});
  auto l = sign_module(two, z);
  auto r = perm_module(Subgroup::trivial(c4), z);
  auto t = tensor_module(*l, *r);
  CHECK(t->rank() == 4);
  CHECK(t->is_permutation_up_to_signs());
  CHECK_FALSE(t->is_permutation());
  auto inc = inclusion(two);
  auto res = restrict_module(*l, inc);
  CHECK(res->is_permutation());
  auto ind = induce_module(*SignedPermModule::trivial(inc.source, z), inc);
  CHECK(ind->rank() == 2);
  CHECK(ind->same_action(*perm_module(two, z)));
  auto lt = tensor_module(*l, *l);
  CHECK(lt->is_permutation());
}

TEST_CASE("sign decomposition is an equivariant signed permutation") {
  Ring z = Ring::integers();
  auto g = parse_group("C2xC2");
  for (const auto& h : all_subgroups(g)) {
    if (h.index() != 2) continue;
    auto l = sign_module(h, z);
    for (const auto& s : all_subgroups(g)) {
      auto m = direct_sum(std::vector<ModulePtr>{perm_module(s, z), tensor_module(*l, *perm_module(s, z))});
      auto dec = sign_decompose(*m, h);
      auto src = direct_sum(std::vector<ModulePtr>{dec.plus, dec.sign_twisted});
      CHECK(is_equivariant(dec.iso, *src, *m));
      CHECK(dec.iso * dec.iso.transpose() == Matrix::identity(m->rank()));
      CHECK(dec.plus->is_permutation());
      CHECK(dec.minus->is_permutation());
      CHECK(dec.plus->rank() + dec.minus->rank() == m->rank());
    }
  }
}

TEST_CASE("sign decomposition rejects foreign characters") {
  Ring z = Ring::integers();
  auto g = parse_group("C2xC2");
  auto subs = all_subgroups(g);
  std::vector<Subgroup> index2;
  for (const auto& h : subs)
    if (h.index() == 2) index2.push_back(h);
  REQUIRE(index2.size() == 3);
  auto l0 = sign_module(index2[0], z);
  CHECK_THROWS_AS(sign_decompose(*l0, index2[1]), PreconditionError);
  CHECK_NOTHROW(sign_decompose(*l0, index2[0]));
}

TEST_CASE("rebasing odd-order signed modules") {
  Ring z = Ring::integers();
  auto c3 = cyclic_group(3);
  auto m = perm_module(Subgroup::trivial(c3), z);
  std::vector<std::vector<int>> img = m->images(), sg = m->signs();
  // conjugate the regular action by the diagonal sign (1,-1,1): still a group action
  std::vector<int> flip{1, -1, 1};
  for (int x = 0; x < 3; ++x)
    for (int i = 0; i < 3; ++i) sg[x][i] = flip[i] * flip[img[x][i]];
  auto twisted = std::make_shared<SignedPermModule>(c3, z, img, sg, std::vector<std::string>{});
  CHECK_FALSE(twisted->is_permutation());
  auto rb = rebase_to_permutation(*twisted);
  CHECK(rb.module->is_permutation());
  CHECK(is_equivariant(rb.iso, *rb.module, *twisted));
}

TEST_CASE("module constructor rejects non-actions") {
  auto c2 = cyclic_group(2);
  Ring z = Ring::integers();
  CHECK_THROWS_AS(SignedPermModule(c2, z, {{0, 1}, {0, 0}}, {{1, 1}, {1, 1}}, {}), PreconditionError);
  CHECK_THROWS_AS(SignedPermModule(c2, z, {{0}, {0}}, {{1}, {-1}}, {"x", "y"}), PreconditionError);
  auto c3 = cyclic_group(3);
  CHECK_THROWS_AS(SignedPermModule(c3, z, {{0}, {0}, {0}}, {{1}, {-1}, {1}}, {}), PreconditionError);
}
