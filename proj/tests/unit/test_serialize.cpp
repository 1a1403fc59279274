#include <doctest.h>

#include "ttperm/serialize.hpp"

using namespace ttperm;

TEST_CASE("scalars and matrices round-trip exactly") {
  for (const char* s : {"0", "-7", "3/4", "-12345678901234567890/7"}) CHECK(scalar_from_json(to_json(Scalar(s))) == Scalar(s));
  Matrix m = Matrix::from_rows({{1, -2, 0}, {5, 0, 3}});
  m(0, 2) = Scalar(1, 3);
  CHECK(matrix_from_json(to_json(m)) == m);
  Matrix empty(0, 4);
  auto e = matrix_from_json(to_json(empty));
  CHECK(e.rows() == 0);
  CHECK(e.cols() == 4);
  CHECK_THROWS(scalar_from_json(Json("x/y")));
}

TEST_CASE("complexes round-trip") {
  for (const auto& ring : {Ring::integers(), Ring::prime_field(3)}) {
    auto g = parse_group("C2xC2");
    auto k = koszul_object(g, Subgroup::trivial(g), ring);
    auto c = complex_from_json(to_json(*k.complex), group_from_json(to_json(*g)));
    CHECK(same_complex(*c, *k.complex));
  }
}

TEST_CASE("certificates verify and catch tampering") {
  auto g = cyclic_group(4);
  auto k = koszul_object(g, Subgroup::generated(g, {2}), Ring::integers());
  Json cert = koszul_certificate(k);
  CHECK(verify_certificate(cert).ok());
  Json bad = cert;
  bad["restriction_contraction"] = nullptr;
  CHECK_FALSE(verify_certificate(bad).ok());
  bad = cert;
  bad["subgroup"] = Json::array({0, 1});
  CHECK_FALSE(verify_certificate(bad).ok());

  auto n = Subgroup::generated(g, {2});
  auto u = u_complex(n, Ring::integers());
  auto r = find_homotopy_equivalence(tensor(*u, *dual(*u)), unit_complex(g, Ring::integers()));
  REQUIRE(r.equivalence);
  Json eq = equivalence_certificate(*r.equivalence, "u u* ~ 1");
  CHECK(verify_certificate(eq).ok());
  eq["h_gf"]["components"] = Json::array();
  CHECK_FALSE(verify_certificate(eq).ok());

  auto x = orbit_colimit(cyclic_group(12));
  Json sp = spectrum_certificate(cyclic_group(12), x);
  CHECK(verify_certificate(sp).ok());
  CHECK(isomorphic(poset_from_json(sp), x));
  sp["points"][0]["label"] = "(5)";
  CHECK_FALSE(verify_certificate(sp).ok());

  TwistedCohomology tc(cyclic_group(2), Ring::integers());
  Json tw = twisted_certificate(tc, twisted_table(tc, 2));
  CHECK(verify_certificate(tw).ok());
  tw["entries"]["(-2,2)"]["rank"] = 0;
  CHECK_FALSE(verify_certificate(tw).ok());
  CHECK(verify_certificate(Json{{"kind", "nothing"}}).failures.size() == 1);
}
