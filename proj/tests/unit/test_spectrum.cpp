#include <doctest.h>

#include <json.hpp>

#include "oracles/figures.hpp"
#include "ttperm/spectrum.hpp"

using namespace ttperm;
using namespace figures;

TEST_CASE("field seeds") {
  for (int p : {2, 3, 5})
    for (int n = 0; n <= 4; ++n) {
      auto x = seed_cyclic_field(n, p);
      CHECK(static_cast<int>(x.points.size()) == 2 * n + 1);
      CHECK(static_cast<int>(x.specializations.size()) == 2 * n);
      CHECK(validate(x).ok());
      for (int i = 1; i <= n; ++i) {
        int pi = x.find_name("p_" + std::to_string(i));
        CHECK(x.specializes(pi, x.find_name("m_" + std::to_string(i - 1))));
        CHECK(x.specializes(pi, x.find_name("m_" + std::to_string(i))));
      }
      for (const auto& [a, b] : x.specializations) CHECK(x.points[b].tag == "m");
    }
  CHECK_THROWS_AS(seed_cyclic_field(-1, 2), PreconditionError);
}

TEST_CASE("assembly over the integers matches the figures") {
  for (int p : {2, 3}) {
    CHECK(isomorphic(assemble_over_Z(1, p), figure_cp(p)));
    CHECK(isomorphic(assemble_over_Z(2, p), figure_cp2(p)));
    CHECK(isomorphic(assemble_over_Z(3, p), figure_cp3(p)));
  }
  auto x = assemble_over_Z(1, 2);
  int zero = x.find_label("(0)");
  CHECK_FALSE(x.specializes(zero, x.find_name("p_1")));
  auto z = assemble_over_Z(0, 7);
  CHECK(z.points.size() == 3);
  CHECK(validate(z).ok());
}

TEST_CASE("split ordinary primes") {
  auto x = assemble_over_Z(2, 2, {3, 5});
  CHECK(validate(x).ok());
  CHECK(x.find_label("(3)") >= 0);
  CHECK(x.find_label("(5)") >= 0);
  CHECK(x.find_label("(q), q not in {2,3,5}") >= 0);
  auto y = sections_colimit(cyclic_group(4), {3, 5});
  CHECK(isomorphic(x, y));
}

TEST_CASE("sections colimit reproduces the cyclic p-group figures") {
  for (int p : {2, 3}) {
    auto c1 = sections_colimit(cyclic_group(p));
    auto c2 = sections_colimit(cyclic_group(p * p));
    auto c3 = sections_colimit(cyclic_group(p * p * p));
    CHECK(c1.modular_count(p) == 3);
    CHECK(c2.modular_count(p) == 5);
    CHECK(c3.modular_count(p) == 7);
    CHECK(isomorphic(c1, figure_cp(p)));
    CHECK(isomorphic(c2, figure_cp2(p)));
    CHECK(isomorphic(c3, figure_cp3(p)));
    // the names follow the series too
    for (const auto& pt : c2.points) {
      int i = figure_cp2(p).find_label(pt.label());
      REQUIRE(i >= 0);
      CHECK(figure_cp2(p).points[i].name == pt.name);
    }
  }
}

TEST_CASE("colimit agrees with direct assembly up to order 27") {
  for (int n = 2; n <= 27; ++n) {
    auto g = cyclic_group(n);
    int p = p_group_prime(*g);
    if (p == 0) continue;
    auto a = assemble_over_Z(g);
    auto c = sections_colimit(g);
    CHECK_MESSAGE(isomorphic(a, c), "C" << n);
    CHECK(validate(c).ok());
  }
}

TEST_CASE("orbit colimit") {
  auto c6 = orbit_colimit(cyclic_group(6));
  CHECK(c6.modular_count(2) == 3);
  CHECK(c6.modular_count(3) == 3);
  CHECK(isomorphic(c6, figure_c6()));
  CHECK(validate(c6).ok());

  auto c12 = orbit_colimit(cyclic_group(12));
  CHECK(c12.modular_count(2) == 5);
  CHECK(c12.modular_count(3) == 3);
  CHECK(c12.find_label("(q), q not in {2,3}") >= 0);
  CHECK(validate(c12).ok());

  for (int p : {2, 3, 5}) CHECK(isomorphic(orbit_colimit(cyclic_group(p)), sections_colimit(cyclic_group(p))));
  CHECK(isomorphic(orbit_colimit(cyclic_group(8)), assemble_over_Z(3, 2)));

  auto c30 = orbit_colimit(cyclic_group(30));
  for (int p : {2, 3, 5}) CHECK(c30.modular_count(p) == 3);
  int zero = c30.find_label("(0)");
  int closed = 0;
  for (std::size_t i = 0; i < c30.points.size(); ++i)
    if (c30.points[i].tag == "m") closed += c30.specializes(zero, static_cast<int>(i));
  CHECK(closed == 6);
}

TEST_CASE("only cyclic groups are assembled") {
  CHECK_THROWS_AS(sections_colimit(parse_group("C2xC2")), PreconditionError);
  CHECK_THROWS_AS(orbit_colimit(parse_group("C2xC2")), PreconditionError);
  CHECK_THROWS_AS(sections_colimit(cyclic_group(6)), PreconditionError);
}

TEST_CASE("validation reports witnesses") {
  SymbolicPoset x;
  int a = x.add(SpcPoint::modular(1, "m", 2, "a"));
  int b = x.add(SpcPoint::modular(2, "m", 2, "b"));
  x.relate(a, b);
  x.relate(b, a);
  auto v = validate(x);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violations.front().find("T0") != std::string::npos);
  CHECK(v.violations.front().find("a P(1,m,2)") != std::string::npos);

  SymbolicPoset y = assemble_over_Z(1, 3);
  y.relate(y.find_name("p_1"), y.find_label("(0)"));
  y.close();
  auto w = validate(y);
  CHECK_FALSE(w.ok());
  bool fiber = false;
  for (const auto& s : w.violations) fiber |= s.find("modular fiber not closed") != std::string::npos;
  CHECK(fiber);

  SymbolicPoset z = seed_cyclic_field(1, 2);
  z.specializations.erase(*z.specializations.begin());
  z.relate(z.find_name("m_0"), z.find_name("m_1"));
  z.relate(z.find_name("m_1"), z.find_name("m_0"));
  CHECK_FALSE(validate(z).ok());
}

TEST_CASE("isomorphism respects labels") {
  auto a = sections_colimit(cyclic_group(4));
  auto b = a;
  std::swap(b.points[b.find_name("m_0")].subgroup, b.points[b.find_name("m_2")].subgroup);
  CHECK_FALSE(isomorphic(a, b));
  CHECK(isomorphic(a, b, false));
}

TEST_CASE("exports") {
  auto c6 = orbit_colimit(cyclic_group(6));
  auto dot = export_dot(c6);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("darkgreen") != std::string::npos);
  CHECK(dot.find("blue") != std::string::npos);
  CHECK(dot.find("saddlebrown") != std::string::npos);
  // covering arrows only: 4 from (0) to the closed points, 1 to the family, 4 out of the generic points
  int arrows = 0;
  for (std::size_t i = dot.find("->"); i != std::string::npos; i = dot.find("->", i + 1)) ++arrows;
  CHECK(arrows == 9);

  auto j = nlohmann::json::parse(export_json(c6));
  CHECK(j["points"].size() == c6.points.size());
  CHECK(j["specializations"].size() == c6.specializations.size());
  for (const auto& s : j["specializations"]) {
    int a = s[0], b = s[1];
    CHECK(c6.specializes(a, b));
  }
  CHECK(export_json(c6) == export_json(orbit_colimit(cyclic_group(6))));
}
