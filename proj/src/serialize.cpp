#include "ttperm/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

namespace ttperm {

namespace {

Json checks_json(const KoszulCheck& c) {
  return Json{{"nonnegative", c.nonnegative},         {"permutation_terms", c.permutation_terms},
              {"degree0_unit", c.degree0_unit},       {"degree1_induced", c.degree1_induced},
              {"acyclic", c.acyclic},                 {"restriction_contractible", c.restriction_contractible},
              {"failures", c.failures}};
}

std::string entry_key(TwistedCohomology& tc, int s, const Twist& q) {
  return "(" + std::to_string(s) + "," + tc.twist_str(q) + ")";
}

GroupHom embed(const Subgroup& h) { return h.is_whole() ? identity_hom(h.group_ptr()) : inclusion(h); }

}  // namespace

Json to_json(const Scalar& x) { return x.get_str(); }

Scalar scalar_from_json(const Json& j) {
  Scalar x;
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (x.set_str(j.get<std::string>(), 10) != 0) throw PreconditionError("bad scalar " + j.dump());
  x.canonicalize();
  return x;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Matrix matrix_from_json(const Json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& e = j.at("entries");
  if (e.size() != m.rows()) throw PreconditionError("matrix has the wrong number of rows");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (e[i].size() != m.cols()) throw PreconditionError("matrix row has the wrong length");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = scalar_from_json(e[i][k]);
  }
  return m;
}

Json to_json(const Group& g) { return Json{{"kind", "table"}, {"name", g.name()}, {"mul", g.table()}}; }

GroupPtr group_from_json(const Json& j) { return group_from_json_text(j.dump()); }

Json to_json(const Subgroup& h) { return h.elements(); }

Subgroup subgroup_from_json(const GroupPtr& g, const Json& j) {
  auto els = j.get<std::vector<int>>();
  for (int x : els)
    if (x < 0 || x >= g->order()) throw PreconditionError("subgroup element out of range");
  Subgroup h = Subgroup::generated(g, els);
  if (h.order() != static_cast<int>(els.size())) throw PreconditionError("listed elements do not form a subgroup");
  return h;
}

Json to_json(const SignedPermModule& m) {
  return Json{{"images", m.images()}, {"signs", m.signs()}, {"labels", m.labels()}};
}

ModulePtr module_from_json(const Json& j, GroupPtr g, const Ring& ring) {
  return std::make_shared<const SignedPermModule>(std::move(g), ring, j.at("images").get<std::vector<std::vector<int>>>(),
                                                  j.at("signs").get<std::vector<std::vector<int>>>(),
                                                  j.at("labels").get<std::vector<std::string>>());
}

Json to_json(const Complex& c) {
  Json terms = Json::array(), diffs = Json::array();
  if (!c.is_zero()) {
    for (int n = c.lo(); n <= c.hi(); ++n) terms.push_back(to_json(*c.term(n)));
    for (int n = c.lo() + 1; n <= c.hi(); ++n) diffs.push_back(to_json(c.d(n)));
  }
  return Json{{"ring", c.ring().name()}, {"lo", c.lo()}, {"terms", terms}, {"differentials", diffs}};
}

ComplexPtr complex_from_json(const Json& j, GroupPtr g) {
  Ring ring = Ring::parse(j.at("ring").get<std::string>());
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (const auto& t : j.at("terms")) terms.push_back(module_from_json(t, g, ring));
  for (const auto& d : j.at("differentials")) diffs.push_back(matrix_from_json(d));
  return make_complex(std::move(g), ring, j.at("lo").get<int>(), std::move(terms), std::move(diffs));
}

Json to_json(const GradedMap& h) {
  Json comps = Json::array();
  for (const auto& m : h.components) comps.push_back(to_json(m));
  return Json{{"lo", h.lo}, {"components", comps}};
}

GradedMap graded_map_from_json(const Json& j) {
  GradedMap h;
  h.lo = j.at("lo").get<int>();
  for (const auto& m : j.at("components")) h.components.push_back(matrix_from_json(m));
  return h;
}

Json to_json(const ChainMap& f) {
  Json comps = Json::array();
  for (const auto& m : f.components) comps.push_back(to_json(m));
  return Json{{"components", comps}};
}

ChainMap chain_map_from_json(const Json& j, ComplexPtr source, ComplexPtr target) {
  std::vector<Matrix> comps;
  for (const auto& m : j.at("components")) comps.push_back(matrix_from_json(m));
  return make_chain_map(std::move(source), std::move(target), std::move(comps));
}

Json to_json(const Presentation& p) {
  Json tor = Json::array();
  for (const auto& t : p.torsion) tor.push_back(to_json(t));
  return Json{{"rank", p.free_rank}, {"torsion", tor}};
}

Json to_json(const SymbolicPoset& x) { return Json::parse(export_json(x)); }

SymbolicPoset poset_from_json(const Json& j) {
  SymbolicPoset x;
  for (const auto& p : j.at("points")) {
    std::string kind = p.at("kind").get<std::string>();
    std::string label = p.at("label").get<std::string>();
    std::string name = p.value("name", label);
    SpcPoint pt;
    if (kind == "OrdinaryZero") {
      pt = SpcPoint::zero();
    } else if (kind == "OrdinaryPrime") {
      pt = SpcPoint::ordinary(std::stoi(label.substr(1)));
    } else if (kind == "OrdinaryFamily") {
      auto open = label.find('{'), close = label.find('}');
      std::vector<int> ex;
      std::stringstream in(label.substr(open + 1, close - open - 1));
      for (std::string tok; std::getline(in, tok, ',');) ex.push_back(std::stoi(tok));
      pt = SpcPoint::family(ex);
    } else if (kind == "Modular") {
      // P(H,a,p)
      std::stringstream in(label.substr(2, label.size() - 3));
      std::string h, a, p;
      std::getline(in, h, ',');
      std::getline(in, a, ',');
      std::getline(in, p, ',');
      pt = SpcPoint::modular(h == "1" ? 1 : std::stoi(h.substr(1)), a, std::stoi(p), name);
    } else {
      throw PreconditionError("unknown point kind " + kind);
    }
    pt.name = name;
    if (pt.label() != label) throw PreconditionError("point label " + label + " does not parse back");
    if (p.at("id").get<std::size_t>() != x.points.size()) throw PreconditionError("point ids are not consecutive");
    x.add(pt);
  }
  int n = static_cast<int>(x.points.size());
  for (const auto& r : j.at("specializations")) {
    int a = r.at(0), b = r.at(1);
    if (a < 0 || b < 0 || a >= n || b >= n) throw PreconditionError("specialization index out of range");
    x.relate(a, b);
  }
  return x;
}

std::vector<std::string> twisted_grid(TwistedCohomology& tc, const GradedTable& t) {
  std::vector<Twist> twists;
  for (const auto& e : t.entries)
    if (std::find(twists.begin(), twists.end(), e.twist) == twists.end()) twists.push_back(e.twist);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"s\\q"};
  for (const auto& q : twists) head.push_back(tc.twist_str(q));
  cells.push_back(head);
  for (int s = t.shift_max; s >= t.shift_min; --s) {
    std::vector<std::string> row{std::to_string(s)};
    for (const auto& q : twists) {
      const TableEntry* e = t.find(s, q);
      row.push_back(e ? e->group.str(tc.ring()) + (e->spanned ? "" : "*") : "");
    }
    cells.push_back(row);
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& r : cells)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::vector<std::string> out;
  for (const auto& r : cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
    out.push_back(os.str());
  }
  return out;
}

Json koszul_certificate(const KoszulObject& k) {
  Json audit = Json::array();
  for (const auto& a : k.audit) {
    Json mod = Json::array();
    for (auto [d, r] : a.modified) mod.push_back({d, r});
    audit.push_back({{"from", to_json(a.from)},
                     {"to", to_json(a.to)},
                     {"induced_top", a.induced_top},
                     {"modified", mod},
                     {"modification_noop", a.modification_noop}});
  }
  Json filtration = Json::array();
  for (const auto& h : k.filtration) filtration.push_back(to_json(h));
  return Json{{"kind", "koszul"},
              {"group", to_json(*k.group)},
              {"subgroup", to_json(k.subgroup)},
              {"ring", k.ring.name()},
              {"filtration", filtration},
              {"audit", audit},
              {"rebased", k.rebased},
              {"complex", to_json(*k.complex)},
              {"checks", checks_json(k.check)},
              {"restriction_contraction", k.check.certificate ? to_json(*k.check.certificate) : Json()}};
}

Json equivalence_certificate(const Equivalence& e, const std::string& claim) {
  return Json{{"kind", "equivalence"},
              {"claim", claim},
              {"group", to_json(e.f.source->group())},
              {"source", to_json(*e.f.source)},
              {"target", to_json(*e.f.target)},
              {"f", to_json(e.f)},
              {"g", to_json(e.g)},
              {"h_gf", to_json(e.h_gf)},
              {"h_fg", to_json(e.h_fg)}};
}

Json twisted_certificate(TwistedCohomology& tc, const GradedTable& t) {
  Json normals = Json::array();
  for (const auto& n : tc.normals()) normals.push_back(to_json(n));
  Json gens = Json::array();
  for (const auto& g : tc.generators())
    gens.push_back({{"name", g.name}, {"shift", g.shift}, {"twist", g.twist}, {"nonzero", g.nonzero}});
  Json entries = Json::object();
  for (const auto& e : t.entries) {
    entries[entry_key(tc, e.shift, e.twist)] = {{"rank", e.group.free_rank},
                                                {"torsion", to_json(e.group)["torsion"]},
                                                {"generators", e.monomial_names},
                                                {"spanned", e.spanned}};
  }
  Json j{{"kind", "twisted"},
         {"group", to_json(*tc.group())},
         {"ring", tc.ring().name()},
         {"case", to_string(tc.twist_case())},
         {"normals", normals},
         {"generators", gens},
         {"max_twist", t.max_twist},
         {"shift_min", t.shift_min},
         {"shift_max", t.shift_max},
         {"entries", entries}};
  try {
    auto rp = ring_presentation(tc, t);
    Json rel = Json::array();
    for (const auto& r : rp.relations) rel.push_back(r.str());
    j["relations"] = rel;
    j["notes"] = rp.notes;
  } catch (const TheoryCheckFailure& err) {
    j["presentation_error"] = err.what();
  }
  j["grid"] = twisted_grid(tc, t);
  return j;
}

Json spectrum_certificate(const GroupPtr& g, const SymbolicPoset& x) {
  Json j = to_json(x);
  Json out{{"kind", "spectrum"}, {"group", to_json(*g)}};
  out["points"] = j["points"];
  out["specializations"] = j["specializations"];
  return out;
}

CertificateCheck verify_certificate(const Json& j) {
  CertificateCheck r;
  auto fail = [&](const std::string& s) { r.failures.push_back(s); };
  try {
    r.kind = j.at("kind").get<std::string>();
    GroupPtr g = group_from_json(j.at("group"));
    if (r.kind == "koszul") {
      Subgroup h = subgroup_from_json(g, j.at("subgroup"));
      auto c = complex_from_json(j.at("complex"), g);
      if (c->is_zero() || c->lo() < 0) fail("complex is not concentrated in non-negative degrees");
      if (!c->all_permutation()) fail("some term is not a permutation module");
      const auto& t0 = *c->term(0);
      if (!(t0.rank() == 1 && t0.is_permutation() && t0.orbits()[0].stabilizer.is_whole()))
        fail("degree-0 term is not the trivial module");
      for (const auto& o : c->term(1)->orbits())
        if (!subconjugate(o.stabilizer, h)) fail("degree-1 term is not induced from " + h.describe());
      if (!is_acyclic(*c)) fail("complex has nonzero homology");
      const auto& cert = j.at("restriction_contraction");
      if (cert.is_null())
        fail("no contraction of the restriction");
      else if (!verify_contraction(*restrict_complex(*c, embed(h)), graded_map_from_json(cert)))
        fail("contraction of the restriction to " + h.describe() + " does not satisfy dh + hd = 1");
    } else if (r.kind == "equivalence") {
      auto x = complex_from_json(j.at("source"), g);
      auto y = complex_from_json(j.at("target"), g);
      Equivalence e{chain_map_from_json(j.at("f"), x, y), chain_map_from_json(j.at("g"), y, x),
                    graded_map_from_json(j.at("h_gf")), graded_map_from_json(j.at("h_fg"))};
      if (!verify_equivalence(e)) fail("homotopies do not witness gf ~ 1 and fg ~ 1");
    } else if (r.kind == "twisted") {
      TwistedCohomology tc(g, Ring::parse(j.at("ring").get<std::string>()));
      Json normals = Json::array();
      for (const auto& n : tc.normals()) normals.push_back(to_json(n));
      if (normals != j.at("normals")) fail("normal subgroups differ");
      for (const auto& [key, v] : j.at("entries").items()) {
        std::vector<int> nums;
        std::string digits;
        for (char ch : key + ",") {
          if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch)))
            digits += ch;
          else if (!digits.empty()) {
            nums.push_back(std::stoi(digits));
            digits.clear();
          }
        }
        if (nums.size() != tc.normals().size() + 1) {
          fail("bad entry key " + key);
          continue;
        }
        int s = nums[0];
        Twist q(nums.begin() + 1, nums.end());
        Presentation want = hom_group(tc.canonical(q), s).presentation();
        Json got = to_json(want);
        if (got["rank"] != v.at("rank") || got["torsion"] != v.at("torsion"))
          fail("entry " + key + " is " + want.str(tc.ring()));
      }
    } else if (r.kind == "spectrum") {
      Json body{{"points", j.at("points")}, {"specializations", j.at("specializations")}};
      auto x = poset_from_json(body);
      auto closed = x;
      closed.close();
      if (closed.specializations != x.specializations) fail("specializations are not transitively closed");
      for (const auto& v : validate(x).violations) fail(v);
      if (!is_cyclic(*g)) {
        fail("only cyclic groups are assembled");
      } else {
        std::vector<int> split;
        for (const auto& pt : x.points)
          if (pt.kind == SpcPoint::Kind::OrdinaryPrime) split.push_back(pt.prime);
        if (!isomorphic(x, orbit_colimit(g, split)))
          fail("poset is not isomorphic to the assembled spectrum of " + g->name());
      }
    } else {
      fail("unknown certificate kind '" + r.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return r;
}

}  // namespace ttperm
