#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttperm/serialize.hpp"

namespace py = pybind11;
using namespace ttperm;

namespace {

std::string twisted(const std::string& group, const std::string& ring, int max_twist, std::optional<int> shift_min,
                    std::optional<int> shift_max, int jobs) {
  TwistedCohomology tc(parse_group(group), Ring::parse(ring));
  auto t = twisted_table(tc, max_twist, shift_min.value_or(-tc.two_prime() * max_twist - 1), shift_max.value_or(0),
                         jobs);
  return twisted_certificate(tc, t).dump();
}

std::string invert(const std::string& group, const std::string& subgroup, const std::string& ring) {
  auto g = parse_group(group);
  Ring r = Ring::parse(ring);
  auto u = u_complex(parse_subgroup(g, subgroup), r);
  auto res = find_homotopy_equivalence(tensor(*u, *dual(*u)), unit_complex(g, r));
  if (res.status != EquivalenceResult::Status::Equivalent) throw TheoryCheckFailure(res.reason);
  return equivalence_certificate(*res.equivalence, "u_N (x) u_N^* ~ 1").dump();
}

std::string hom(const std::string& group, const std::string& ring, std::vector<int> twist, int shift) {
  TwistedCohomology tc(parse_group(group), Ring::parse(ring));
  return to_json(tc.hom(shift, twist).presentation()).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Permutation-module homotopy categories of small finite groups";

  static py::exception<TheoryCheckFailure> theory(m, "TheoryCheckFailure", PyExc_RuntimeError);
  static py::exception<BoundExceeded> bound(m, "BoundExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TheoryCheckFailure& e) {
      py::set_error(theory, e.what());
    } catch (const BoundExceeded& e) {
      py::set_error(bound, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def("group_order", [](const std::string& g) { return parse_group(g)->order(); });
  m.def("subgroups", [](const std::string& g) {
    std::vector<std::vector<int>> out;
    for (const auto& h : all_subgroups(parse_group(g))) out.push_back(h.elements());
    return out;
  });
  m.def(
      "koszul",
      [](const std::string& g, const std::string& h, const std::string& ring) {
        auto grp = parse_group(g);
        return koszul_certificate(koszul_object(grp, parse_subgroup(grp, h), Ring::parse(ring))).dump();
      },
      py::arg("group"), py::arg("subgroup") = "1", py::arg("ring") = "Z");
  m.def("twisted", &twisted, py::arg("group"), py::arg("ring") = "Z", py::arg("max_twist") = 4,
        py::arg("shift_min") = py::none(), py::arg("shift_max") = py::none(), py::arg("jobs") = 1);
  m.def("hom", &hom, py::arg("group"), py::arg("ring"), py::arg("twist"), py::arg("shift"));
  m.def("invert", &invert, py::arg("group"), py::arg("subgroup"), py::arg("ring") = "Z");
  m.def(
      "spectrum",
      [](const std::string& g, const std::string& format) {
        auto grp = parse_group(g);
        auto x = orbit_colimit(grp);
        return format == "dot" ? export_dot(x) : spectrum_certificate(grp, x).dump();
      },
      py::arg("group"), py::arg("format") = "json");
  m.def(
      "verify",
      [](const std::string& text) {
        auto r = verify_certificate(Json::parse(text));
        return std::make_pair(r.ok(), r.failures);
      },
      py::arg("certificate"));
}
