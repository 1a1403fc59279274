#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ttperm/koszul.hpp"
#include "ttperm/spectrum.hpp"
#include "ttperm/twisted.hpp"

namespace ttperm {

using Json = nlohmann::ordered_json;

// Exact scalars travel as strings "a" or "a/b".
Json to_json(const Scalar& x);
Scalar scalar_from_json(const Json& j);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json to_json(const Group& g);
GroupPtr group_from_json(const Json& j);
Json to_json(const Subgroup& h);
Subgroup subgroup_from_json(const GroupPtr& g, const Json& j);
Json to_json(const SignedPermModule& m);
ModulePtr module_from_json(const Json& j, GroupPtr g, const Ring& ring);
Json to_json(const Complex& c);
ComplexPtr complex_from_json(const Json& j, GroupPtr g);
Json to_json(const GradedMap& h);
GradedMap graded_map_from_json(const Json& j);
Json to_json(const ChainMap& f);
ChainMap chain_map_from_json(const Json& j, ComplexPtr source, ComplexPtr target);
Json to_json(const Presentation& p);
Json to_json(const SymbolicPoset& x);
SymbolicPoset poset_from_json(const Json& j);

// Rows are shifts, columns twists; each cell is the hom group.
std::vector<std::string> twisted_grid(TwistedCohomology& tc, const GradedTable& t);

// Self-contained certificates: everything needed to re-check the claim without the solvers.
Json koszul_certificate(const KoszulObject& k);
Json equivalence_certificate(const Equivalence& e, const std::string& claim);
Json twisted_certificate(TwistedCohomology& tc, const GradedTable& t);
Json spectrum_certificate(const GroupPtr& g, const SymbolicPoset& x);

struct CertificateCheck {
  std::string kind;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
CertificateCheck verify_certificate(const Json& j);

}  // namespace ttperm
