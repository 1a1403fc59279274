#pragma once

#include <string>
#include <vector>

#include "ttperm/homotopy.hpp"

namespace ttperm {

// 0 -> R -1-> R -> 0 in degrees 1, 0.
ComplexPtr elementary_complex(GroupPtr g, Ring ring);

// Tensor-induction along an injective hom whose image is normal of index <= max_index.
// Coset representatives are the least elements of the cosets.
ComplexPtr tensor_induce(const Complex& x, const GroupHom& inc, int max_index = 4);

// H = H_0 < H_1 < ... < H_l = G, each step of index p with H_{i-1} normal in H_i;
// at every step the least admissible subgroup is taken.
std::vector<Subgroup> normal_filtration(const Subgroup& h);

// One descending-induction step of the sign modification.
struct SignStep {
  int degree = 0;
  int minus_rank = 0;
  ComplexPtr before;
  ComplexPtr after;
  // after -> L (x) before; an equivalence once restricted into the index-2 subgroup
  ChainMap comparison;
};

struct SignModification {
  ComplexPtr result;
  std::vector<SignStep> steps;
  bool noop() const { return steps.empty(); }
};

// h has index 2 and the restriction of x to h is a permutation complex.
SignModification sign_modify(ComplexPtr x, const Subgroup& h);
// L~ = (R -> R(G/H)) in degrees 1, 0 and s_H : L~ -> L.
ChainMap sign_resolution(const Subgroup& h, const Ring& ring);

struct KoszulCheck {
  bool nonnegative = false;
  bool permutation_terms = false;
  bool degree0_unit = false;
  bool degree1_induced = false;
  bool acyclic = false;
  bool restriction_contractible = false;
  std::optional<GradedMap> certificate;  // contraction of Res_H
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
KoszulCheck verify_koszul(const Complex& c, const Subgroup& h);

struct KoszulStepAudit {
  Subgroup from;
  Subgroup to;
  int induced_top = 0;           // top degree right after tensor-induction
  std::vector<std::pair<int, int>> modified;  // (degree, rank of the minus part)
  bool modification_noop = true;
};

struct KoszulObject {
  ComplexPtr complex;
  GroupPtr group;
  Subgroup subgroup;
  Ring ring;
  std::vector<Subgroup> filtration;
  std::vector<KoszulStepAudit> audit;
  bool rebased = false;  // odd p: signed terms rewritten on a permutation basis
  KoszulCheck check;
};

KoszulObject koszul_object(GroupPtr g, const Subgroup& h, const Ring& ring, int max_index = 4);

struct BaseChangeEntry {
  std::string ring;
  KoszulCheck check;
  std::optional<bool> whole_contractible;  // recorded where the group order is invertible
};
struct BaseChangeReport {
  std::vector<BaseChangeEntry> entries;
  bool ok() const;
};
BaseChangeReport base_change_koszul_check(const KoszulObject& obj);

struct MackeyReport {
  int factors = 0;
  bool ranks_match = false;
  bool lhs_contractible = false;
  bool rhs_contractible = false;
  bool ok() const { return ranks_match && lhs_contractible == rhs_contractible; }
};
// Res_K of the tensor-induction of x (over the group of h) against the product over G/HK.
MackeyReport mackey_restrict_check(const Complex& x, const Subgroup& h, const Subgroup& k);

}  // namespace ttperm
