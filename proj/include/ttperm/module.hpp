#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ttperm/group.hpp"
#include "ttperm/matrix.hpp"

namespace ttperm {

// G permutes the basis up to sign: g * e_i = sign(g,i) * e_{image(g,i)}.
class SignedPermModule {
 public:
  struct Orbit {
    int representative;
    std::vector<int> members;
    std::vector<int> transversal;      // transversal[k] * e_rep = transversal_sign[k] * e_members[k]
    std::vector<int> transversal_sign;
    Subgroup stabilizer;
    std::uint64_t character_kernel;    // stabilizer elements acting by +1
    bool character_trivial() const { return character_kernel == stabilizer.mask(); }
  };

  SignedPermModule(GroupPtr group, Ring ring, std::vector<std::vector<int>> image,
                   std::vector<std::vector<int>> sign, std::vector<std::string> labels);

  static std::shared_ptr<const SignedPermModule> zero(GroupPtr group, Ring ring);
  static std::shared_ptr<const SignedPermModule> trivial(GroupPtr group, Ring ring);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const Ring& ring() const { return ring_; }
  int rank() const { return rank_; }
  int image(int g, int i) const { return image_[g][i]; }
  int sign(int g, int i) const { return sign_[g][i]; }
  const std::vector<std::vector<int>>& images() const { return image_; }
  const std::vector<std::vector<int>>& signs() const { return sign_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  int orbit_of(int i) const { return orbit_index_[i]; }
  // Every sign is +1.
  bool is_permutation() const;
  // Every orbit has trivial character, so a signed rebasing makes it a permutation module.
  bool is_permutation_up_to_signs() const;

  Matrix action_matrix(int g) const;
  Vector act(int g, const Vector& v) const;
  // Sum over an orbit with trivial character of the transported representative.
  Vector orbit_sum(int orbit) const;

  bool same_action(const SignedPermModule& o) const;

 private:
  GroupPtr group_;
  Ring ring_;
  int rank_;
  std::vector<std::vector<int>> image_;
  std::vector<std::vector<int>> sign_;
  std::vector<std::string> labels_;
  std::vector<Orbit> orbits_;
  std::vector<int> orbit_index_;
};

using ModulePtr = std::shared_ptr<const SignedPermModule>;

// R(G/H), basis the left cosets ordered by least element.
ModulePtr perm_module(const Subgroup& h, const Ring& ring);
// L: the sign representation inflated along G -> G/H for H of index 2.
ModulePtr sign_module(const Subgroup& h, const Ring& ring);
// R(G/H) twisted by the sign character of H through its index-2 subgroup K.
ModulePtr signed_perm_module(const Subgroup& h, const Subgroup& k, const Ring& ring);
ModulePtr tensor_module(const SignedPermModule& m, const SignedPermModule& n);
ModulePtr direct_sum(const std::vector<ModulePtr>& parts);
ModulePtr dual_module(const SignedPermModule& m);
ModulePtr base_change_module(const SignedPermModule& m, const Ring& ring);
// Pull back the action along f : H -> G.
ModulePtr restrict_module(const SignedPermModule& m, const GroupHom& f);
// Ind along an injective f : H -> G; basis ordered by (coset of f(H), basis index).
ModulePtr induce_module(const SignedPermModule& m, const GroupHom& f);

// Equivariant maps m -> n as matrices (n.rank x m.rank).
bool is_equivariant(const Matrix& f, const SignedPermModule& source, const SignedPermModule& target);
// Basis of Hom_G(m, n): one signed orbit sum per sign-consistent orbit of G on positions.
struct HomBasis {
  std::vector<std::vector<std::pair<int, int>>> positions;  // (row, col) per basis element
  std::vector<std::vector<int>> signs;
  int rows = 0, cols = 0;
  std::size_t size() const { return positions.size(); }
  Matrix element(std::size_t k) const;
  Matrix combination(const Vector& c) const;
  // Coefficients of an equivariant matrix (read off at orbit representatives).
  Vector coordinates(const Matrix& f) const;
};
HomBasis equivariant_hom_basis(const SignedPermModule& source, const SignedPermModule& target);

// M ~= M_plus (+) L (x) M_minus with M_plus, M_minus permutation modules and L the
// sign module of the index-2 subgroup H. iso maps M_plus (+) L(x)M_minus onto M and
// is a signed permutation matrix, so its inverse is its transpose.
struct SignDecomposition {
  ModulePtr plus;
  ModulePtr minus;
  ModulePtr sign_twisted;  // L (x) minus
  Matrix iso;
  std::vector<int> plus_orbits, minus_orbits;
};
SignDecomposition sign_decompose(const SignedPermModule& m, const Subgroup& h);

// Permutation module isomorphic to m when every orbit character is trivial.
struct Rebase {
  ModulePtr module;
  Matrix iso;  // module -> m, signed permutation
};
Rebase rebase_to_permutation(const SignedPermModule& m);

}  // namespace ttperm
