#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ttperm/ring.hpp"

namespace ttperm {

constexpr int kMaxGroupOrder = 64;

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// Finite group given by its multiplication table on {0, ..., n-1}.
class Group {
 public:
  Group(std::vector<std::vector<int>> table, std::string name);

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  // x^g = g^-1 x g
  int conj(int x, int g) const { return mul(inverse_[g], mul(x, g)); }
  int element_order(int a) const;
  bool is_abelian() const;
  const std::string& name() const { return name_; }
  const std::vector<int>& generators() const { return generators_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  bool same_table(const Group& o) const { return table_ == o.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<int> generators_;
  int identity_ = 0;
  std::string name_;
};

GroupPtr cyclic_group(int n);
GroupPtr direct_product(const std::vector<GroupPtr>& factors);
GroupPtr dihedral_group(int order);
GroupPtr quaternion_group();
// {"kind":"cyclic","n":4} | {"kind":"product","factors":[...]} | {"kind":"dihedral","order":8}
// | {"kind":"quaternion"} | {"kind":"table","mul":[[...]],"name":"..."}
GroupPtr group_from_json_text(std::string_view text);
// "C4", "C2xC2", "C3xC3", "D8", "Q8", "1", or a path to a JSON descriptor
GroupPtr parse_group(std::string_view text);

class Subgroup {
 public:
  Subgroup(GroupPtr g, std::uint64_t mask);
  static Subgroup generated(GroupPtr g, const std::vector<int>& gens);
  static Subgroup trivial(GroupPtr g);
  static Subgroup whole(GroupPtr g);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::uint64_t mask() const { return mask_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int index() const { return group_->order() / order(); }
  const std::vector<int>& elements() const { return elements_; }
  bool contains(int g) const { return (mask_ >> g) & 1u; }
  bool is_trivial() const { return order() == 1; }
  bool is_whole() const { return order() == group_->order(); }

  bool is_subgroup_of(const Subgroup& o) const { return (mask_ & ~o.mask_) == 0; }
  bool is_normal() const;
  bool is_normal_in(const Subgroup& o) const;
  Subgroup conjugate(int g) const;
  Subgroup normalizer() const;
  Subgroup intersect(const Subgroup& o) const;
  Subgroup join(const Subgroup& o) const;
  // Left cosets gH, each sorted, ordered by their least element.
  std::vector<std::vector<int>> left_cosets() const;
  int coset_of(int g) const;
  std::string describe() const;

  bool operator==(const Subgroup& o) const { return mask_ == o.mask_; }
  bool operator!=(const Subgroup& o) const { return mask_ != o.mask_; }
  bool operator<(const Subgroup& o) const;

 private:
  GroupPtr group_;
  std::uint64_t mask_;
  std::vector<int> elements_;
};

std::uint64_t closure_mask(const Group& g, std::uint64_t gens);
bool subconjugate(const Subgroup& k, const Subgroup& h);

struct GroupHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> map;

  int operator()(int g) const { return map[g]; }
  bool is_injective() const;
  Subgroup image() const;
  Subgroup kernel() const;
};

GroupHom make_hom(GroupPtr source, GroupPtr target, std::vector<int> map);
GroupHom identity_hom(GroupPtr g);
// Subgroup as a group in its own right, with the inclusion into the parent.
GroupHom inclusion(const Subgroup& h);
// Parent group onto the quotient by a normal subgroup.
GroupHom quotient_map(const Subgroup& n);
// f after g
GroupHom compose(const GroupHom& f, const GroupHom& g);
Subgroup image_of(const GroupHom& f, const Subgroup& h);
Subgroup preimage_of(const GroupHom& f, const Subgroup& h);

std::vector<Subgroup> all_subgroups(const GroupPtr& g);
// "1", "G", a structure name such as "C2" (must be unique) or an element list "{0,2}".
Subgroup parse_subgroup(const GroupPtr& g, std::string_view text);

struct SubgroupClass {
  Subgroup representative;
  std::vector<Subgroup> members;
  int normalizer_order;
  int weyl_order;
};
std::vector<SubgroupClass> conjugacy_classes(const GroupPtr& g);

std::vector<int> prime_divisors(int n);
// Prime p when the group is a nontrivial p-group, else 0.
int p_group_prime(const Group& g);
bool is_elementary_abelian(const Group& g);
// H/K elementary abelian p-group (the trivial quotient counts).
bool is_elementary_abelian_section(const Subgroup& h, const Subgroup& k, int p);

std::string structure_name(const Group& g);

struct Section {
  Subgroup upper;  // H
  Subgroup lower;  // K, normal in H
};

// g : (H,K) -> (H',K') whenever K' <= K^g <= H^g <= H'
struct SectionMorphism {
  int source;
  int target;
  int element;
};

struct SectionsCategory {
  GroupPtr group;
  int prime;
  std::vector<Section> objects;
  std::vector<SectionMorphism> morphisms;
  int find(const Subgroup& h, const Subgroup& k) const;
  bool is_morphism(int source, int target, int g) const;
};
SectionsCategory sections_category(const GroupPtr& g, int p);

struct OrbitCategory {
  GroupPtr group;
  std::vector<Subgroup> objects;                  // conjugacy class representatives
  std::vector<std::vector<int>> maps;             // |Map_G(G/H_i, G/H_j)| = |(G/H_j)^{H_i}|
  std::vector<std::vector<int>> automorphism_orbits;  // orbits of W_G(H_j) on those maps
};
OrbitCategory orbit_category(const GroupPtr& g);

}  // namespace ttperm
