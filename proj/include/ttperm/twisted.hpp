#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttperm/homotopy.hpp"

namespace ttperm {

// C1: p = 2 and 2 = 0 in R;  C2: p = 2, 2 != 0;  C3: p odd, p = 0;  C4: p odd, p != 0.
enum class TwistCase { C1, C2, C3, C4 };
std::string to_string(TwistCase c);
TwistCase twist_case(int p, const Ring& ring);

// u_N = R(G/N) -> R for p = 2, R(G/N) -> R(G/N) -> R for odd p; R sits in degree 0.
// N is normal of index p; sigma is the least element outside N.
ComplexPtr u_complex(const Subgroup& n, const Ring& ring);
// R in degree 0, R(G/N) in degrees 1..2'q with differentials eps, sigma-1, norm, sigma-1, ...
ComplexPtr canonical_u_power(const Subgroup& n, int q, const Ring& ring);

// Exponents over TwistedCohomology::normals().
using Twist = std::vector<int>;

struct TwistedClass {
  std::string name;
  int shift = 0;
  Twist twist;
  Vector cycle;  // invariant cycle of canonical(twist) in degree -shift
  bool nonzero = true;
};

struct TableEntry {
  int shift = 0;
  Twist twist;
  Presentation group;
  std::vector<std::vector<int>> monomials;  // exponent vectors over the generators
  std::vector<std::string> monomial_names;
  Matrix evaluation;                        // hom-group coordinates of each monomial, as columns
  bool spanned = false;
  Matrix relations;                         // rows: integer relations among the monomials, Hermite form
};

struct GradedTable {
  int max_twist = 0;
  int shift_min = 0;
  int shift_max = 0;
  std::vector<TableEntry> entries;
  const TableEntry* find(int s, const Twist& q) const;
};

struct Relation {
  int shift = 0;
  Twist twist;
  std::vector<std::pair<Scalar, std::string>> terms;
  std::string str() const;
};

struct RingPresentation {
  std::vector<std::string> generators;
  std::vector<std::pair<int, Twist>> degrees;
  std::vector<Relation> relations;
  int max_twist = 0;  // relations are complete up to this total twist
  std::vector<std::string> notes;
};

class TwistedCohomology {
 public:
  TwistedCohomology(GroupPtr g, Ring ring);

  const GroupPtr& group() const { return group_; }
  const Ring& ring() const { return ring_; }
  int prime() const { return p_; }
  int two_prime() const { return p_ == 2 ? 1 : 2; }
  TwistCase twist_case() const { return case_; }
  const std::vector<Subgroup>& normals() const { return normals_; }
  int normal_index(const Subgroup& n) const;
  Twist unit_twist(int i) const;
  std::string twist_str(const Twist& q) const;

  // Tensor product over the normals, in order, of canonical_u_power(N, q_N).
  ComplexPtr canonical(const Twist& q);
  const HomGroup& hom(int s, const Twist& q);
  // Fills the hom cache over `jobs` threads; results are inserted in key order.
  void prefetch(const std::vector<std::pair<int, Twist>>& keys, int jobs);

  // a_N, b_N and (case C3) c_N for every normal N, in that order.
  const std::vector<TwistedClass>& generators();
  TwistedClass product(const TwistedClass& x, const TwistedClass& y);
  // Product of generators with the given exponents, multiplied from the left.
  TwistedClass monomial(const std::vector<int>& exps);
  std::string monomial_name(const std::vector<int>& exps) const;
  std::pair<int, Twist> bidegree(const std::vector<int>& exps);
  // Coordinates of a class in its hom group.
  Vector coordinates(const TwistedClass& x);
  bool is_zero(const TwistedClass& x);
  bool same_up_to_unit(const TwistedClass& x, const TwistedClass& y);

  // Y(q) (x) Y(q') -> Y(q + q')
  const Equivalence& transport(const Twist& q, const Twist& r);

 private:
  GroupPtr group_;
  Ring ring_;
  int p_ = 0;
  TwistCase case_;
  std::vector<Subgroup> normals_;
  std::vector<TwistedClass> gens_;
  std::map<Twist, ComplexPtr> complexes_;
  std::map<std::pair<int, Twist>, HomGroup> homs_;
  std::map<std::pair<Twist, Twist>, Equivalence> transports_;
  std::map<std::vector<int>, TwistedClass> monomials_;
};

// Every bidegree with total twist <= max_twist and shift in [shift_min, shift_max].
GradedTable twisted_table(TwistedCohomology& tc, int max_twist, int shift_min, int shift_max, int jobs = 1);
GradedTable twisted_table(TwistedCohomology& tc, int max_twist);
// Relations not implied by lower ones; throws TheoryCheckFailure when a nonzero entry is not spanned.
RingPresentation ring_presentation(TwistedCohomology& tc, const GradedTable& table);

// Null-homotopy of p * a_N, as an invariant vector of Y(e_N)_1.
std::optional<Vector> p_times_a_null_homotopy(TwistedCohomology& tc, int normal);
// c (x) c is null in Hom(1, u (x) u [-2]) (case C3).
bool c_squared_vanishes(TwistedCohomology& tc, int normal);

struct RestrictionReport {
  Subgroup n;
  Subgroup h;
  bool contained = false;          // H <= N
  bool u_equivalent = false;       // Res u_N against 1[2'] or u_{H cap N}
  std::map<std::string, bool> classes;  // a, b, c against 0 / identity / the same class of H
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// Classes are compared up to a unit of R, as the identification of Res u_N is solver-chosen.
RestrictionReport restriction_check(GroupPtr g, const Subgroup& n, const Subgroup& h, const Ring& ring);

struct BaseChangeClassReport {
  int prime = 0;
  bool a_ok = false;
  bool b_ok = false;
  std::map<std::string, int> power;  // least n <= bound with x^n in the image of Z, -1 if none
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// iota_p(a_Z) = a_Fp, iota_p(b_Z) = b_Fp (b_F2^2 for p = 2), and power-surjectivity on generators.
BaseChangeClassReport base_change_class_check(GroupPtr g, int normal = 0, int power_bound = 4);

struct Localization {
  Subgroup h;
  std::vector<std::string> inverted;      // one generator per normal
  std::map<int, Presentation> pieces;     // shift -> twist-0 part
  std::map<int, bool> stable;             // last two stages agree
  std::map<int, int> stage;               // power of the inverted product used
  bool all_stable() const;
};
// Twist-0 part of H^{*,*} with {a_N : H not in N} and {b_N : H in N} inverted,
// computed from the table as a colimit along powers of their product.
Localization localize_twist0(TwistedCohomology& tc, const GradedTable& table, const Subgroup& h, int shift_min,
                             int shift_max);

}  // namespace ttperm
