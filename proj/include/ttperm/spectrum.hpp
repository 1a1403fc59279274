#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ttperm/group.hpp"

namespace ttperm {

// Modular points are labelled P(H, a, p): H a subgroup (cyclic groups only, so its order names it),
// a = "m" for the closed point of the cohomological spectrum of W(H), "g" for its generic point.
struct SpcPoint {
  enum class Kind { OrdinaryZero, OrdinaryPrime, OrdinaryFamily, Modular };
  Kind kind = Kind::OrdinaryZero;
  int prime = 0;
  std::vector<int> excluded;  // family: every prime outside this set
  int subgroup = 1;           // order of H
  std::string tag;
  std::string name;           // m_i, p_i, (0), (q), ...

  static SpcPoint zero();
  static SpcPoint ordinary(int q);
  static SpcPoint family(std::vector<int> excluded);
  static SpcPoint modular(int subgroup, std::string tag, int p, std::string name);

  bool is_ordinary() const { return kind != Kind::Modular; }
  std::string label() const;
  std::string kind_str() const;
};

struct SymbolicPoset {
  std::vector<SpcPoint> points;
  std::set<std::pair<int, int>> specializations;  // (x, y): y lies in the closure of x

  int add(SpcPoint p);
  void relate(int x, int y) { specializations.emplace(x, y); }
  bool specializes(int x, int y) const { return specializations.count({x, y}) > 0; }
  void close();
  // Sorts points (ordinary fiber first, then modular fibers by prime) and renumbers the relations.
  void canonicalize();
  int find_label(const std::string& label) const;
  int find_name(const std::string& name) const;
  std::vector<int> modular_primes() const;
  int modular_count(int p) const;
  // Relations that are not composites, for drawing.
  std::set<std::pair<int, int>> covers() const;
};

// m_0..m_n, p_1..p_n with p_i ~> m_{i-1}, p_i ~> m_i.  m_i = P(N_i, m), p_i = P(N_i, g) where |N_i| = p^(n-i).
SymbolicPoset seed_cyclic_field(int n, int p);
// Spc K(C_{p^n}, Z). Ordinary primes in `split` get their own point; the family excludes them and p.
SymbolicPoset assemble_over_Z(int n, int p, const std::vector<int>& split = {});
SymbolicPoset assemble_over_Z(const GroupPtr& g, const std::vector<int>& split = {});

// Endpoints of the target V receiving the modular point of a trivial section.
inline constexpr int kPsiEndpoint = 0;  // m_0: fixed points along K/K'
inline constexpr int kRhoEndpoint = 1;  // m_1: restriction to the trivial subgroup

bool is_cyclic(const Group& g);
SymbolicPoset sections_colimit(const GroupPtr& g, const std::vector<int>& split = {});
SymbolicPoset orbit_colimit(const GroupPtr& g, const std::vector<int>& split = {});

struct SpcValidation {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
SpcValidation validate(const SymbolicPoset& x);

// Bijection preserving kind, prime and (optionally) labels, and the specialization relation.
bool isomorphic(const SymbolicPoset& a, const SymbolicPoset& b, bool match_labels = true);

std::string export_dot(const SymbolicPoset& x);
std::string export_json(const SymbolicPoset& x);

}  // namespace ttperm
