#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttperm/complex.hpp"
#include "ttperm/linalg.hpp"

namespace ttperm {

// Equivariant degree +1 map with components h_n : X_n -> Y_{n+1}, indexed from lo.
struct GradedMap {
  int lo = 0;
  std::vector<Matrix> components;
  Matrix at(int n, int rows, int cols) const;
};

// dh + hd = id on c.
bool verify_contraction(const Complex& c, const GradedMap& h);
// f - g = d h + h d for chain maps f, g : X -> Y.
bool verify_homotopy(const ChainMap& f, const ChainMap& g, const GradedMap& h);

struct ContractibilityResult {
  bool contractible = false;
  std::optional<GradedMap> certificate;
  std::string witness_kind;  // "homology", "modular-homology" or "splitting"
  int witness_degree = 0;
  std::string witness_ring;
  Presentation witness_group;
  std::string explanation;
};

// Largest linear system the solvers will attempt; TTPERM_MAX_RANK overrides.
std::size_t max_system_rank();

ContractibilityResult is_contractible(const Complex& c);

HomologyData homology_at(const Complex& c, int n);
std::vector<std::pair<int, Presentation>> homology_all(const Complex& c);
bool is_acyclic(const Complex& c);

// Orbit sums of the orbits with trivial character; a basis of the fixed points.
struct InvariantBasis {
  std::vector<int> orbits;
  std::vector<int> representatives;
  Matrix vectors;  // rank x count
  std::size_t size() const { return orbits.size(); }
};
InvariantBasis invariant_basis(const SignedPermModule& m);
// Differential between fixed-point lattices in orbit-sum coordinates.
Matrix invariant_differential(const Complex& c, int n, const InvariantBasis& src, const InvariantBasis& tgt);

// Hom_K(1, Y[s]) computed as H_{-s} of the fixed-point subcomplex.
struct HomGroup {
  ComplexPtr complex;
  int shift = 0;
  InvariantBasis basis;  // fixed points of Y_{-s}
  InvariantBasis above;  // fixed points of Y_{-s+1}
  Matrix boundary;       // invariant differential Y_{-s+1} -> Y_{-s}
  HomologyData data;

  const Presentation& presentation() const { return data.presentation; }
  std::vector<Vector> generator_cycles() const;
  // Coordinates of an invariant cycle of Y_{-s}; throws when the vector is not invariant.
  Vector coordinates(const Vector& cycle) const;
  bool is_null(const Vector& cycle) const;
  // w in the fixed points of Y_{-s+1} with d w = cycle, when the class is zero.
  std::optional<Vector> null_homotopy(const Vector& cycle) const;
};
HomGroup hom_group(ComplexPtr y, int s);
bool is_invariant_cycle(const Complex& y, int degree, const Vector& v);

// Graded pieces of the equivariant Hom complex Hom_G(X, Y).
struct HomComplexPiece {
  int degree = 0;
  int lo = 0;  // source degrees lo..hi
  std::vector<HomBasis> blocks;
  std::vector<std::size_t> offsets;
  std::size_t size = 0;
  std::vector<Matrix> maps(const Vector& coords) const;
};
HomComplexPiece hom_piece(const Complex& x, const Complex& y, int k);
// D(phi) = d phi - (-1)^k phi d as a matrix Hom_k -> Hom_{k-1}.
Matrix hom_differential(const Complex& x, const Complex& y, const HomComplexPiece& from, const HomComplexPiece& to);

struct Equivalence {
  ChainMap f;        // X -> Y
  ChainMap g;        // Y -> X
  GradedMap h_gf;    // gf - id = d h + h d on X
  GradedMap h_fg;    // fg - id = d h + h d on Y
};
bool verify_equivalence(const Equivalence& e);

struct EquivalenceResult {
  enum class Status { Equivalent, NotEquivalent, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<Equivalence> equivalence;
  std::string reason;
};
// Homotopy inverse and both homotopies extracted from a contraction of cone(f).
std::optional<Equivalence> equivalence_from_map(const ChainMap& f);
EquivalenceResult find_homotopy_equivalence(ComplexPtr x, ComplexPtr y);

}  // namespace ttperm
