#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttperm/matrix.hpp"

namespace ttperm {

// A = U * D * V with U, V invertible over the ring and D diagonal.
// Over Z the nonzero diagonal entries are positive and each divides the next;
// over a field they are all 1.
struct SmithForm {
  std::size_t rank = 0;
  std::vector<Scalar> diagonal;
  Matrix U, Uinv, V, Vinv;
  Matrix D() const;
};

SmithForm smith_form(const Matrix& a, const Ring& ring, bool transforms = true);
std::size_t rank(const Matrix& a, const Ring& ring);

// Some X with A X = B, or nothing when the system has no solution over the ring.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const Ring& ring);
std::optional<Vector> solve(const Matrix& a, const Vector& b, const Ring& ring);

// Columns form a basis of ker A (a direct summand over Z).
Matrix kernel(const Matrix& a, const Ring& ring);

// Finitely generated module over the ring: R^free_rank plus R/(t) for each t.
struct Presentation {
  std::size_t free_rank = 0;
  std::vector<Scalar> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  std::string str(const Ring& ring) const;
  bool operator==(const Presentation& o) const { return free_rank == o.free_rank && torsion == o.torsion; }
  bool operator!=(const Presentation& o) const { return !(*this == o); }
};

// ker(d_out) / im(d_in) at the middle term of  C_{n+1} --d_in--> C_n --d_out--> C_{n-1}.
struct HomologyData {
  Presentation presentation;
  std::vector<Vector> generators;  // torsion generators first, then free ones
  std::vector<Scalar> orders;      // order of each generator, 0 for free
  Matrix coordinate_map;           // cycle -> coordinates in the generators

  // Coordinates of a cycle, reduced modulo the generator orders.
  Vector coordinates(const Vector& cycle, const Ring& ring) const;
  bool is_boundary(const Vector& cycle, const Ring& ring) const;
};

HomologyData homology(const Matrix& d_out, const Matrix& d_in, std::size_t dim, const Ring& ring);

// Rows in Hermite normal form spanning the same Z-lattice (or row space over a field).
Matrix hermite_rows(const Matrix& a, const Ring& ring);

}  // namespace ttperm
