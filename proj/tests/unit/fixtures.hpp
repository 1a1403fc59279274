#pragma once

#include "ttperm/complex.hpp"

namespace fixtures {

using namespace ttperm;

// R(G/N) -> R for index 2, R(G/N) -(s-1)-> R(G/N) -> R otherwise; s a generator of G/N.
inline ComplexPtr hand_u(const Subgroup& n, const Ring& ring) {
  auto g = n.group_ptr();
  auto m = perm_module(n, ring);
  auto one = SignedPermModule::trivial(g, ring);
  int k = m->rank();
  Matrix eps(1, k);
  for (int i = 0; i < k; ++i) eps(0, i) = 1;
  if (k == 2) return make_complex(g, ring, 0, {one, m}, {eps});
  int s = -1;
  for (int x = 0; x < g->order() && s < 0; ++x)
    if (!n.contains(x)) s = x;
  Matrix sig = m->action_matrix(s) - Matrix::identity(k);
  return make_complex(g, ring, 0, {one, m, m}, {eps, sig});
}

// Z -N-> ZC2 -(s-1)-> ZC2 -eps-> Z : exact, not contractible
inline ComplexPtr periodic_c2(const Ring& ring) {
  auto g = cyclic_group(2);
  auto free = perm_module(Subgroup::trivial(g), ring);
  auto one = SignedPermModule::trivial(g, ring);
  Matrix eps = Matrix::from_rows({{1, 1}});
  Matrix sig = Matrix::from_rows({{-1, 1}, {1, -1}});
  Matrix norm = Matrix::from_rows({{1}, {1}});
  return make_complex(g, ring, 0, {one, free, free, one}, {eps, sig, norm});
}

}  // namespace fixtures
