#include "ttperm/homotopy.hpp"

#include <cstdlib>
#include <map>

namespace ttperm {

namespace {

Matrix shaped_d(const Complex& c, int n) {
  const Matrix& d = c.d(n);
  if (d.rows() == static_cast<std::size_t>(c.rank(n - 1)) && d.cols() == static_cast<std::size_t>(c.rank(n))) return d;
  return Matrix(c.rank(n - 1), c.rank(n));
}

// Signed S-orbit sums spanning {v : s v = chi(s) v for s in S}, chi given by its kernel.
Matrix isotypic_basis(const SignedPermModule& m, const Subgroup& s, std::uint64_t ker) {
  std::vector<Vector> cols;
  std::vector<bool> seen(m.rank());
  std::vector<int> coeff(m.rank());
  for (int y = 0; y < m.rank(); ++y) {
    if (seen[y]) continue;
    std::vector<int> touched;
    bool ok = true;
    for (int t : s.elements()) {
      int chi = ((ker >> t) & 1u) ? 1 : -1;
      int z = m.image(t, y);
      int c = chi * m.sign(t, y);
      if (!seen[z]) {
        seen[z] = true;
        coeff[z] = c;
        touched.push_back(z);
      } else if (coeff[z] != c) {
        ok = false;
      }
    }
    if (m.ring().characteristic() == 2) ok = true;
    if (!ok) continue;
    Vector v(m.rank());
    for (int z : touched) v[z] = m.ring().normalize(Scalar(coeff[z]));
    cols.push_back(std::move(v));
  }
  return Matrix::from_columns(cols, m.rank());
}

struct SolveKey {
  std::uint64_t stab, ker;
  bool operator<(const SolveKey& o) const { return stab != o.stab ? stab < o.stab : ker < o.ker; }
};

}  // namespace

Matrix GradedMap::at(int n, int rows, int cols) const {
  int k = n - lo;
  if (k < 0 || k >= static_cast<int>(components.size())) return Matrix(rows, cols);
  return components[k];
}

bool verify_contraction(const Complex& c, const GradedMap& h) {
  if (c.is_zero()) return true;
  const Ring& ring = c.ring();
  for (int n = c.lo(); n <= c.hi(); ++n) {
    Matrix hn = h.at(n, c.rank(n + 1), c.rank(n));
    Matrix hp = h.at(n - 1, c.rank(n), c.rank(n - 1));
    if (hn.rows() != static_cast<std::size_t>(c.rank(n + 1)) || hn.cols() != static_cast<std::size_t>(c.rank(n))) return false;
    if (!is_equivariant(hn, *c.term(n), *c.term(n + 1))) return false;
    Matrix lhs = shaped_d(c, n + 1) * hn + hp * shaped_d(c, n);
    if (reduce(lhs - Matrix::identity(c.rank(n)), ring) != Matrix(c.rank(n), c.rank(n))) return false;
  }
  return true;
}

bool verify_homotopy(const ChainMap& f, const ChainMap& g, const GradedMap& h) {
  const Complex& x = *f.source;
  const Complex& y = *f.target;
  if (x.is_zero()) return true;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Matrix hn = h.at(n, y.rank(n + 1), x.rank(n));
    Matrix hp = h.at(n - 1, y.rank(n), x.rank(n - 1));
    if (!is_equivariant(hn, *x.term(n), *y.term(n + 1))) return false;
    Matrix lhs = f.at(n) - g.at(n);
    Matrix rhs = shaped_d(y, n + 1) * hn + hp * shaped_d(x, n);
    if (!reduce(lhs - rhs, x.ring()).is_zero()) return false;
  }
  return true;
}

std::size_t max_system_rank() {
  if (const char* s = std::getenv("TTPERM_MAX_RANK")) {
    long v = std::strtol(s, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 4000;
}

HomologyData homology_at(const Complex& c, int n) {
  return homology(shaped_d(c, n), shaped_d(c, n + 1), c.rank(n), c.ring());
}

std::vector<std::pair<int, Presentation>> homology_all(const Complex& c) {
  std::vector<std::pair<int, Presentation>> out;
  for (int n = c.lo(); n <= c.hi() && !c.is_zero(); ++n) out.emplace_back(n, homology_at(c, n).presentation);
  return out;
}

bool is_acyclic(const Complex& c) {
  for (const auto& [n, p] : homology_all(c))
    if (!p.is_zero()) return false;
  return true;
}

ContractibilityResult is_contractible(const Complex& c) {
  ContractibilityResult res;
  if (c.is_zero()) {
    res.contractible = true;
    res.certificate = GradedMap{0, {}};
    return res;
  }
  const Ring& ring = c.ring();
  std::size_t cap = max_system_rank();
  GradedMap h{c.lo(), {}};
  int failed = c.lo() - 1;
  for (int n = c.lo(); n <= c.hi() && failed < c.lo(); ++n) {
    int rn = c.rank(n), rn1 = c.rank(n + 1);
    Matrix q = Matrix::identity(rn);
    if (n > c.lo()) q = reduce(q - h.components.back() * shaped_d(c, n), ring);
    Matrix hn(rn1, rn);
    if (rn1 == 0) {
      if (!q.is_zero()) failed = n;
      h.components.push_back(std::move(hn));
      continue;
    }
    const SignedPermModule& src = *c.term(n);
    const SignedPermModule& tgt = *c.term(n + 1);
    const Matrix& dn1 = c.d(n + 1);
    std::map<SolveKey, std::vector<int>> groups;
    for (std::size_t oi = 0; oi < src.orbits().size(); ++oi) {
      const auto& o = src.orbits()[oi];
      groups[SolveKey{o.stabilizer.mask(), o.character_kernel}].push_back(static_cast<int>(oi));
    }
    for (const auto& [key, orbit_ids] : groups) {
      Subgroup s(c.group_ptr(), key.stab);
      Matrix basis = isotypic_basis(tgt, s, key.ker);
      if (basis.cols() > cap || dn1.rows() > cap)
        throw BoundExceeded("contractibility system in degree " + std::to_string(n) + " exceeds TTPERM_MAX_RANK");
      Matrix a = reduce(dn1 * basis, ring);
      Matrix rhs(rn, orbit_ids.size());
      for (std::size_t k = 0; k < orbit_ids.size(); ++k) {
        int x = src.orbits()[orbit_ids[k]].representative;
        for (int i = 0; i < rn; ++i) rhs(i, k) = q(i, x);
      }
      auto sol = basis.cols() == 0 ? (rhs.is_zero() ? std::optional<Matrix>(Matrix(0, rhs.cols())) : std::nullopt)
                                   : solve(a, rhs, ring);
      if (!sol) {
        failed = n;
        break;
      }
      Matrix vs = reduce(basis * *sol, ring);
      for (std::size_t k = 0; k < orbit_ids.size(); ++k) {
        const auto& o = src.orbits()[orbit_ids[k]];
        Vector v = vs.column(k);
        for (std::size_t t = 0; t < o.members.size(); ++t) {
          Vector w = tgt.act(o.transversal[t], v);
          if (o.transversal_sign[t] != 1)
            for (auto& e : w) e = -e;
          hn.set_column(o.members[t], reduce(w, ring));
        }
      }
    }
    h.components.push_back(std::move(hn));
  }
  if (failed < c.lo()) {
    if (!verify_contraction(c, h)) throw TheoryCheckFailure("contraction solver produced an invalid certificate");
    res.contractible = true;
    res.certificate = std::move(h);
    return res;
  }
  res.witness_degree = failed;
  for (const auto& [n, p] : homology_all(c))
    if (!p.is_zero()) {
      res.witness_kind = "homology";
      res.witness_degree = n;
      res.witness_ring = ring.name();
      res.witness_group = p;
      res.explanation = "H_" + std::to_string(n) + " = " + p.str(ring);
      return res;
    }
  if (ring.is_integers()) {
    for (int p : prime_divisors(c.group().order())) {
      Ring fp = Ring::prime_field(p);
      auto cp = base_change(c, fp);
      for (const auto& [n, pres] : homology_all(*cp))
        if (!pres.is_zero()) {
          res.witness_kind = "modular-homology";
          res.witness_degree = n;
          res.witness_ring = fp.name();
          res.witness_group = pres;
          res.explanation = "H_" + std::to_string(n) + "(- (x) " + fp.name() + ") = " + pres.str(fp);
          return res;
        }
    }
  }
  res.witness_kind = "splitting";
  res.witness_ring = ring.name();
  res.explanation = "no equivariant h_" + std::to_string(failed) + " with d h = id - h d";
  return res;
}

InvariantBasis invariant_basis(const SignedPermModule& m) {
  InvariantBasis b;
  std::vector<Vector> cols;
  for (std::size_t oi = 0; oi < m.orbits().size(); ++oi) {
    const auto& o = m.orbits()[oi];
    if (!o.character_trivial()) continue;
    b.orbits.push_back(static_cast<int>(oi));
    b.representatives.push_back(o.representative);
    cols.push_back(m.orbit_sum(static_cast<int>(oi)));
  }
  b.vectors = Matrix::from_columns(cols, m.rank());
  return b;
}

Matrix invariant_differential(const Complex& c, int n, const InvariantBasis& src, const InvariantBasis& tgt) {
  Matrix out(tgt.size(), src.size());
  if (src.size() == 0 || tgt.size() == 0) return out;
  Matrix img = shaped_d(c, n) * src.vectors;
  for (std::size_t i = 0; i < tgt.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j) out(i, j) = img(tgt.representatives[i], j);
  return reduce(out, c.ring());
}

bool is_invariant_cycle(const Complex& y, int degree, const Vector& v) {
  if (v.size() != static_cast<std::size_t>(y.rank(degree))) return false;
  const Ring& ring = y.ring();
  for (int g : y.group().generators())
    if (reduce(y.term(degree)->act(g, v), ring) != reduce(v, ring)) return false;
  return is_zero(reduce(shaped_d(y, degree) * v, ring));
}

std::vector<Vector> HomGroup::generator_cycles() const {
  std::vector<Vector> out;
  for (const auto& g : data.generators) out.push_back(reduce(basis.vectors * g, complex->ring()));
  return out;
}

Vector HomGroup::coordinates(const Vector& cycle) const {
  const Ring& ring = complex->ring();
  if (!is_invariant_cycle(*complex, -shift, cycle)) throw PreconditionError("vector is not an invariant cycle");
  Vector c(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) c[i] = cycle[basis.representatives[i]];
  return data.coordinates(c, ring);
}

bool HomGroup::is_null(const Vector& cycle) const { return is_zero(coordinates(cycle)); }

std::optional<Vector> HomGroup::null_homotopy(const Vector& cycle) const {
  const Ring& ring = complex->ring();
  if (!is_invariant_cycle(*complex, -shift, cycle)) throw PreconditionError("vector is not an invariant cycle");
  Vector c(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) c[i] = cycle[basis.representatives[i]];
  if (above.size() == 0) {
    if (is_zero(reduce(c, ring))) return Vector(complex->rank(-shift + 1));
    return std::nullopt;
  }
  auto w = solve(boundary, c, ring);
  if (!w) return std::nullopt;
  return reduce(above.vectors * *w, ring);
}

HomGroup hom_group(ComplexPtr y, int s) {
  HomGroup hg;
  hg.complex = y;
  hg.shift = s;
  int n = -s;
  hg.basis = invariant_basis(*y->term(n));
  hg.above = invariant_basis(*y->term(n + 1));
  InvariantBasis below = invariant_basis(*y->term(n - 1));
  Matrix d_out = invariant_differential(*y, n, hg.basis, below);
  hg.boundary = invariant_differential(*y, n + 1, hg.above, hg.basis);
  hg.data = homology(d_out, hg.boundary, hg.basis.size(), y->ring());
  return hg;
}

std::vector<Matrix> HomComplexPiece::maps(const Vector& coords) const {
  std::vector<Matrix> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Vector sub(coords.begin() + offsets[b], coords.begin() + offsets[b] + blocks[b].size());
    out.push_back(blocks[b].combination(sub));
  }
  return out;
}

HomComplexPiece hom_piece(const Complex& x, const Complex& y, int k) {
  HomComplexPiece p;
  p.degree = k;
  p.lo = x.lo();
  for (int n = x.lo(); n <= x.hi() && !x.is_zero(); ++n) {
    p.offsets.push_back(p.size);
    p.blocks.push_back(equivariant_hom_basis(*x.term(n), *y.term(n + k)));
    p.size += p.blocks.back().size();
  }
  return p;
}

Matrix hom_differential(const Complex& x, const Complex& y, const HomComplexPiece& from, const HomComplexPiece& to) {
  const Ring& ring = x.ring();
  int k = from.degree;
  Matrix out(to.size, from.size);
  int sign_dx = (k % 2 == 0) ? -1 : 1;  // -(-1)^k
  for (std::size_t b = 0; b < from.blocks.size(); ++b) {
    int n = from.lo + static_cast<int>(b);
    const HomBasis& hb = from.blocks[b];
    Matrix dy = shaped_d(y, n + k);
    Matrix dx = shaped_d(x, n + 1);
    int tb_same = n - to.lo;      // d_Y phi lands in Hom(X_n, Y_{n+k-1})
    int tb_next = n + 1 - to.lo;  // phi d_X lands in Hom(X_{n+1}, Y_{n+k})
    for (std::size_t e = 0; e < hb.size(); ++e) {
      const auto& pos = hb.positions[e];
      const auto& sg = hb.signs[e];
      std::size_t col = from.offsets[b] + e;
      if (tb_same >= 0 && tb_same < static_cast<int>(to.blocks.size())) {
        const HomBasis& tb = to.blocks[tb_same];
        for (std::size_t t = 0; t < tb.size(); ++t) {
          auto [r, c] = tb.positions[t][0];
          Scalar v;
          for (std::size_t q = 0; q < pos.size(); ++q)
            if (pos[q].second == c && sgn(dy(r, pos[q].first)) != 0) v += sg[q] * dy(r, pos[q].first);
          if (sgn(v) != 0) out(to.offsets[tb_same] + t, col) += v;
        }
      }
      if (tb_next >= 0 && tb_next < static_cast<int>(to.blocks.size())) {
        const HomBasis& tb = to.blocks[tb_next];
        for (std::size_t t = 0; t < tb.size(); ++t) {
          auto [r, c] = tb.positions[t][0];
          Scalar v;
          for (std::size_t q = 0; q < pos.size(); ++q)
            if (pos[q].first == r && sgn(dx(pos[q].second, c)) != 0) v += sg[q] * dx(pos[q].second, c);
          if (sgn(v) != 0) out(to.offsets[tb_next] + t, col) += sign_dx * v;
        }
      }
    }
  }
  return reduce(out, ring);
}

bool verify_equivalence(const Equivalence& e) {
  auto gf = compose(e.g, e.f);
  auto fg = compose(e.f, e.g);
  return verify_homotopy(gf, identity_map(e.f.source), e.h_gf) && verify_homotopy(fg, identity_map(e.f.target), e.h_fg);
}

std::optional<Equivalence> equivalence_from_map(const ChainMap& f) {
  auto c = cone(f);
  auto r = is_contractible(*c);
  if (!r.contractible) return std::nullopt;
  const Complex& x = *f.source;
  const Complex& y = *f.target;
  const GradedMap& s = *r.certificate;
  auto s_at = [&](int n) { return s.at(n, c->rank(n + 1), c->rank(n)); };
  std::vector<Matrix> g;
  for (int n = y.lo(); n <= y.hi() && !y.is_zero(); ++n) {
    Matrix sn = s_at(n);
    g.push_back(sn.block(0, x.rank(n - 1), x.rank(n), y.rank(n)));
  }
  GradedMap h_gf{x.lo(), {}}, h_fg{y.lo(), {}};
  for (int m = x.lo(); m <= x.hi() && !x.is_zero(); ++m) {
    Matrix sn = s_at(m + 1);
    h_gf.components.push_back(sn.block(0, 0, x.rank(m + 1), x.rank(m)));
  }
  for (int n = y.lo(); n <= y.hi() && !y.is_zero(); ++n) {
    Matrix sn = s_at(n);
    h_fg.components.push_back(-sn.block(x.rank(n), x.rank(n - 1), y.rank(n + 1), y.rank(n)));
  }
  Equivalence e{f, make_chain_map(f.target, f.source, std::move(g)), std::move(h_gf), std::move(h_fg)};
  if (!verify_equivalence(e)) throw TheoryCheckFailure("homotopy inverse extracted from the cone fails verification");
  return e;
}

EquivalenceResult find_homotopy_equivalence(ComplexPtr x, ComplexPtr y) {
  EquivalenceResult res;
  if (x->ring() != y->ring()) throw PreconditionError("equivalence between complexes over different rings");
  int lo = std::min(x->is_zero() ? 0 : x->lo(), y->is_zero() ? 0 : y->lo());
  int hi = std::max(x->is_zero() ? 0 : x->hi(), y->is_zero() ? 0 : y->hi());
  for (int n = lo; n <= hi; ++n) {
    Presentation a = homology_at(*x, n).presentation;
    Presentation b = homology_at(*y, n).presentation;
    if (a != b) {
      res.status = EquivalenceResult::Status::NotEquivalent;
      res.reason = "H_" + std::to_string(n) + " differs: " + a.str(x->ring()) + " vs " + b.str(x->ring());
      return res;
    }
  }
  HomComplexPiece p0 = hom_piece(*x, *y, 0);
  HomComplexPiece p1 = hom_piece(*x, *y, 1);
  HomComplexPiece pm = hom_piece(*x, *y, -1);
  Matrix d0 = hom_differential(*x, *y, p0, pm);
  Matrix d1 = hom_differential(*x, *y, p1, p0);
  HomologyData h0 = homology(d0, d1, p0.size, x->ring());
  std::vector<Vector> candidates;
  for (std::size_t i = 0; i < h0.generators.size(); ++i)
    if (sgn(h0.orders[i]) == 0) candidates.push_back(h0.generators[i]);
  for (std::size_t i = 0; i < h0.generators.size(); ++i)
    if (sgn(h0.orders[i]) != 0) candidates.push_back(h0.generators[i]);
  if (h0.generators.size() > 1) {
    Vector sum(p0.size);
    for (const auto& g : h0.generators)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
    candidates.push_back(reduce(sum, x->ring()));
  }
  if (h0.generators.empty()) candidates.push_back(Vector(p0.size));
  for (const auto& c : candidates) {
    ChainMap f = make_chain_map(x, y, p0.maps(c));
    if (auto e = equivalence_from_map(f)) {
      res.status = EquivalenceResult::Status::Equivalent;
      res.equivalence = std::move(e);
      res.reason = "cone of a generator of [X,Y] is contractible";
      return res;
    }
  }
  if (h0.generators.empty()) {
    res.status = EquivalenceResult::Status::NotEquivalent;
    res.reason = "[X,Y] = 0 and the complexes are not contractible";
    return res;
  }
  res.status = EquivalenceResult::Status::Inconclusive;
  res.reason = "no tried generator of [X,Y] has a contractible cone";
  return res;
}

}  // namespace ttperm
