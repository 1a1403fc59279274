#include "ttperm/koszul.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ttperm {

namespace {

// Injective hom a -> b where both map injectively into a common parent.
GroupHom relative_inclusion(const GroupHom& a, const GroupHom& b) {
  std::vector<int> back(b.target->order(), -1);
  for (int x = 0; x < b.source->order(); ++x) back[b(x)] = x;
  std::vector<int> map(a.source->order());
  for (int x = 0; x < a.source->order(); ++x) {
    map[x] = back[a(x)];
    if (map[x] < 0) throw PreconditionError("subgroup chain is not nested");
  }
  return make_hom(a.source, b.source, std::move(map));
}

// Own group of a subgroup, or the parent itself when the subgroup is everything.
GroupHom embed(const Subgroup& h) { return h.is_whole() ? identity_hom(h.group_ptr()) : inclusion(h); }

struct DegreeBasis {
  std::vector<std::vector<int>> blocks;  // degree tuples
  std::vector<int> offsets;
  std::vector<int> sizes;
  std::map<std::vector<int>, int> index;
  int rank = 0;
};

void enumerate_tuples(int slots, int lo, int hi, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == slots) {
    if (total == 0) out.push_back(cur);
    return;
  }
  int left = slots - static_cast<int>(cur.size()) - 1;
  for (int k = lo; k <= hi; ++k) {
    int rest = total - k;
    if (rest < left * lo || rest > left * hi) continue;
    cur.push_back(k);
    enumerate_tuples(slots, lo, hi, rest, cur, out);
    cur.pop_back();
  }
}

ComplexPtr transport_along_iso(const Complex& x, const GroupHom& iso_inverse) {
  return restrict_complex(x, iso_inverse);
}

ComplexPtr rebase_complex(const Complex& x) {
  std::vector<ModulePtr> terms;
  std::vector<Matrix> isos;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    auto rb = rebase_to_permutation(*x.term(n));
    terms.push_back(rb.module);
    isos.push_back(rb.iso);
  }
  std::vector<Matrix> diffs;
  for (int n = x.lo() + 1; n <= x.hi(); ++n) {
    const Matrix& lower = isos[n - 1 - x.lo()];
    diffs.push_back(lower.transpose() * x.d(n) * isos[n - x.lo()]);
  }
  return make_complex(x.group_ptr(), x.ring(), x.lo(), std::move(terms), std::move(diffs));
}

// Same complex with the degree-m term rewritten along iso : m -> x_m.
ComplexPtr rebase_term(const Complex& x, int m, ModulePtr module, const Matrix& iso) {
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  Matrix inv = iso.transpose();
  for (int n = x.lo(); n <= x.hi(); ++n) {
    terms.push_back(n == m ? module : x.term(n));
    if (n == x.lo()) continue;
    Matrix d = x.d(n);
    if (n == m) d = d * iso;
    if (n - 1 == m) d = inv * d;
    diffs.push_back(std::move(d));
  }
  return make_complex(x.group_ptr(), x.ring(), x.lo(), std::move(terms), std::move(diffs));
}

Matrix sign_diag(int plus, int minus) {
  Matrix m = Matrix::identity(plus + minus);
  for (int i = plus; i < plus + minus; ++i) m(i, i) = -1;
  return m;
}

}  // namespace

ComplexPtr elementary_complex(GroupPtr g, Ring ring) {
  auto one = SignedPermModule::trivial(g, ring);
  return make_complex(g, ring, 0, {one, one}, {Matrix::identity(1)});
}

ComplexPtr tensor_induce(const Complex& x, const GroupHom& inc, int max_index) {
  if (!inc.is_injective()) throw PreconditionError("tensor-induction needs an injective hom");
  GroupPtr g = inc.target;
  Subgroup himg = inc.image();
  if (!himg.is_normal()) throw PreconditionError("tensor-induction needs a normal subgroup");
  int n = himg.index();
  if (n > max_index)
    throw BoundExceeded("tensor-induction of index " + std::to_string(n) + " exceeds the bound " + std::to_string(max_index));
  std::vector<int> back(g->order(), -1);
  for (int a = 0; a < inc.source->order(); ++a) back[inc(a)] = a;
  if (n == 1) return transport_along_iso(x, make_hom(g, inc.source, back));
  const Ring& ring = x.ring();
  if (x.is_zero()) return zero_complex(g, ring);
  double expected = 1;
  for (int k = 0; k < n; ++k) expected *= x.total_rank();
  if (expected > static_cast<double>(max_system_rank()))
    throw BoundExceeded("tensor-induction would have total rank " + std::to_string(static_cast<long long>(expected)) +
                        ", above TTPERM_MAX_RANK");

  auto cosets = himg.left_cosets();
  std::vector<int> reps;
  for (const auto& c : cosets) reps.push_back(c.front());
  int order = g->order();
  std::vector<std::vector<int>> sigma(order, std::vector<int>(n)), hj(order, std::vector<int>(n));
  for (int a = 0; a < order; ++a)
    for (int j = 0; j < n; ++j) {
      int ag = g->mul(a, reps[j]);
      int s = himg.coset_of(ag);
      sigma[a][j] = s;
      hj[a][j] = back[g->mul(g->inv(reps[s]), ag)];
    }

  int lo = x.lo(), hi = x.hi();
  int tlo = n * lo, thi = n * hi;
  std::vector<DegreeBasis> basis(thi - tlo + 1);
  for (int k = tlo; k <= thi; ++k) {
    DegreeBasis& b = basis[k - tlo];
    std::vector<int> cur;
    std::vector<std::vector<int>> tuples;
    enumerate_tuples(n, lo, hi, k, cur, tuples);
    for (const auto& t : tuples) {
      int size = 1;
      for (int kk : t) size *= x.rank(kk);
      if (size == 0) continue;
      b.index[t] = static_cast<int>(b.blocks.size());
      b.blocks.push_back(t);
      b.offsets.push_back(b.rank);
      b.sizes.push_back(size);
      b.rank += size;
    }
  }
  auto decode = [&](const std::vector<int>& t, int idx) {
    std::vector<int> out(n);
    for (int j = n - 1; j >= 0; --j) {
      int r = x.rank(t[j]);
      out[j] = idx % r;
      idx /= r;
    }
    return out;
  };
  auto encode = [&](const DegreeBasis& b, const std::vector<int>& t, const std::vector<int>& e) {
    int blk = b.index.at(t);
    int idx = 0;
    for (int j = 0; j < n; ++j) idx = idx * x.rank(t[j]) + e[j];
    return b.offsets[blk] + idx;
  };

  std::vector<ModulePtr> terms;
  for (int k = tlo; k <= thi; ++k) {
    const DegreeBasis& b = basis[k - tlo];
    std::vector<std::vector<int>> image(order, std::vector<int>(b.rank)), sign(order, std::vector<int>(b.rank));
    for (std::size_t blk = 0; blk < b.blocks.size(); ++blk) {
      const auto& t = b.blocks[blk];
      for (int idx = 0; idx < b.sizes[blk]; ++idx) {
        std::vector<int> e = decode(t, idx);
        for (int a = 0; a < order; ++a) {
          std::vector<int> nt(n), ne(n);
          int s = 1;
          for (int j = 0; j < n; ++j) {
            const SignedPermModule& m = *x.term(t[j]);
            nt[sigma[a][j]] = t[j];
            ne[sigma[a][j]] = m.image(hj[a][j], e[j]);
            s *= m.sign(hj[a][j], e[j]);
          }
          for (int j = 0; j < n; ++j)
            for (int jj = j + 1; jj < n; ++jj)
              if (sigma[a][j] > sigma[a][jj] && (t[j] & 1) && (t[jj] & 1)) s = -s;
          int col = b.offsets[blk] + idx;
          image[a][col] = encode(b, nt, ne);
          sign[a][col] = s;
        }
      }
    }
    terms.push_back(std::make_shared<SignedPermModule>(g, ring, std::move(image), std::move(sign), std::vector<std::string>{}));
  }

  std::vector<Matrix> diffs;
  for (int k = tlo + 1; k <= thi; ++k) {
    const DegreeBasis& src = basis[k - tlo];
    const DegreeBasis& tgt = basis[k - 1 - tlo];
    Matrix d(tgt.rank, src.rank);
    for (std::size_t blk = 0; blk < src.blocks.size(); ++blk) {
      const auto& t = src.blocks[blk];
      for (int idx = 0; idx < src.sizes[blk]; ++idx) {
        std::vector<int> e = decode(t, idx);
        int col = src.offsets[blk] + idx;
        int before = 0;
        for (int j = 0; j < n; ++j) {
          int kj = t[j];
          if (kj > lo && x.rank(kj - 1) > 0) {
            std::vector<int> nt = t;
            nt[j] = kj - 1;
            const Matrix& dx = x.d(kj);
            int s = (before & 1) ? -1 : 1;
            for (int r = 0; r < x.rank(kj - 1); ++r) {
              if (dx(r, e[j]) == 0) continue;
              std::vector<int> ne = e;
              ne[j] = r;
              d(encode(tgt, nt, ne), col) += s * dx(r, e[j]);
            }
          }
          before += kj;
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  return make_complex(g, ring, tlo, std::move(terms), std::move(diffs));
}

std::vector<Subgroup> normal_filtration(const Subgroup& h) {
  GroupPtr g = h.group_ptr();
  int p = p_group_prime(*g);
  std::vector<Subgroup> chain{h};
  if (h.is_whole()) return chain;
  if (p == 0) throw PreconditionError("normal filtration needs a p-group");
  auto subs = all_subgroups(g);
  while (!chain.back().is_whole()) {
    const Subgroup& cur = chain.back();
    const Subgroup* next = nullptr;
    for (const auto& k : subs)
      if (k.order() == cur.order() * p && cur.is_subgroup_of(k) && cur.is_normal_in(k)) {
        next = &k;
        break;
      }
    if (!next) throw TheoryCheckFailure("no index-p overgroup normalizing " + cur.describe());
    chain.push_back(*next);
  }
  return chain;
}

ChainMap sign_resolution(const Subgroup& h, const Ring& ring) {
  if (h.index() != 2) throw PreconditionError("sign resolution needs an index-2 subgroup");
  GroupPtr g = h.group_ptr();
  auto one = SignedPermModule::trivial(g, ring);
  auto ltilde = make_complex(g, ring, 0, {perm_module(h, ring), one}, {Matrix::from_rows({{1}, {1}})});
  auto l = concentrated(sign_module(h, ring), 0);
  return make_chain_map_at(ltilde, l, {{0, Matrix::from_rows({{1, -1}})}});
}

SignModification sign_modify(ComplexPtr x, const Subgroup& h) {
  if (h.index() != 2) throw PreconditionError("sign modification needs an index-2 subgroup");
  GroupPtr g = h.group_ptr();
  const Ring ring = x->ring();
  SignModification out;
  if (x->is_zero()) {
    out.result = x;
    return out;
  }
  if (x->lo() < 0) throw PreconditionError("sign modification needs a non-negative complex");
  ChainMap s = sign_resolution(h, ring);
  auto lconc = s.target;
  ComplexPtr cur = x;
  for (int m = x->hi(); m >= cur->lo(); --m) {
    SignDecomposition dec = sign_decompose(*cur->term(m), h);
    int np = dec.plus->rank(), nm = dec.minus->rank();
    const Matrix& phi = dec.iso;
    if (nm == 0) {
      if (!cur->term(m)->is_permutation()) cur = rebase_term(*cur, m, dec.plus, phi);
      continue;
    }
    Matrix phit = phi.transpose();
    Matrix up = phit * cur->d(m + 1);
    int above = cur->rank(m + 1);
    Matrix alpha = up.block(0, 0, np, above), beta = up.block(np, 0, nm, above);
    Matrix down = cur->d(m) * phi;
    int below = cur->rank(m - 1);
    Matrix gamma = down.block(0, 0, below, np), delta = down.block(0, np, below, nm);

    std::vector<ModulePtr> top{dec.plus};
    std::vector<Matrix> top_d{alpha};
    for (int j = m + 1; j <= cur->hi(); ++j) {
      top.push_back(cur->term(j));
      if (j > m + 1) top_d.push_back(cur->d(j));
    }
    if (top.size() == 1) top_d.clear();
    auto xp = make_complex(g, ring, m, top, top_d);

    std::vector<ModulePtr> bottom;
    std::vector<Matrix> bottom_d;
    for (int j = cur->lo(); j < m; ++j) {
      bottom.push_back(cur->term(j));
      if (j > cur->lo()) bottom_d.push_back(cur->d(j));
    }
    int blo = std::min(cur->lo(), m);
    if (!bottom.empty()) bottom_d.push_back(delta);
    bottom.push_back(dec.sign_twisted);
    auto xpp = make_complex(g, ring, blo, bottom, bottom_d);
    auto y = shift(*xpp, 1);

    ChainMap t = xp->is_zero() ? zero_map(xp, y) : make_chain_map_at(xp, y, {{m, gamma}, {m + 1, beta}});
    ChainMap f = tensor_maps(s, t);
    auto next = shift(*cone(f), -1);

    // comparison next -> L (x) cur
    ChainMap s1 = tensor_maps(s, identity_map(xp));
    auto target = tensor(*lconc, *cur);
    std::vector<Matrix> comps;
    for (int n = next->lo(); n <= next->hi(); ++n) {
      int a_src = f.source->rank(n), a_tgt = xp->rank(n), b = xpp->rank(n);
      Matrix mid(a_tgt + b, a_src + b);
      if (a_src > 0 && a_tgt > 0) mid.set_block(0, 0, s1.at(n));
      if (b > 0) mid.set_block(a_tgt, a_src, Matrix::identity(b));
      Matrix j;
      if (n > m)
        j = Matrix::identity(a_tgt + b);
      else if (n == m)
        j = phi * sign_diag(np, nm);
      else
        j = -Matrix::identity(a_tgt + b);
      comps.push_back(j * mid);
    }
    SignStep step;
    step.degree = m;
    step.minus_rank = nm;
    step.before = cur;
    step.after = next;
    step.comparison = make_chain_map(next, target, std::move(comps));
    out.steps.push_back(std::move(step));
    cur = next;
  }
  out.result = cur;
  return out;
}

KoszulCheck verify_koszul(const Complex& c, const Subgroup& h) {
  KoszulCheck r;
  auto fail = [&](const std::string& what) { r.failures.push_back(what); };
  r.nonnegative = !c.is_zero() && c.lo() >= 0;
  if (!r.nonnegative) fail("complex is not concentrated in non-negative degrees");
  r.permutation_terms = c.all_permutation();
  if (!r.permutation_terms) fail("some term is not a permutation module");
  const auto& t0 = *c.term(0);
  r.degree0_unit = t0.rank() == 1 && t0.is_permutation() && t0.orbits()[0].stabilizer.is_whole();
  if (!r.degree0_unit) fail("degree-0 term is not the trivial module");
  r.degree1_induced = true;
  for (const auto& o : c.term(1)->orbits())
    if (!subconjugate(o.stabilizer, h)) r.degree1_induced = false;
  if (!r.degree1_induced) fail("degree-1 term is not induced from " + h.describe());
  r.acyclic = is_acyclic(c);
  if (!r.acyclic) fail("complex has nonzero homology");
  GroupHom inc = embed(h);
  auto res = restrict_complex(c, inc);
  auto cr = is_contractible(*res);
  r.restriction_contractible = cr.contractible;
  if (cr.contractible)
    r.certificate = cr.certificate;
  else
    fail("restriction to " + h.describe() + " is not contractible: " + cr.explanation);
  return r;
}

KoszulObject koszul_object(GroupPtr g, const Subgroup& h, const Ring& ring, int max_index) {
  int p = p_group_prime(*g);
  if (p == 0 && g->order() > 1) throw PreconditionError("Koszul objects need a p-group");
  KoszulObject obj{nullptr, g, h, ring, {}, {}, false, {}};
  std::vector<Subgroup> chain;
  if (p != 2 && h.is_normal() && h.index() <= max_index)
    chain = h.is_whole() ? std::vector<Subgroup>{h} : std::vector<Subgroup>{h, Subgroup::whole(g)};
  else
    chain = normal_filtration(h);
  obj.filtration = chain;

  GroupHom prev = embed(chain[0]);
  ComplexPtr x = elementary_complex(prev.source, ring);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    GroupHom next = embed(chain[i]);
    GroupHom step = relative_inclusion(prev, next);
    KoszulStepAudit audit{chain[i - 1], chain[i], 0, {}, true};
    ComplexPtr y = tensor_induce(*x, step, max_index);
    audit.induced_top = y->hi();
    if (p == 2) {
      auto sm = sign_modify(y, step.image());
      for (const auto& st : sm.steps) audit.modified.emplace_back(st.degree, st.minus_rank);
      audit.modification_noop = sm.noop();
      y = sm.result;
    } else if (!y->all_permutation()) {
      y = rebase_complex(*y);
      obj.rebased = true;
    }
    obj.audit.push_back(std::move(audit));
    x = y;
    prev = next;
  }
  obj.complex = x;
  obj.check = verify_koszul(*x, h);
  if (!obj.check.ok()) {
    std::string msg = "Koszul postconditions fail for " + h.describe() + " in " + g->name() + ":";
    for (const auto& f : obj.check.failures) msg += " " + f + ";";
    throw TheoryCheckFailure(msg);
  }
  return obj;
}

bool BaseChangeReport::ok() const {
  for (const auto& e : entries) {
    if (!e.check.ok()) return false;
    if (e.whole_contractible && !*e.whole_contractible) return false;
  }
  return !entries.empty();
}

BaseChangeReport base_change_koszul_check(const KoszulObject& obj) {
  BaseChangeReport rep;
  std::vector<Ring> rings;
  for (int p : prime_divisors(obj.group->order())) rings.push_back(Ring::prime_field(p));
  rings.push_back(Ring::rationals());
  for (const Ring& r : rings) {
    if (r == obj.ring) continue;
    auto c = base_change(*obj.complex, r);
    BaseChangeEntry e{r.name(), verify_koszul(*c, obj.subgroup), std::nullopt};
    if (r.inverts(obj.group->order())) e.whole_contractible = is_contractible(*c).contractible;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

MackeyReport mackey_restrict_check(const Complex& x, const Subgroup& h, const Subgroup& k) {
  MackeyReport rep;
  GroupPtr g = h.group_ptr();
  if (!h.is_normal()) throw PreconditionError("Mackey check needs a normal subgroup");
  GroupHom hinc = embed(h);
  GroupHom kinc = embed(k);
  auto y = tensor_induce(x, hinc, 8);
  auto lhs = restrict_complex(*y, kinc);

  Subgroup hk = h.intersect(k);
  Subgroup prod = h.join(k);
  // H∩K inside the own group of K
  std::vector<int> kback(g->order(), -1);
  for (int a = 0; a < kinc.source->order(); ++a) kback[kinc(a)] = a;
  std::uint64_t mask = 0;
  for (int a : hk.elements()) mask |= std::uint64_t(1) << kback[a];
  Subgroup hk_in_k(kinc.source, mask);
  GroupHom hk_inc = embed(hk_in_k);
  std::vector<int> hback(g->order(), -1);
  for (int a = 0; a < hinc.source->order(); ++a) hback[hinc(a)] = a;

  std::vector<ComplexPtr> factors;
  for (const auto& coset : prod.left_cosets()) {
    int rep_el = coset.front();
    std::vector<int> map(hk_inc.source->order());
    for (int a = 0; a < hk_inc.source->order(); ++a) {
      int in_g = kinc(hk_inc(a));
      map[a] = hback[g->mul(g->inv(rep_el), g->mul(in_g, rep_el))];
    }
    auto conj = make_hom(hk_inc.source, hinc.source, std::move(map));
    auto res = restrict_complex(x, conj);
    factors.push_back(tensor_induce(*res, hk_inc, 8));
  }
  rep.factors = static_cast<int>(factors.size());
  auto rhs = tensor_all(factors);
  rep.ranks_match = lhs->lo() == rhs->lo() && lhs->hi() == rhs->hi();
  for (int n = lhs->lo(); n <= lhs->hi() && rep.ranks_match; ++n) rep.ranks_match = lhs->rank(n) == rhs->rank(n);
  rep.lhs_contractible = is_contractible(*lhs).contractible;
  rep.rhs_contractible = is_contractible(*rhs).contractible;
  return rep;
}

}  // namespace ttperm
