#include "ttperm/twisted.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

namespace ttperm {

namespace {

int sigma_element(const Subgroup& n) {
  for (int g = 0; g < n.group().order(); ++g)
    if (!n.contains(g)) return g;
  throw PreconditionError("u complex needs a proper normal subgroup");
}

void require_index_p(const Subgroup& n) {
  if (!n.is_normal() || !is_prime(n.index()))
    throw PreconditionError("N must be normal of prime index, got " + n.describe());
}

int total(const Twist& q) { return std::accumulate(q.begin(), q.end(), 0); }

Twist add(const Twist& a, const Twist& b) {
  Twist r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vector ones(int n) { return Vector(n, Scalar(1)); }

// x = lambda * y in the hom group for some unit lambda of the ring
bool same_class_up_to_unit(const HomGroup& hg, const Vector& x, const Vector& y) {
  const Ring& ring = hg.complex->ring();
  Vector cx = hg.coordinates(reduce(x, ring));
  Vector cy = hg.coordinates(reduce(y, ring));
  if (ring.is_integers()) {
    Vector neg(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
    return cx == cy || cx == hg.coordinates(neg);
  }
  std::size_t k = 0;
  while (k < cy.size() && sgn(cy[k]) == 0) ++k;
  if (k == cy.size()) return is_zero(cx);
  if (sgn(cx[k]) == 0) return false;
  Scalar lambda = ring.normalize(cx[k] / cy[k]);
  for (std::size_t i = 0; i < cy.size(); ++i)
    if (ring.normalize(cx[i] - lambda * cy[i]) != 0) return false;
  return true;
}

bool is_unit_generator(const HomGroup& hg, const Vector& x) {
  const Ring& ring = hg.complex->ring();
  const Presentation& pr = hg.presentation();
  if (pr.free_rank != 1 || !pr.torsion.empty()) return false;
  Vector c = hg.coordinates(reduce(x, ring));
  return ring.is_unit(c[0]);
}

// Relation lattice of the columns of e inside Z^k / (orders).
Matrix relation_rows(const Matrix& e, const std::vector<Scalar>& orders, const Ring& ring) {
  std::size_t m = e.cols(), k = e.rows();
  if (m == 0) return Matrix(0, 0);
  if (k == 0) return Matrix::identity(m);
  std::size_t t = 0;
  for (const auto& o : orders)
    if (sgn(o) != 0) ++t;
  Matrix full(k, m + t);
  full.set_block(0, 0, e);
  std::size_t c = m;
  for (std::size_t i = 0; i < k; ++i)
    if (sgn(orders[i]) != 0) full(i, c++) = orders[i];
  Matrix ker = kernel(full, ring);
  return hermite_rows(ker.block(0, 0, m, ker.cols()).transpose(), ring);
}

bool spans(const Matrix& e, const std::vector<Scalar>& orders, const Ring& ring) {
  std::size_t k = e.rows();
  if (k == 0) return true;
  if (e.cols() == 0) return false;
  Matrix full(k, e.cols() + k);
  full.set_block(0, 0, e);
  for (std::size_t i = 0; i < k; ++i) full(i, e.cols() + i) = orders[i];
  return solve(full, Matrix::identity(k), ring).has_value();
}

Presentation quotient(const Matrix& rel, std::size_t m, const Ring& ring) {
  if (m == 0) return {};
  Matrix in = rel.rows() == 0 ? Matrix(m, 0) : rel.transpose();
  return homology(Matrix(0, m), in, m, ring).presentation;
}

}  // namespace

std::string to_string(TwistCase c) {
  switch (c) {
    case TwistCase::C1: return "C1";
    case TwistCase::C2: return "C2";
    case TwistCase::C3: return "C3";
    case TwistCase::C4: return "C4";
  }
  return "?";
}

TwistCase twist_case(int p, const Ring& ring) {
  bool zero = ring.characteristic() == p;
  if (p == 2) return zero ? TwistCase::C1 : TwistCase::C2;
  return zero ? TwistCase::C3 : TwistCase::C4;
}

ComplexPtr u_complex(const Subgroup& n, const Ring& ring) { return canonical_u_power(n, 1, ring); }

ComplexPtr canonical_u_power(const Subgroup& n, int q, const Ring& ring) {
  if (q < 0) throw PreconditionError("negative twist");
  const GroupPtr& g = n.group_ptr();
  if (q == 0) return unit_complex(g, ring);
  require_index_p(n);
  int p = n.index();
  int top = (p == 2 ? 1 : 2) * q;
  ModulePtr perm = perm_module(n, ring);
  Matrix sigma = perm->action_matrix(sigma_element(n)) - Matrix::identity(p);
  Matrix norm(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) norm(i, j) = 1;
  Matrix eps(1, p);
  for (int j = 0; j < p; ++j) eps(0, j) = 1;
  std::vector<ModulePtr> terms{SignedPermModule::trivial(g, ring)};
  std::vector<Matrix> diffs;
  for (int k = 1; k <= top; ++k) {
    terms.push_back(perm);
    diffs.push_back(k == 1 ? eps : (k % 2 == 0 ? sigma : norm));
  }
  return make_complex(g, ring, 0, std::move(terms), std::move(diffs));
}

const TableEntry* GradedTable::find(int s, const Twist& q) const {
  for (const auto& e : entries)
    if (e.shift == s && e.twist == q) return &e;
  return nullptr;
}

std::string Relation::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [c, m] = terms[i];
    if (i > 0) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    Scalar a = abs(c);
    if (a != 1) os << to_string(a) << "*";
    os << m;
  }
  os << " = 0";
  return os.str();
}

TwistedCohomology::TwistedCohomology(GroupPtr g, Ring ring) : group_(std::move(g)), ring_(std::move(ring)) {
  p_ = p_group_prime(*group_);
  if (p_ == 0) throw PreconditionError("twisted cohomology needs a nontrivial p-group");
  case_ = ttperm::twist_case(p_, ring_);
  for (const auto& h : all_subgroups(group_))
    if (h.index() == p_ && h.is_normal()) normals_.push_back(h);
  std::sort(normals_.begin(), normals_.end());
}

int TwistedCohomology::normal_index(const Subgroup& n) const {
  for (std::size_t i = 0; i < normals_.size(); ++i)
    if (normals_[i] == n) return static_cast<int>(i);
  throw PreconditionError(n.describe() + " is not a normal subgroup of index p");
}

Twist TwistedCohomology::unit_twist(int i) const {
  Twist q(normals_.size(), 0);
  q[i] = 1;
  return q;
}

std::string TwistedCohomology::twist_str(const Twist& q) const {
  if (q.size() == 1) return std::to_string(q[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s + ")";
}

ComplexPtr TwistedCohomology::canonical(const Twist& q) {
  if (q.size() != normals_.size()) throw PreconditionError("twist has the wrong length");
  auto it = complexes_.find(q);
  if (it != complexes_.end()) return it->second;
  std::vector<ComplexPtr> factors;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0) factors.push_back(canonical_u_power(normals_[i], q[i], ring_));
  ComplexPtr c;
  if (factors.empty()) c = unit_complex(group_, ring_);
  else if (factors.size() == 1) c = factors[0];
  else c = tensor_all(factors);
  complexes_[q] = c;
  return c;
}

const HomGroup& TwistedCohomology::hom(int s, const Twist& q) {
  auto key = std::make_pair(s, q);
  auto it = homs_.find(key);
  if (it != homs_.end()) return it->second;
  return homs_.emplace(key, hom_group(canonical(q), s)).first->second;
}

void TwistedCohomology::prefetch(const std::vector<std::pair<int, Twist>>& keys, int jobs) {
  std::vector<std::pair<int, Twist>> todo;
  std::vector<ComplexPtr> ys;
  for (const auto& k : keys)
    if (!homs_.count(k)) {
      todo.push_back(k);
      ys.push_back(canonical(k.second));
    }
  std::vector<std::optional<HomGroup>> out(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < todo.size();) {
      try {
        out[i] = hom_group(ys[i], todo[i].first);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(jobs, 1); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    homs_.emplace(todo[i], std::move(*out[i]));
  }
}

const std::vector<TwistedClass>& TwistedCohomology::generators() {
  if (!gens_.empty()) return gens_;
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    std::string suffix = normals_.size() == 1 ? "" : std::to_string(i + 1);
    Twist e = unit_twist(static_cast<int>(i));
    TwistedClass a{"a" + suffix, 0, e, Vector{Scalar(1)}};
    TwistedClass b;
    b.name = "b" + suffix;
    switch (case_) {
      case TwistCase::C1: b.shift = -1; b.twist = e; break;
      case TwistCase::C2: b.shift = -2; b.twist = add(e, e); break;
      default: b.shift = -2; b.twist = e; break;
    }
    b.cycle = ones(p_);
    gens_.push_back(a);
    gens_.push_back(b);
    if (case_ == TwistCase::C3) gens_.push_back(TwistedClass{"c" + suffix, -1, e, ones(p_)});
  }
  for (auto& x : gens_) {
    if (!is_invariant_cycle(*canonical(x.twist), -x.shift, x.cycle))
      throw TheoryCheckFailure(x.name + " is not an invariant cycle");
    x.nonzero = !is_zero(x);
  }
  return gens_;
}

const Equivalence& TwistedCohomology::transport(const Twist& q, const Twist& r) {
  auto key = std::make_pair(q, r);
  auto it = transports_.find(key);
  if (it != transports_.end()) return it->second;
  auto t = tensor(*canonical(q), *canonical(r));
  auto res = find_homotopy_equivalence(t, canonical(add(q, r)));
  if (res.status != EquivalenceResult::Status::Equivalent)
    throw TheoryCheckFailure("Y(" + twist_str(q) + ") (x) Y(" + twist_str(r) + ") is not equivalent to Y(" +
                             twist_str(add(q, r)) + "): " + res.reason);
  return transports_.emplace(key, std::move(*res.equivalence)).first->second;
}

TwistedClass TwistedCohomology::product(const TwistedClass& x, const TwistedClass& y) {
  TwistedClass out;
  out.name = x.name + "*" + y.name;
  out.shift = x.shift + y.shift;
  out.twist = add(x.twist, y.twist);
  auto scalar_times = [&](const TwistedClass& unit_class, const TwistedClass& other) {
    Scalar l = unit_class.cycle.empty() ? Scalar(0) : unit_class.cycle[0];
    Vector v(other.cycle);
    for (auto& e : v) e *= l;
    return reduce(v, ring_);
  };
  if (total(x.twist) == 0) {
    out.cycle = scalar_times(x, y);
  } else if (total(y.twist) == 0) {
    out.cycle = scalar_times(y, x);
  } else {
    const Equivalence& e = transport(x.twist, y.twist);
    const Complex& t = *e.f.source;
    auto lay = tensor_layout(*canonical(x.twist), *canonical(y.twist));
    int i = -x.shift, j = -y.shift, n = i + j;
    Vector v(t.rank(n));
    if (!v.empty() && !x.cycle.empty() && !y.cycle.empty()) {
      int off = lay.offset(n, i);
      std::size_t rj = y.cycle.size();
      for (std::size_t a = 0; a < x.cycle.size(); ++a)
        for (std::size_t b = 0; b < rj; ++b) v[off + a * rj + b] = x.cycle[a] * y.cycle[b];
    }
    out.cycle = reduce(e.f.at(n) * v, ring_);
  }
  out.nonzero = !is_zero(out);
  return out;
}

std::string TwistedCohomology::monomial_name(const std::vector<int>& exps) const {
  std::string s;
  std::size_t per = case_ == TwistCase::C3 ? 3 : 2;
  static const char* kinds[] = {"a", "b", "c"};
  for (std::size_t k = 0; k < exps.size(); ++k) {
    if (exps[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += kinds[k % per];
    if (normals_.size() > 1) s += std::to_string(k / per + 1);
    if (exps[k] > 1) s += "^" + std::to_string(exps[k]);
  }
  return s.empty() ? "1" : s;
}

std::pair<int, Twist> TwistedCohomology::bidegree(const std::vector<int>& exps) {
  const auto& gens = generators();
  int s = 0;
  Twist q(normals_.size(), 0);
  for (std::size_t k = 0; k < exps.size(); ++k) {
    s += gens[k].shift * exps[k];
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += gens[k].twist[i] * exps[k];
  }
  return {s, q};
}

TwistedClass TwistedCohomology::monomial(const std::vector<int>& exps) {
  const auto& gens = generators();
  if (exps.size() != gens.size()) throw PreconditionError("exponent vector has the wrong length");
  auto it = monomials_.find(exps);
  if (it != monomials_.end()) return it->second;
  std::size_t k = 0;
  while (k < exps.size() && exps[k] == 0) ++k;
  TwistedClass out;
  if (k == exps.size()) {
    out = TwistedClass{"1", 0, Twist(normals_.size(), 0), Vector{Scalar(1)}};
  } else {
    std::vector<int> rest(exps);
    --rest[k];
    out = product(gens[k], monomial(rest));
  }
  out.name = monomial_name(exps);
  monomials_[exps] = out;
  return out;
}

Vector TwistedCohomology::coordinates(const TwistedClass& x) { return hom(x.shift, x.twist).coordinates(x.cycle); }

bool TwistedCohomology::is_zero(const TwistedClass& x) { return ttperm::is_zero(coordinates(x)); }

bool TwistedCohomology::same_up_to_unit(const TwistedClass& x, const TwistedClass& y) {
  if (x.shift != y.shift || x.twist != y.twist) return false;
  return same_class_up_to_unit(hom(x.shift, x.twist), x.cycle, y.cycle);
}

GradedTable twisted_table(TwistedCohomology& tc, int max_twist) {
  return twisted_table(tc, max_twist, -tc.two_prime() * max_twist - 1, 0);
}

GradedTable twisted_table(TwistedCohomology& tc, int max_twist, int shift_min, int shift_max, int jobs) {
  if (max_twist < 0 || shift_min > shift_max) throw PreconditionError("empty table window");
  const auto& gens = tc.generators();
  std::size_t nn = tc.normals().size();
  GradedTable table;
  table.max_twist = max_twist;
  table.shift_min = shift_min;
  table.shift_max = shift_max;

  std::map<std::pair<int, Twist>, std::vector<std::vector<int>>> buckets;
  std::vector<int> exps(gens.size(), 0);
  std::function<void(std::size_t, int)> walk = [&](std::size_t k, int budget) {
    if (k == gens.size()) {
      buckets[tc.bidegree(exps)].push_back(exps);
      return;
    }
    int w = total(gens[k].twist);
    for (int e = 0; e * w <= budget; ++e) {
      exps[k] = e;
      walk(k + 1, budget - e * w);
    }
    exps[k] = 0;
  };
  walk(0, max_twist);

  std::vector<Twist> twists;
  Twist q(nn, 0);
  std::function<void(std::size_t, int)> tw = [&](std::size_t i, int budget) {
    if (i == nn) {
      twists.push_back(q);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      q[i] = e;
      tw(i + 1, budget - e);
    }
    q[i] = 0;
  };
  tw(0, max_twist);
  std::sort(twists.begin(), twists.end(), [](const Twist& a, const Twist& b) {
    return total(a) != total(b) ? total(a) < total(b) : a < b;
  });

  if (jobs > 1) {
    std::vector<std::pair<int, Twist>> keys;
    for (const auto& tq : twists)
      for (int s = shift_max; s >= shift_min; --s) keys.emplace_back(s, tq);
    tc.prefetch(keys, jobs);
  }
  for (const auto& tq : twists)
    for (int s = shift_max; s >= shift_min; --s) {
      TableEntry e;
      e.shift = s;
      e.twist = tq;
      const HomGroup& hg = tc.hom(s, tq);
      e.group = hg.presentation();
      auto it = buckets.find({s, tq});
      if (it != buckets.end()) e.monomials = it->second;
      std::sort(e.monomials.begin(), e.monomials.end(), std::greater<>());
      std::vector<Vector> cols;
      for (const auto& m : e.monomials) {
        TwistedClass x = tc.monomial(m);
        e.monomial_names.push_back(x.name);
        cols.push_back(hg.coordinates(x.cycle));
      }
      std::size_t k = hg.data.orders.size();
      e.evaluation = Matrix::from_columns(cols, k);
      e.spanned = spans(e.evaluation, hg.data.orders, tc.ring());
      e.relations = relation_rows(e.evaluation, hg.data.orders, tc.ring());
      table.entries.push_back(std::move(e));
    }
  return table;
}

RingPresentation ring_presentation(TwistedCohomology& tc, const GradedTable& table) {
  const auto& gens = tc.generators();
  const Ring& ring = tc.ring();
  RingPresentation rp;
  rp.max_twist = table.max_twist;
  for (const auto& g : gens) {
    rp.generators.push_back(g.name);
    rp.degrees.emplace_back(g.shift, g.twist);
  }
  std::string unspanned;
  for (const auto& e : table.entries)
    if (!e.spanned)
      unspanned += " H^{" + std::to_string(e.shift) + "," + tc.twist_str(e.twist) + "} = " + e.group.str(ring);
  if (!unspanned.empty()) throw TheoryCheckFailure("not spanned by monomials:" + unspanned);
  for (const auto& e : table.entries) {
    std::size_t m = e.monomials.size();
    if (m == 0 || e.relations.rows() == 0) continue;
    auto index_of = [&](const std::vector<int>& x) -> int {
      for (std::size_t i = 0; i < m; ++i)
        if (e.monomials[i] == x) return static_cast<int>(i);
      return -1;
    };
    // consequences of relations one generator lower
    std::vector<Vector> known;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Twist lower = e.twist;
      bool ok = true;
      for (std::size_t i = 0; i < lower.size(); ++i) {
        lower[i] -= gens[k].twist[i];
        if (lower[i] < 0) ok = false;
      }
      if (!ok) continue;
      const TableEntry* le = table.find(e.shift - gens[k].shift, lower);
      if (!le) continue;
      for (std::size_t r = 0; r < le->relations.rows(); ++r) {
        Vector v(m);
        for (std::size_t c = 0; c < le->monomials.size(); ++c) {
          if (sgn(le->relations(r, c)) == 0) continue;
          std::vector<int> up(le->monomials[c]);
          ++up[k];
          v[index_of(up)] += le->relations(r, c);
        }
        known.push_back(v);
      }
    }
    for (std::size_t r = 0; r < e.relations.rows(); ++r) {
      Vector rel = e.relations.block(r, 0, 1, m).transpose().column(0);
      if (!known.empty() && solve(Matrix::from_columns(known, m), rel, ring)) continue;
      known.push_back(rel);
      Relation out{e.shift, e.twist, {}};
      for (std::size_t c = 0; c < m; ++c)
        if (sgn(rel[c]) != 0) out.terms.emplace_back(rel[c], e.monomial_names[c]);
      rp.relations.push_back(std::move(out));
    }
  }
  if (!ring.is_field())
    for (const auto& g : gens) {
      if (g.name[0] != 'b') continue;
      Vector v(g.cycle);
      for (auto& x : v) x *= tc.prime();
      const HomGroup& hg = tc.hom(g.shift, g.twist);
      if (!hg.is_null(v))
        rp.notes.push_back(std::to_string(tc.prime()) + "*" + g.name + " != 0: H^{" + std::to_string(g.shift) + "," +
                           tc.twist_str(g.twist) + "} = " + hg.presentation().str(ring));
    }
  return rp;
}

std::optional<Vector> p_times_a_null_homotopy(TwistedCohomology& tc, int normal) {
  std::size_t per = tc.twist_case() == TwistCase::C3 ? 3 : 2;
  const TwistedClass& a = tc.generators().at(normal * per);
  Vector v(a.cycle);
  for (auto& x : v) x *= tc.prime();
  return tc.hom(a.shift, a.twist).null_homotopy(reduce(v, tc.ring()));
}

bool c_squared_vanishes(TwistedCohomology& tc, int normal) {
  if (tc.twist_case() != TwistCase::C3) throw PreconditionError("c exists only for odd p with p = 0 in R");
  const TwistedClass& c = tc.generators().at(normal * 3 + 2);
  auto u = tc.canonical(c.twist);
  auto t = tensor(*u, *u);
  auto lay = tensor_layout(*u, *u);
  Vector v(t->rank(2));
  int off = lay.offset(2, 1);
  std::size_t r = c.cycle.size();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) v[off + a * r + b] = c.cycle[a] * c.cycle[b];
  return hom_group(t, -2).is_null(v);
}

RestrictionReport restriction_check(GroupPtr g, const Subgroup& n, const Subgroup& h, const Ring& ring) {
  RestrictionReport rep{n, h, false, false, {}, {}};
  TwistedCohomology tc(g, ring);
  int idx = tc.normal_index(n);
  auto inc = inclusion(h);
  const GroupPtr& gh = inc.source;
  rep.contained = h.is_subgroup_of(n);
  Subgroup nh = preimage_of(inc, n);
  int tp = tc.two_prime();
  auto target_for = [&](int k) {
    return rep.contained ? shift(*unit_complex(gh, ring), k * tp) : canonical_u_power(nh, k, ring);
  };

  auto ue = find_homotopy_equivalence(restrict_complex(*u_complex(n, ring), inc), target_for(1));
  rep.u_equivalent = ue.status == EquivalenceResult::Status::Equivalent;
  if (!rep.u_equivalent) rep.failures.push_back("Res u_N: " + ue.reason);

  std::size_t per = tc.twist_case() == TwistCase::C3 ? 3 : 2;
  for (std::size_t j = 0; j < per; ++j) {
    const TwistedClass& x = tc.generators()[idx * per + j];
    std::string kind = x.name.substr(0, 1);
    int k = x.twist[idx];
    auto res = restrict_complex(*tc.canonical(x.twist), inc);
    auto target = target_for(k);
    auto eq = find_homotopy_equivalence(res, target);
    if (eq.status != EquivalenceResult::Status::Equivalent) {
      rep.classes[kind] = false;
      rep.failures.push_back("Res of Y for " + kind + ": " + eq.reason);
      continue;
    }
    Vector img = reduce(eq.equivalence->f.at(-x.shift) * x.cycle, ring);
    HomGroup hg = hom_group(target, x.shift);
    bool ok;
    if (rep.contained) {
      ok = kind == "b" ? is_unit_generator(hg, img) : hg.is_null(img);
    } else {
      Vector expected = kind == "a" ? Vector{Scalar(1)} : ones(nh.index());
      ok = same_class_up_to_unit(hg, img, expected);
    }
    rep.classes[kind] = ok;
    if (!ok) rep.failures.push_back("Res " + kind + " does not match");
  }
  return rep;
}

BaseChangeClassReport base_change_class_check(GroupPtr g, int normal, int power_bound) {
  BaseChangeClassReport rep;
  Ring z = Ring::integers();
  TwistedCohomology tz(g, z);
  rep.prime = tz.prime();
  Ring fp = Ring::prime_field(rep.prime);
  TwistedCohomology tp(g, fp);
  std::size_t pz = 2, pp = tp.twist_case() == TwistCase::C3 ? 3 : 2;
  const auto& gz = tz.generators();
  const auto& gp = tp.generators();

  auto iota = [&](const TwistedClass& x) {
    if (!same_complex(*base_change(*tz.canonical(x.twist), fp), *tp.canonical(x.twist)))
      throw TheoryCheckFailure("canonical complexes do not commute with base change");
    TwistedClass y(x);
    y.cycle = reduce(x.cycle, fp);
    return y;
  };

  const TwistedClass& az = gz.at(normal * pz);
  const TwistedClass& bz = gz.at(normal * pz + 1);
  const TwistedClass& ap = gp.at(normal * pp);
  const TwistedClass& bp = gp.at(normal * pp + 1);
  rep.a_ok = tp.same_up_to_unit(iota(az), ap);
  if (!rep.a_ok) rep.failures.push_back("iota(a_Z) != a_Fp");
  TwistedClass target = rep.prime == 2 ? tp.product(bp, bp) : bp;
  rep.b_ok = tp.same_up_to_unit(iota(bz), target);
  if (!rep.b_ok) rep.failures.push_back(rep.prime == 2 ? "iota(b_Z) != b_F2^2" : "iota(b_Z) != b_Fp");

  for (std::size_t j = 0; j < pp; ++j) {
    const TwistedClass& x = gp.at(normal * pp + j);
    int found = -1;
    for (int e = 1; e <= power_bound && found < 0; ++e) {
      std::vector<int> exps(gp.size(), 0);
      exps[normal * pp + j] = e;
      TwistedClass y = tp.monomial(exps);
      Vector cy = tp.coordinates(y);
      if (is_zero(cy)) {
        found = e;
        break;
      }
      std::vector<Vector> image;
      for (const auto& cyc : tz.hom(y.shift, y.twist).generator_cycles())
        image.push_back(tp.hom(y.shift, y.twist).coordinates(reduce(cyc, fp)));
      if (!image.empty() && solve(Matrix::from_columns(image, cy.size()), cy, fp)) found = e;
    }
    rep.power[x.name] = found;
    if (found < 0) rep.failures.push_back("no power of " + x.name + " within the bound lies in the image");
  }
  return rep;
}

bool Localization::all_stable() const {
  for (const auto& [d, s] : stable)
    if (!s) return false;
  return true;
}

Localization localize_twist0(TwistedCohomology& tc, const GradedTable& table, const Subgroup& h, int shift_min,
                             int shift_max) {
  const auto& gens = tc.generators();
  const Ring& ring = tc.ring();
  std::size_t per = tc.twist_case() == TwistCase::C3 ? 3 : 2;
  Localization loc{h, {}, {}, {}, {}};
  std::vector<int> g(gens.size(), 0);
  for (std::size_t i = 0; i < tc.normals().size(); ++i) {
    std::size_t k = i * per + (h.is_subgroup_of(tc.normals()[i]) ? 1 : 0);
    g[k] = 1;
    loc.inverted.push_back(gens[k].name);
  }
  auto [sg, tg] = tc.bidegree(g);
  TableEntry empty;
  auto stage_entry = [&](int d, int k) -> const TableEntry* {
    Twist q(tg);
    for (auto& x : q) x *= k;
    if (total(q) > table.max_twist) return nullptr;
    int s = d + k * sg;
    if (const TableEntry* e = table.find(s, q)) return e;
    // Y(q) lives in degrees 0..2'|q|, so these entries vanish
    if (s > 0 || s < -tc.two_prime() * total(q)) {
      empty = TableEntry{s, q, {}, {}, {}, Matrix(0, 0), true, Matrix(0, 0)};
      return &empty;
    }
    return nullptr;
  };
  auto module_of = [&](const TableEntry& e) {
    if (!e.spanned) throw TheoryCheckFailure("localization needs spanned table entries");
    return quotient(e.relations, e.monomials.size(), ring);
  };
  for (int d = shift_min; d <= shift_max; ++d) {
    int top = 0;
    while (stage_entry(d, top + 1)) ++top;
    if (top == 0)
      throw BoundExceeded("table too small to localize in shift " + std::to_string(d));
    const TableEntry& last = *stage_entry(d, top);
    loc.pieces[d] = module_of(last);
    loc.stage[d] = top;
    bool stable = false;
    if (top >= 2) {
      const TableEntry& prev = *stage_entry(d, top - 1);
      if (module_of(prev) == loc.pieces[d]) {
        std::size_t m = last.monomials.size();
        if (m == 0) {
          stable = true;
        } else {
          Matrix map(m, prev.monomials.size());
          for (std::size_t c = 0; c < prev.monomials.size(); ++c) {
            std::vector<int> up(prev.monomials[c]);
            for (std::size_t k = 0; k < up.size(); ++k) up[k] += g[k];
            for (std::size_t r = 0; r < m; ++r)
              if (last.monomials[r] == up) map(r, c) = 1;
          }
          Matrix full = last.relations.rows() == 0 ? map : hstack(map, last.relations.transpose());
          stable = full.cols() > 0 && solve(full, Matrix::identity(m), ring).has_value();
        }
      }
    }
    loc.stable[d] = stable;
  }
  return loc;
}

}  // namespace ttperm
