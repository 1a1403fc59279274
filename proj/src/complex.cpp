#include "ttperm/complex.hpp"

#include <sstream>

namespace ttperm {

namespace {

bool same_group(const Group& a, const Group& b) { return &a == &b || a.same_table(b); }

int sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

Complex::Complex(GroupPtr group, Ring ring, int lo, std::vector<ModulePtr> terms, std::vector<Matrix> diffs)
    : group_(std::move(group)), ring_(ring), lo_(lo) {
  zero_ = SignedPermModule::zero(group_, ring_);
  if (terms.empty()) {
    lo_ = 0;
    return;
  }
  if (diffs.size() + 1 != terms.size()) throw PreconditionError("complex needs one differential between consecutive terms");
  for (const auto& t : terms) {
    if (!t) throw PreconditionError("null module in complex");
    if (!same_group(*group_, t->group()) || t->ring() != ring_)
      throw PreconditionError("complex terms over different groups or rings");
  }
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (diffs[k].rows() != static_cast<std::size_t>(terms[k]->rank()) ||
        diffs[k].cols() != static_cast<std::size_t>(terms[k + 1]->rank()))
      throw PreconditionError("differential d_" + std::to_string(lo + k + 1) + " has the wrong shape");
    diffs[k] = reduce(diffs[k], ring_);
  }
  std::size_t a = 0, b = terms.size();
  while (a < b && terms[a]->rank() == 0) ++a;
  while (b > a && terms[b - 1]->rank() == 0) --b;
  if (a == b) {
    lo_ = 0;
    return;
  }
  lo_ = lo + static_cast<int>(a);
  terms_.assign(terms.begin() + a, terms.begin() + b);
  diffs_.push_back(Matrix(0, terms_.front()->rank()));
  for (std::size_t k = a; k + 1 < b; ++k) diffs_.push_back(std::move(diffs[k]));
  diffs_.push_back(Matrix(terms_.back()->rank(), 0));
  for (int n = lo_ + 1; n <= hi(); ++n) {
    if (!is_equivariant(d(n), *term(n), *term(n - 1)))
      throw PreconditionError("differential d_" + std::to_string(n) + " is not equivariant");
    if (n > lo_ + 1 && !reduce(d(n - 1) * d(n), ring_).is_zero())
      throw TheoryCheckFailure("d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " != 0");
  }
}

const ModulePtr& Complex::term(int n) const {
  if (n < lo_ || n > hi()) return zero_;
  return terms_[n - lo_];
}

const Matrix& Complex::d(int n) const {
  if (terms_.empty() || n < lo_ || n > hi() + 1) return empty_;
  return diffs_[n - lo_];
}

int Complex::total_rank() const {
  int t = 0;
  for (const auto& m : terms_) t += m->rank();
  return t;
}

bool Complex::all_permutation() const {
  for (const auto& m : terms_)
    if (!m->is_permutation()) return false;
  return true;
}

std::string Complex::summary() const {
  std::ostringstream os;
  if (is_zero()) return "0";
  os << "[" << lo_ << ".." << hi() << "] ranks";
  for (const auto& m : terms_) os << " " << m->rank();
  return os.str();
}

ComplexPtr make_complex(GroupPtr group, Ring ring, int lo, std::vector<ModulePtr> terms, std::vector<Matrix> diffs) {
  return std::make_shared<Complex>(std::move(group), ring, lo, std::move(terms), std::move(diffs));
}

ComplexPtr unit_complex(GroupPtr group, Ring ring) {
  auto one = SignedPermModule::trivial(group, ring);
  return make_complex(group, ring, 0, {one}, {});
}

ComplexPtr zero_complex(GroupPtr group, Ring ring) { return make_complex(std::move(group), ring, 0, {}, {}); }

ComplexPtr concentrated(ModulePtr m, int degree) {
  auto g = m->group_ptr();
  Ring r = m->ring();
  return make_complex(g, r, degree, {std::move(m)}, {});
}

int TensorLayout::first(int n) const { return std::max(x_lo, n - y_hi); }
int TensorLayout::last(int n) const { return std::min(x_hi, n - y_lo); }

int TensorLayout::offset(int n, int i) const {
  int off = 0;
  for (int k = first(n); k < i; ++k) off += x_ranks[k - x_lo] * y_ranks[n - k - y_lo];
  return off;
}

TensorLayout tensor_layout(const Complex& x, const Complex& y) {
  TensorLayout l{x.lo(), x.hi(), y.lo(), y.hi(), {}, {}};
  for (int i = x.lo(); i <= x.hi(); ++i) l.x_ranks.push_back(x.rank(i));
  for (int j = y.lo(); j <= y.hi(); ++j) l.y_ranks.push_back(y.rank(j));
  return l;
}

ComplexPtr tensor(const Complex& x, const Complex& y) {
  if (!same_group(x.group(), y.group()) || x.ring() != y.ring()) throw PreconditionError("tensor of complexes over different groups or rings");
  if (x.is_zero() || y.is_zero()) return zero_complex(x.group_ptr(), x.ring());
  TensorLayout l = tensor_layout(x, y);
  int lo = x.lo() + y.lo(), hi = x.hi() + y.hi();
  std::vector<ModulePtr> terms;
  std::vector<int> ranks;
  for (int n = lo; n <= hi; ++n) {
    std::vector<ModulePtr> parts;
    for (int i = l.first(n); i <= l.last(n); ++i) parts.push_back(tensor_module(*x.term(i), *y.term(n - i)));
    terms.push_back(parts.empty() ? SignedPermModule::zero(x.group_ptr(), x.ring()) : direct_sum(parts));
    ranks.push_back(terms.back()->rank());
  }
  std::vector<Matrix> diffs;
  for (int n = lo + 1; n <= hi; ++n) {
    Matrix d(ranks[n - 1 - lo], ranks[n - lo]);
    for (int i = l.first(n); i <= l.last(n); ++i) {
      int j = n - i;
      int src = l.offset(n, i);
      if (i - 1 >= l.first(n - 1) && i - 1 <= l.last(n - 1) && x.rank(i - 1) > 0) {
        Matrix b = kron(x.d(i), Matrix::identity(y.rank(j)));
        d.set_block(l.offset(n - 1, i - 1), src, b);
      }
      if (i >= l.first(n - 1) && i <= l.last(n - 1) && y.rank(j - 1) > 0) {
        Matrix b = kron(Matrix::identity(x.rank(i)), y.d(j));
        if (i % 2 != 0) b = -b;
        d.set_block(l.offset(n - 1, i), src, b);
      }
    }
    diffs.push_back(std::move(d));
  }
  return make_complex(x.group_ptr(), x.ring(), lo, std::move(terms), std::move(diffs));
}

ComplexPtr tensor_all(const std::vector<ComplexPtr>& factors) {
  if (factors.empty()) throw PreconditionError("tensor of no complexes");
  ComplexPtr acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(*acc, *factors[i]);
  return acc;
}

ComplexPtr shift(const Complex& x, int s) {
  if (x.is_zero()) return zero_complex(x.group_ptr(), x.ring());
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    terms.push_back(x.term(n));
    if (n > x.lo()) diffs.push_back(sign_pow(s) == 1 ? x.d(n) : -x.d(n));
  }
  return make_complex(x.group_ptr(), x.ring(), x.lo() + s, std::move(terms), std::move(diffs));
}

ComplexPtr dual(const Complex& x) {
  if (x.is_zero()) return zero_complex(x.group_ptr(), x.ring());
  int lo = -x.hi(), hi = -x.lo();
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    terms.push_back(dual_module(*x.term(-n)));
    if (n > lo) {
      Matrix t = x.d(1 - n).transpose();
      diffs.push_back(sign_pow(n) == 1 ? t : -t);
    }
  }
  return make_complex(x.group_ptr(), x.ring(), lo, std::move(terms), std::move(diffs));
}

ComplexPtr base_change(const Complex& x, const Ring& ring) {
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    terms.push_back(base_change_module(*x.term(n), ring));
    if (n > x.lo()) diffs.push_back(reduce(x.d(n), ring));
  }
  return make_complex(x.group_ptr(), ring, x.lo(), std::move(terms), std::move(diffs));
}

ComplexPtr restrict_complex(const Complex& x, const GroupHom& f) {
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    terms.push_back(restrict_module(*x.term(n), f));
    if (n > x.lo()) diffs.push_back(x.d(n));
  }
  return make_complex(f.source, x.ring(), x.lo(), std::move(terms), std::move(diffs));
}

ComplexPtr induce_complex(const Complex& x, const GroupHom& f) {
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  int k = f.target->order() / f.source->order();
  for (int n = x.lo(); n <= x.hi(); ++n) {
    terms.push_back(induce_module(*x.term(n), f));
    if (n > x.lo()) diffs.push_back(kron(Matrix::identity(k), x.d(n)));
  }
  return make_complex(f.target, x.ring(), x.lo(), std::move(terms), std::move(diffs));
}

ComplexPtr direct_sum(const Complex& x, const Complex& y) {
  if (x.is_zero()) return std::make_shared<Complex>(y);
  if (y.is_zero()) return std::make_shared<Complex>(x);
  int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    terms.push_back(direct_sum(std::vector<ModulePtr>{x.term(n), y.term(n)}));
    if (n > lo) diffs.push_back(direct_sum(x.d(n).empty() ? Matrix(x.rank(n - 1), x.rank(n)) : x.d(n),
                                           y.d(n).empty() ? Matrix(y.rank(n - 1), y.rank(n)) : y.d(n)));
  }
  return make_complex(x.group_ptr(), x.ring(), lo, std::move(terms), std::move(diffs));
}

bool same_complex(const Complex& a, const Complex& b) {
  if (a.lo() != b.lo() || a.hi() != b.hi() || a.ring() != b.ring()) return false;
  for (int n = a.lo(); n <= a.hi(); ++n) {
    if (!a.term(n)->same_action(*b.term(n))) return false;
    if (n > a.lo() && a.d(n) != b.d(n)) return false;
  }
  return true;
}

Matrix ChainMap::at(int n) const {
  if (n < source->lo() || n > source->hi()) return Matrix(target->rank(n), source->rank(n));
  return components[n - source->lo()];
}

bool is_chain_map(const Complex& source, const Complex& target, const std::vector<Matrix>& comps, int lo) {
  auto comp = [&](int n) {
    int k = n - lo;
    if (k < 0 || k >= static_cast<int>(comps.size())) return Matrix(target.rank(n), source.rank(n));
    return comps[k];
  };
  auto dmat = [](const Complex& c, int n) {
    const Matrix& d = c.d(n);
    if (d.rows() == static_cast<std::size_t>(c.rank(n - 1)) && d.cols() == static_cast<std::size_t>(c.rank(n))) return d;
    return Matrix(c.rank(n - 1), c.rank(n));
  };
  int lo_n = std::min(source.lo(), target.lo());
  int hi_n = std::max(source.hi(), target.hi()) + 1;
  for (int n = lo_n; n <= hi_n; ++n) {
    Matrix lhs = dmat(target, n) * comp(n);
    Matrix rhs = comp(n - 1) * dmat(source, n);
    if (!reduce(lhs - rhs, source.ring()).is_zero()) return false;
  }
  return true;
}

ChainMap make_chain_map(ComplexPtr source, ComplexPtr target, std::vector<Matrix> components) {
  if (!same_group(source->group(), target->group()) || source->ring() != target->ring())
    throw PreconditionError("chain map between complexes over different groups or rings");
  std::size_t expect = source->is_zero() ? 0 : static_cast<std::size_t>(source->hi() - source->lo() + 1);
  if (components.size() != expect) throw PreconditionError("chain map needs one component per source degree");
  for (std::size_t k = 0; k < components.size(); ++k) {
    int n = source->lo() + static_cast<int>(k);
    if (components[k].rows() != static_cast<std::size_t>(target->rank(n)) ||
        components[k].cols() != static_cast<std::size_t>(source->rank(n)))
      throw PreconditionError("chain map component in degree " + std::to_string(n) + " has the wrong shape");
    components[k] = reduce(components[k], source->ring());
    if (!is_equivariant(components[k], *source->term(n), *target->term(n)))
      throw PreconditionError("chain map component in degree " + std::to_string(n) + " is not equivariant");
  }
  if (!is_chain_map(*source, *target, components, source->lo()))
    throw TheoryCheckFailure("map does not commute with the differentials");
  return ChainMap{std::move(source), std::move(target), std::move(components)};
}

ChainMap make_chain_map_at(ComplexPtr source, ComplexPtr target, const std::vector<std::pair<int, Matrix>>& comps) {
  std::vector<Matrix> c;
  for (int n = source->lo(); n <= source->hi() && !source->is_zero(); ++n) c.emplace_back(target->rank(n), source->rank(n));
  for (const auto& [n, m] : comps) {
    if (n < source->lo() || n > source->hi()) {
      if (!m.is_zero()) throw PreconditionError("chain map component outside the source range");
      continue;
    }
    c[n - source->lo()] = m;
  }
  return make_chain_map(std::move(source), std::move(target), std::move(c));
}

ChainMap identity_map(ComplexPtr x) {
  std::vector<Matrix> c;
  for (int n = x->lo(); n <= x->hi() && !x->is_zero(); ++n) c.push_back(Matrix::identity(x->rank(n)));
  return ChainMap{x, x, std::move(c)};
}

ChainMap zero_map(ComplexPtr source, ComplexPtr target) {
  std::vector<Matrix> c;
  for (int n = source->lo(); n <= source->hi() && !source->is_zero(); ++n) c.emplace_back(target->rank(n), source->rank(n));
  return ChainMap{std::move(source), std::move(target), std::move(c)};
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
  std::vector<Matrix> c;
  for (int n = g.source->lo(); n <= g.source->hi() && !g.source->is_zero(); ++n) c.push_back(f.at(n) * g.at(n));
  return make_chain_map(g.source, f.target, std::move(c));
}

ChainMap subtract(const ChainMap& f, const ChainMap& g) {
  std::vector<Matrix> c;
  for (int n = f.source->lo(); n <= f.source->hi() && !f.source->is_zero(); ++n) c.push_back(f.at(n) - g.at(n));
  return make_chain_map(f.source, f.target, std::move(c));
}

ChainMap scale(const Scalar& s, const ChainMap& f) {
  std::vector<Matrix> c;
  for (const auto& m : f.components) c.push_back(s * m);
  return make_chain_map(f.source, f.target, std::move(c));
}

ChainMap tensor_maps(const ChainMap& f, const ChainMap& g) {
  auto src = tensor(*f.source, *g.source);
  auto tgt = tensor(*f.target, *g.target);
  if (src->is_zero()) return zero_map(src, tgt);
  TensorLayout ls = tensor_layout(*f.source, *g.source);
  TensorLayout lt = tensor_layout(*f.target, *g.target);
  std::vector<Matrix> c;
  for (int n = src->lo(); n <= src->hi(); ++n) {
    Matrix m(tgt->rank(n), src->rank(n));
    for (int i = ls.first(n); i <= ls.last(n); ++i) {
      if (tgt->is_zero() || i < lt.first(n) || i > lt.last(n)) continue;
      Matrix b = kron(f.at(i), g.at(n - i));
      m.set_block(lt.offset(n, i), ls.offset(n, i), b);
    }
    c.push_back(std::move(m));
  }
  return make_chain_map(src, tgt, std::move(c));
}

ChainMap restrict_map(const ChainMap& f, const GroupHom& h) {
  auto s = restrict_complex(*f.source, h);
  auto t = restrict_complex(*f.target, h);
  std::vector<Matrix> c;
  for (int n = s->lo(); n <= s->hi() && !s->is_zero(); ++n) c.push_back(f.at(n));
  return make_chain_map(s, t, std::move(c));
}

ChainMap base_change_map(const ChainMap& f, const Ring& ring) {
  auto s = base_change(*f.source, ring);
  auto t = base_change(*f.target, ring);
  std::vector<Matrix> c;
  for (int n = s->lo(); n <= s->hi() && !s->is_zero(); ++n) c.push_back(reduce(f.at(n), ring));
  return make_chain_map(s, t, std::move(c));
}

ChainMap shift_map(const ChainMap& f, int s) {
  auto src = shift(*f.source, s);
  auto tgt = shift(*f.target, s);
  std::vector<Matrix> c;
  for (int n = src->lo(); n <= src->hi() && !src->is_zero(); ++n) c.push_back(f.at(n - s));
  return make_chain_map(src, tgt, std::move(c));
}

ComplexPtr cone(const ChainMap& f) {
  const Complex& x = *f.source;
  const Complex& y = *f.target;
  if (x.is_zero()) return std::make_shared<Complex>(y);
  int lo = y.is_zero() ? x.lo() + 1 : std::min(x.lo() + 1, y.lo());
  int hi = y.is_zero() ? x.hi() + 1 : std::max(x.hi() + 1, y.hi());
  std::vector<ModulePtr> terms;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    terms.push_back(direct_sum(std::vector<ModulePtr>{x.term(n - 1), y.term(n)}));
    if (n == lo) continue;
    int a = x.rank(n - 1), b = y.rank(n), a2 = x.rank(n - 2), b2 = y.rank(n - 1);
    Matrix d(a2 + b2, a + b);
    if (a2 > 0 && a > 0) d.set_block(0, 0, -x.d(n - 1));
    if (b2 > 0 && a > 0) d.set_block(a2, 0, f.at(n - 1));
    if (b2 > 0 && b > 0) d.set_block(a2, a, y.d(n));
    diffs.push_back(std::move(d));
  }
  return make_complex(x.group_ptr(), x.ring(), lo, std::move(terms), std::move(diffs));
}

}  // namespace ttperm
