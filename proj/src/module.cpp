#include "ttperm/module.hpp"

#include <map>

namespace ttperm {

namespace {

bool same_group(const Group& a, const Group& b) { return &a == &b || a.same_table(b); }

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

}  // namespace

SignedPermModule::SignedPermModule(GroupPtr group, Ring ring, std::vector<std::vector<int>> image,
                                   std::vector<std::vector<int>> sign, std::vector<std::string> labels)
    : group_(std::move(group)), ring_(ring), image_(std::move(image)), sign_(std::move(sign)), labels_(std::move(labels)) {
  int n = group_->order();
  if (static_cast<int>(image_.size()) != n || static_cast<int>(sign_.size()) != n)
    throw PreconditionError("module action tables must have one row per group element");
  rank_ = static_cast<int>(image_[0].size());
  if (labels_.empty()) labels_ = default_labels(rank_);
  if (static_cast<int>(labels_.size()) != rank_) throw PreconditionError("module label count mismatch");
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(image_[g].size()) != rank_ || static_cast<int>(sign_[g].size()) != rank_)
      throw PreconditionError("module action rows have inconsistent length");
    std::vector<bool> hit(rank_);
    for (int i = 0; i < rank_; ++i) {
      int j = image_[g][i];
      if (j < 0 || j >= rank_ || hit[j]) throw PreconditionError("group element does not permute the basis");
      hit[j] = true;
      if (sign_[g][i] != 1 && sign_[g][i] != -1) throw PreconditionError("module signs must be +1 or -1");
      if (ring_.characteristic() == 2) sign_[g][i] = 1;
    }
  }
  int e = group_->identity();
  for (int i = 0; i < rank_; ++i)
    if (image_[e][i] != i || sign_[e][i] != 1) throw PreconditionError("identity does not act trivially");
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      int gh = group_->mul(g, h);
      for (int i = 0; i < rank_; ++i) {
        int hi = image_[h][i];
        if (image_[gh][i] != image_[g][hi] || sign_[gh][i] != sign_[g][hi] * sign_[h][i])
          throw PreconditionError("tables do not define a group action");
      }
    }
  orbit_index_.assign(rank_, -1);
  for (int i = 0; i < rank_; ++i) {
    if (orbit_index_[i] >= 0) continue;
    Orbit o{i, {}, {}, {}, Subgroup::trivial(group_), 0};
    std::map<int, int> where;
    std::uint64_t stab = 0, ker = 0;
    for (int step = 0; step < n; ++step) {
      int g = step == 0 ? e : (step <= e ? step - 1 : step);
      int j = image_[g][i];
      if (j == i) {
        stab |= std::uint64_t(1) << g;
        if (sign_[g][i] == 1) ker |= std::uint64_t(1) << g;
      }
      if (where.count(j)) continue;
      where[j] = static_cast<int>(o.members.size());
      o.members.push_back(j);
      o.transversal.push_back(g);
      o.transversal_sign.push_back(sign_[g][i]);
    }
    o.stabilizer = Subgroup(group_, stab);
    o.character_kernel = ker;
    for (int j : o.members) orbit_index_[j] = static_cast<int>(orbits_.size());
    orbits_.push_back(std::move(o));
  }
}

ModulePtr SignedPermModule::zero(GroupPtr group, Ring ring) {
  int n = group->order();
  return std::make_shared<SignedPermModule>(group, ring, std::vector<std::vector<int>>(n),
                                            std::vector<std::vector<int>>(n), std::vector<std::string>{});
}

ModulePtr SignedPermModule::trivial(GroupPtr group, Ring ring) {
  int n = group->order();
  return std::make_shared<SignedPermModule>(group, ring, std::vector<std::vector<int>>(n, {0}),
                                            std::vector<std::vector<int>>(n, {1}), std::vector<std::string>{"1"});
}

bool SignedPermModule::is_permutation() const {
  for (const auto& row : sign_)
    for (int s : row)
      if (s != 1) return false;
  return true;
}

bool SignedPermModule::is_permutation_up_to_signs() const {
  for (const auto& o : orbits_)
    if (!o.character_trivial()) return false;
  return true;
}

Matrix SignedPermModule::action_matrix(int g) const {
  Matrix m(rank_, rank_);
  for (int i = 0; i < rank_; ++i) m(image_[g][i], i) = ring_.normalize(Scalar(sign_[g][i]));
  return m;
}

Vector SignedPermModule::act(int g, const Vector& v) const {
  Vector out(rank_);
  for (int i = 0; i < rank_; ++i)
    if (sgn(v[i]) != 0) out[image_[g][i]] = sign_[g][i] == 1 ? v[i] : Scalar(-v[i]);
  return reduce(out, ring_);
}

Vector SignedPermModule::orbit_sum(int orbit) const {
  const auto& o = orbits_.at(orbit);
  if (!o.character_trivial()) throw PreconditionError("orbit sum over an orbit with nontrivial character");
  Vector v(rank_);
  for (std::size_t k = 0; k < o.members.size(); ++k) v[o.members[k]] = o.transversal_sign[k];
  return reduce(v, ring_);
}

bool SignedPermModule::same_action(const SignedPermModule& o) const {
  return same_group(*group_, *o.group_) && ring_ == o.ring_ && image_ == o.image_ && sign_ == o.sign_;
}

ModulePtr perm_module(const Subgroup& h, const Ring& ring) {
  const Group& g = h.group();
  auto cosets = h.left_cosets();
  int k = static_cast<int>(cosets.size());
  std::vector<int> which(g.order());
  for (int c = 0; c < k; ++c)
    for (int x : cosets[c]) which[x] = c;
  std::vector<std::vector<int>> image(g.order(), std::vector<int>(k)), sign(g.order(), std::vector<int>(k, 1));
  for (int x = 0; x < g.order(); ++x)
    for (int c = 0; c < k; ++c) image[x][c] = which[g.mul(x, cosets[c][0])];
  std::vector<std::string> labels;
  for (int c = 0; c < k; ++c) labels.push_back("g" + std::to_string(cosets[c][0]) + "H" + h.describe());
  if (h.is_whole()) labels = {"1"};
  return std::make_shared<SignedPermModule>(h.group_ptr(), ring, std::move(image), std::move(sign), std::move(labels));
}

ModulePtr sign_module(const Subgroup& h, const Ring& ring) {
  if (h.index() != 2) throw PreconditionError("sign module needs an index-2 subgroup");
  int n = h.group().order();
  std::vector<std::vector<int>> image(n, {0}), sign(n, {1});
  for (int x = 0; x < n; ++x) sign[x][0] = h.contains(x) ? 1 : -1;
  return std::make_shared<SignedPermModule>(h.group_ptr(), ring, std::move(image), std::move(sign),
                                            std::vector<std::string>{"L"});
}

ModulePtr signed_perm_module(const Subgroup& h, const Subgroup& k, const Ring& ring) {
  if (!k.is_subgroup_of(h) || h.order() != 2 * k.order()) throw PreconditionError("character kernel must have index 2");
  const Group& g = h.group();
  auto cosets = h.left_cosets();
  int m = static_cast<int>(cosets.size());
  std::vector<int> which(g.order());
  for (int c = 0; c < m; ++c)
    for (int x : cosets[c]) which[x] = c;
  std::vector<std::vector<int>> image(g.order(), std::vector<int>(m)), sign(g.order(), std::vector<int>(m));
  for (int x = 0; x < g.order(); ++x)
    for (int c = 0; c < m; ++c) {
      int y = g.mul(x, cosets[c][0]);
      int d = which[y];
      int hh = g.mul(g.inv(cosets[d][0]), y);
      image[x][c] = d;
      sign[x][c] = k.contains(hh) ? 1 : -1;
    }
  std::vector<std::string> labels;
  for (int c = 0; c < m; ++c) labels.push_back("g" + std::to_string(cosets[c][0]) + "H~");
  return std::make_shared<SignedPermModule>(h.group_ptr(), ring, std::move(image), std::move(sign), std::move(labels));
}

ModulePtr tensor_module(const SignedPermModule& m, const SignedPermModule& n) {
  if (!same_group(m.group(), n.group()) || m.ring() != n.ring()) throw PreconditionError("tensor of modules over different groups or rings");
  int a = m.rank(), b = n.rank(), ord = m.group().order();
  std::vector<std::vector<int>> image(ord, std::vector<int>(a * b)), sign(ord, std::vector<int>(a * b));
  for (int g = 0; g < ord; ++g)
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        image[g][i * b + j] = m.image(g, i) * b + n.image(g, j);
        sign[g][i * b + j] = m.sign(g, i) * n.sign(g, j);
      }
  std::vector<std::string> labels;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) labels.push_back(m.labels()[i] + "*" + n.labels()[j]);
  return std::make_shared<SignedPermModule>(m.group_ptr(), m.ring(), std::move(image), std::move(sign), std::move(labels));
}

ModulePtr direct_sum(const std::vector<ModulePtr>& parts) {
  if (parts.empty()) throw PreconditionError("direct sum of no modules");
  const auto& g = parts.front()->group_ptr();
  Ring ring = parts.front()->ring();
  int ord = g->order();
  std::vector<std::vector<int>> image(ord), sign(ord);
  std::vector<std::string> labels;
  int offset = 0;
  for (const auto& p : parts) {
    if (!same_group(*g, p->group()) || p->ring() != ring) throw PreconditionError("direct sum of modules over different groups or rings");
    for (int x = 0; x < ord; ++x)
      for (int i = 0; i < p->rank(); ++i) {
        image[x].push_back(offset + p->image(x, i));
        sign[x].push_back(p->sign(x, i));
      }
    labels.insert(labels.end(), p->labels().begin(), p->labels().end());
    offset += p->rank();
  }
  return std::make_shared<SignedPermModule>(g, ring, std::move(image), std::move(sign), std::move(labels));
}

ModulePtr dual_module(const SignedPermModule& m) {
  std::vector<std::string> labels;
  for (const auto& l : m.labels()) labels.push_back(l + "^");
  return std::make_shared<SignedPermModule>(m.group_ptr(), m.ring(), m.images(), m.signs(), std::move(labels));
}

ModulePtr base_change_module(const SignedPermModule& m, const Ring& ring) {
  return std::make_shared<SignedPermModule>(m.group_ptr(), ring, m.images(), m.signs(), m.labels());
}

ModulePtr restrict_module(const SignedPermModule& m, const GroupHom& f) {
  if (!same_group(*f.target, m.group())) throw PreconditionError("restriction along a map into a different group");
  int ord = f.source->order();
  std::vector<std::vector<int>> image(ord), sign(ord);
  for (int h = 0; h < ord; ++h) {
    image[h] = m.images()[f.map[h]];
    sign[h] = m.signs()[f.map[h]];
  }
  return std::make_shared<SignedPermModule>(f.source, m.ring(), std::move(image), std::move(sign), m.labels());
}

ModulePtr induce_module(const SignedPermModule& m, const GroupHom& f) {
  if (!same_group(*f.source, m.group())) throw PreconditionError("induction along a map from a different group");
  if (!f.is_injective()) throw PreconditionError("induction along a non-injective map");
  const Group& g = *f.target;
  Subgroup img = f.image();
  auto cosets = img.left_cosets();
  int k = static_cast<int>(cosets.size()), r = m.rank();
  std::vector<int> which(g.order());
  for (int c = 0; c < k; ++c)
    for (int x : cosets[c]) which[x] = c;
  std::vector<int> pre(g.order(), -1);
  for (int h = 0; h < f.source->order(); ++h) pre[f.map[h]] = h;
  std::vector<std::vector<int>> image(g.order(), std::vector<int>(k * r)), sign(g.order(), std::vector<int>(k * r));
  for (int x = 0; x < g.order(); ++x)
    for (int c = 0; c < k; ++c) {
      int y = g.mul(x, cosets[c][0]);
      int d = which[y];
      int h = pre[g.mul(g.inv(cosets[d][0]), y)];
      for (int i = 0; i < r; ++i) {
        image[x][c * r + i] = d * r + m.image(h, i);
        sign[x][c * r + i] = m.sign(h, i);
      }
    }
  std::vector<std::string> labels;
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < r; ++i) labels.push_back("g" + std::to_string(cosets[c][0]) + "." + m.labels()[i]);
  return std::make_shared<SignedPermModule>(f.target, m.ring(), std::move(image), std::move(sign), std::move(labels));
}

bool is_equivariant(const Matrix& f, const SignedPermModule& source, const SignedPermModule& target) {
  if (f.rows() != static_cast<std::size_t>(target.rank()) || f.cols() != static_cast<std::size_t>(source.rank())) return false;
  const Ring& ring = target.ring();
  for (int g : source.group().generators())
    for (std::size_t j = 0; j < f.rows(); ++j)
      for (std::size_t i = 0; i < f.cols(); ++i) {
        const Scalar& x = f(j, i);
        if (sgn(x) == 0) continue;
        int s = target.sign(g, static_cast<int>(j)) * source.sign(g, static_cast<int>(i));
        const Scalar& y = f(target.image(g, static_cast<int>(j)), source.image(g, static_cast<int>(i)));
        if (ring.normalize(y) != ring.normalize(s == 1 ? x : Scalar(-x))) return false;
      }
  return true;
}

Matrix HomBasis::element(std::size_t k) const {
  Matrix m(rows, cols);
  for (std::size_t t = 0; t < positions[k].size(); ++t) m(positions[k][t].first, positions[k][t].second) = signs[k][t];
  return m;
}

Matrix HomBasis::combination(const Vector& c) const {
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (sgn(c[k]) == 0) continue;
    for (std::size_t t = 0; t < positions[k].size(); ++t)
      m(positions[k][t].first, positions[k][t].second) = signs[k][t] == 1 ? c[k] : Scalar(-c[k]);
  }
  return m;
}

Vector HomBasis::coordinates(const Matrix& f) const {
  Vector c(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) c[k] = f(positions[k][0].first, positions[k][0].second);
  return c;
}

HomBasis equivariant_hom_basis(const SignedPermModule& source, const SignedPermModule& target) {
  if (!same_group(source.group(), target.group())) throw PreconditionError("Hom between modules over different groups");
  HomBasis hb;
  hb.rows = target.rank();
  hb.cols = source.rank();
  int r = hb.rows, c = hb.cols;
  std::vector<int> state(static_cast<std::size_t>(r) * c, 0);  // 0 unseen, else +-1
  const auto& gens = source.group().generators();
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < c; ++i) {
      if (state[static_cast<std::size_t>(j) * c + i] != 0) continue;
      std::vector<std::pair<int, int>> pos{{j, i}};
      std::vector<int> sg{1};
      state[static_cast<std::size_t>(j) * c + i] = 1;
      bool consistent = true;
      for (std::size_t q = 0; q < pos.size(); ++q) {
        auto [a, b] = pos[q];
        int s = sg[q];
        for (int g : gens) {
          int a2 = target.image(g, a), b2 = source.image(g, b);
          int s2 = s * target.sign(g, a) * source.sign(g, b);
          int& st = state[static_cast<std::size_t>(a2) * c + b2];
          if (st == 0) {
            st = s2;
            pos.emplace_back(a2, b2);
            sg.push_back(s2);
          } else if (st != s2) {
            consistent = false;
          }
        }
      }
      if (consistent) {
        hb.positions.push_back(std::move(pos));
        hb.signs.push_back(std::move(sg));
      }
    }
  return hb;
}

SignDecomposition sign_decompose(const SignedPermModule& m, const Subgroup& h) {
  if (!same_group(h.group(), m.group())) throw PreconditionError("sign decomposition along a subgroup of another group");
  if (h.index() != 2) throw PreconditionError("sign decomposition needs an index-2 subgroup");
  SignDecomposition out;
  std::vector<ModulePtr> plus, minus;
  for (std::size_t oi = 0; oi < m.orbits().size(); ++oi) {
    const auto& o = m.orbits()[oi];
    if (o.character_trivial()) {
      out.plus_orbits.push_back(static_cast<int>(oi));
      plus.push_back(perm_module(o.stabilizer, m.ring()));
      continue;
    }
    std::uint64_t sgn_kernel = o.stabilizer.mask() & h.mask();
    if (o.character_kernel != sgn_kernel)
      throw PreconditionError("orbit character is neither trivial nor the restricted sign character");
    out.minus_orbits.push_back(static_cast<int>(oi));
    minus.push_back(perm_module(o.stabilizer, m.ring()));
  }
  out.plus = plus.empty() ? SignedPermModule::zero(m.group_ptr(), m.ring()) : direct_sum(plus);
  out.minus = minus.empty() ? SignedPermModule::zero(m.group_ptr(), m.ring()) : direct_sum(minus);
  out.sign_twisted = tensor_module(*sign_module(h, m.ring()), *out.minus);
  int n = m.rank();
  out.iso = Matrix(n, n);
  int col = 0;
  auto place = [&](const std::vector<int>& orbit_ids, bool twisted) {
    for (int oi : orbit_ids) {
      const auto& o = m.orbits()[oi];
      for (const auto& coset : o.stabilizer.left_cosets()) {
        int x = coset[0];
        int s = m.sign(x, o.representative);
        if (twisted && !h.contains(x)) s = -s;
        out.iso(m.image(x, o.representative), col++) = m.ring().normalize(Scalar(s));
      }
    }
  };
  place(out.plus_orbits, false);
  place(out.minus_orbits, true);
  return out;
}

Rebase rebase_to_permutation(const SignedPermModule& m) {
  if (!m.is_permutation_up_to_signs()) throw PreconditionError("module has an orbit with nontrivial character");
  std::vector<ModulePtr> parts;
  for (const auto& o : m.orbits()) parts.push_back(perm_module(o.stabilizer, m.ring()));
  Rebase r;
  r.module = parts.empty() ? SignedPermModule::zero(m.group_ptr(), m.ring()) : direct_sum(parts);
  int n = m.rank();
  r.iso = Matrix(n, n);
  int col = 0;
  for (const auto& o : m.orbits())
    for (const auto& coset : o.stabilizer.left_cosets()) {
      int x = coset[0];
      r.iso(m.image(x, o.representative), col++) = m.ring().normalize(Scalar(m.sign(x, o.representative)));
    }
  return r;
}

}  // namespace ttperm
