#include "ttperm/group.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ttperm {

namespace {

using Table = std::vector<std::vector<int>>;

std::uint64_t bit(int i) { return std::uint64_t(1) << i; }

std::vector<int> mask_elements(std::uint64_t m) {
  std::vector<int> out;
  while (m) {
    int i = std::countr_zero(m);
    out.push_back(i);
    m &= m - 1;
  }
  return out;
}

}  // namespace

Group::Group(Table table, std::string name) : table_(std::move(table)), name_(std::move(name)) {
  int n = order();
  if (n < 1 || n > kMaxGroupOrder)
    throw PreconditionError("group order " + std::to_string(n) + " outside 1.." + std::to_string(kMaxGroupOrder));
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw PreconditionError("multiplication table is not square");
    std::vector<bool> seen(n);
    for (int x : row) {
      if (x < 0 || x >= n) throw PreconditionError("multiplication table entry out of range");
      if (seen[x]) throw PreconditionError("multiplication table is not a Latin square");
      seen[x] = true;
    }
  }
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw PreconditionError("multiplication table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw PreconditionError("multiplication table is not associative");
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;
  std::uint64_t span = bit(identity_);
  for (int a = 0; a < n; ++a) {
    if ((span >> a) & 1u) continue;
    generators_.push_back(a);
    span = closure_mask(*this, span | bit(a));
  }
}

int Group::element_order(int a) const {
  int k = 1;
  for (int x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

bool Group::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < a; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

GroupPtr cyclic_group(int n) {
  if (n < 1) throw PreconditionError("cyclic group order must be positive");
  Table t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return std::make_shared<Group>(std::move(t), n == 1 ? "1" : "C" + std::to_string(n));
}

GroupPtr direct_product(const std::vector<GroupPtr>& factors) {
  if (factors.empty()) return cyclic_group(1);
  long total = 1;
  for (const auto& f : factors) total *= f->order();
  if (total > kMaxGroupOrder) throw PreconditionError("product order exceeds " + std::to_string(kMaxGroupOrder));
  int n = static_cast<int>(total);
  // mixed radix, first factor most significant
  auto digits = [&](int x) {
    std::vector<int> d(factors.size());
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      d[i] = x % factors[i]->order();
      x /= factors[i]->order();
    }
    return d;
  };
  Table t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    auto da = digits(a);
    for (int b = 0; b < n; ++b) {
      auto db = digits(b);
      int idx = 0;
      for (std::size_t i = 0; i < factors.size(); ++i) idx = idx * factors[i]->order() + factors[i]->mul(da[i], db[i]);
      t[a][b] = idx;
    }
  }
  std::string name;
  for (std::size_t i = 0; i < factors.size(); ++i) name += (i ? "x" : "") + factors[i]->name();
  return std::make_shared<Group>(std::move(t), name);
}

GroupPtr dihedral_group(int order) {
  if (order < 2 || order % 2) throw PreconditionError("dihedral group order must be even");
  int n = order / 2;
  // r^i s^j has index i + n*j
  Table t(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      int i = a % n, j = a / n, k = b % n, l = b / n;
      int r = (i + (j ? n - k : k)) % n;
      t[a][b] = r + n * ((j + l) % 2);
    }
  return std::make_shared<Group>(std::move(t), "D" + std::to_string(order));
}

GroupPtr quaternion_group() {
  // 2u + s encodes (-1)^s * unit[u], units 1,i,j,k
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  Table t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ua = a / 2, ub = b / 2;
      int s = (a % 2 + b % 2 + unit_sign[ua][ub]) % 2;
      t[a][b] = 2 * unit_mul[ua][ub] + s;
    }
  return std::make_shared<Group>(std::move(t), "Q8");
}

namespace {

GroupPtr from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") return cyclic_group(j.at("n").get<int>());
  if (kind == "dihedral") return dihedral_group(j.at("order").get<int>());
  if (kind == "quaternion") return quaternion_group();
  if (kind == "product") {
    std::vector<GroupPtr> fs;
    for (const auto& f : j.at("factors")) fs.push_back(from_json(f));
    return direct_product(fs);
  }
  if (kind == "table") {
    auto t = j.at("mul").get<Table>();
    std::string name = j.value("name", "G" + std::to_string(t.size()));
    return std::make_shared<Group>(std::move(t), name);
  }
  throw PreconditionError("unknown group descriptor kind '" + kind + "'");
}

GroupPtr parse_factor(std::string_view s) {
  if (s == "1") return cyclic_group(1);
  if (s == "Q8") return quaternion_group();
  if (s.size() >= 2 && (s[0] == 'C' || s[0] == 'D')) {
    int n = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw PreconditionError("bad group factor '" + std::string(s) + "'");
      n = n * 10 + (s[i] - '0');
      if (n > 1000) throw PreconditionError("group factor too large");
    }
    return s[0] == 'C' ? cyclic_group(n) : dihedral_group(n);
  }
  throw PreconditionError("bad group factor '" + std::string(s) + "'");
}

}  // namespace

GroupPtr group_from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("group descriptor is not valid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed group descriptor: ") + e.what());
  }
}

GroupPtr parse_group(std::string_view text) {
  std::string s(text);
  if (s.find(".json") != std::string::npos || s.find('/') != std::string::npos) {
    std::ifstream in(s);
    if (!in) throw PreconditionError("cannot open group descriptor '" + s + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return group_from_json_text(buf.str());
  }
  if (!s.empty() && s[0] == '{') return group_from_json_text(s);
  std::vector<GroupPtr> fs;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find('x', start);
    fs.push_back(parse_factor(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fs.size() == 1 ? fs.front() : direct_product(fs);
}

std::uint64_t closure_mask(const Group& g, std::uint64_t gens) {
  std::uint64_t m = gens | bit(g.identity());
  auto gv = mask_elements(gens);
  std::vector<int> frontier = mask_elements(m);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int y : gv) {
        int z = g.mul(x, y);
        if (!((m >> z) & 1u)) {
          m |= bit(z);
          next.push_back(z);
        }
      }
    frontier = std::move(next);
  }
  return m;
}

Subgroup::Subgroup(GroupPtr g, std::uint64_t mask) : group_(std::move(g)), mask_(mask) {
  if (group_->order() < 64 && (mask_ >> group_->order()) != 0) throw PreconditionError("subgroup mask out of range");
  elements_ = mask_elements(mask_);
  if (!contains(group_->identity())) throw PreconditionError("subset does not contain the identity");
  for (int a : elements_)
    for (int b : elements_)
      if (!contains(group_->mul(a, b))) throw PreconditionError("subset is not closed under multiplication");
}

Subgroup Subgroup::generated(GroupPtr g, const std::vector<int>& gens) {
  std::uint64_t m = 0;
  for (int x : gens) {
    if (x < 0 || x >= g->order()) throw PreconditionError("generator out of range");
    m |= bit(x);
  }
  std::uint64_t c = closure_mask(*g, m);
  return Subgroup(std::move(g), c);
}

Subgroup Subgroup::trivial(GroupPtr g) {
  std::uint64_t m = bit(g->identity());
  return Subgroup(std::move(g), m);
}

Subgroup Subgroup::whole(GroupPtr g) {
  std::uint64_t m = g->order() == 64 ? ~std::uint64_t(0) : bit(g->order()) - 1;
  return Subgroup(std::move(g), m);
}

bool Subgroup::is_normal() const { return is_normal_in(whole(group_)); }

bool Subgroup::is_normal_in(const Subgroup& o) const {
  if (!is_subgroup_of(o)) return false;
  for (int g : o.elements())
    for (int h : elements_)
      if (!contains(group_->conj(h, g))) return false;
  return true;
}

Subgroup Subgroup::conjugate(int g) const {
  std::uint64_t m = 0;
  for (int h : elements_) m |= bit(group_->conj(h, g));
  return Subgroup(group_, m);
}

Subgroup Subgroup::normalizer() const {
  std::uint64_t m = 0;
  for (int g = 0; g < group_->order(); ++g)
    if (conjugate(g).mask() == mask_) m |= bit(g);
  return Subgroup(group_, m);
}

Subgroup Subgroup::intersect(const Subgroup& o) const { return Subgroup(group_, mask_ & o.mask_); }

Subgroup Subgroup::join(const Subgroup& o) const { return Subgroup(group_, closure_mask(*group_, mask_ | o.mask_)); }

std::vector<std::vector<int>> Subgroup::left_cosets() const {
  std::vector<std::vector<int>> out;
  std::uint64_t seen = 0;
  for (int g = 0; g < group_->order(); ++g) {
    if ((seen >> g) & 1u) continue;
    std::vector<int> c;
    for (int h : elements_) c.push_back(group_->mul(g, h));
    std::sort(c.begin(), c.end());
    for (int x : c) seen |= bit(x);
    out.push_back(std::move(c));
  }
  return out;
}

int Subgroup::coset_of(int g) const {
  auto cs = left_cosets();
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (std::binary_search(cs[i].begin(), cs[i].end(), g)) return static_cast<int>(i);
  throw PreconditionError("element out of range");
}

std::string Subgroup::describe() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) os << (i ? "," : "") << elements_[i];
  os << "}";
  return os.str();
}

bool Subgroup::operator<(const Subgroup& o) const {
  if (order() != o.order()) return order() < o.order();
  return elements_ < o.elements_;
}

bool subconjugate(const Subgroup& k, const Subgroup& h) {
  for (int g = 0; g < k.group().order(); ++g)
    if (k.conjugate(g).is_subgroup_of(h)) return true;
  return false;
}

bool GroupHom::is_injective() const { return kernel().is_trivial(); }

Subgroup GroupHom::image() const {
  std::uint64_t m = 0;
  for (int x : map) m |= bit(x);
  return Subgroup(target, m);
}

Subgroup GroupHom::kernel() const {
  std::uint64_t m = 0;
  for (int g = 0; g < source->order(); ++g)
    if (map[g] == target->identity()) m |= bit(g);
  return Subgroup(source, m);
}

GroupHom make_hom(GroupPtr source, GroupPtr target, std::vector<int> map) {
  if (static_cast<int>(map.size()) != source->order()) throw PreconditionError("homomorphism table has wrong length");
  for (int x : map)
    if (x < 0 || x >= target->order()) throw PreconditionError("homomorphism value out of range");
  for (int a = 0; a < source->order(); ++a)
    for (int b = 0; b < source->order(); ++b)
      if (map[source->mul(a, b)] != target->mul(map[a], map[b]))
        throw PreconditionError("map is not a group homomorphism");
  return GroupHom{std::move(source), std::move(target), std::move(map)};
}

GroupHom identity_hom(GroupPtr g) {
  std::vector<int> m(g->order());
  for (int i = 0; i < g->order(); ++i) m[i] = i;
  return GroupHom{g, g, std::move(m)};
}

GroupHom inclusion(const Subgroup& h) {
  const auto& el = h.elements();
  int n = h.order();
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[el[i]] = i;
  Table t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = pos.at(h.group().mul(el[i], el[j]));
  auto sub = std::make_shared<Group>(std::move(t), "");
  auto named = std::make_shared<Group>(sub->table(), structure_name(*sub));
  return GroupHom{named, h.group_ptr(), el};
}

GroupHom quotient_map(const Subgroup& n) {
  if (!n.is_normal()) throw PreconditionError("quotient by a non-normal subgroup");
  auto cosets = n.left_cosets();
  int k = static_cast<int>(cosets.size());
  std::vector<int> proj(n.group().order());
  for (int i = 0; i < k; ++i)
    for (int x : cosets[i]) proj[x] = i;
  Table t(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) t[i][j] = proj[n.group().mul(cosets[i][0], cosets[j][0])];
  auto q = std::make_shared<Group>(std::move(t), "");
  auto named = std::make_shared<Group>(q->table(), structure_name(*q));
  return GroupHom{n.group_ptr(), named, std::move(proj)};
}

GroupHom compose(const GroupHom& f, const GroupHom& g) {
  if (g.target.get() != f.source.get() && !g.target->same_table(*f.source))
    throw PreconditionError("composing homomorphisms with mismatched groups");
  std::vector<int> m(g.source->order());
  for (int x = 0; x < g.source->order(); ++x) m[x] = f.map[g.map[x]];
  return GroupHom{g.source, f.target, std::move(m)};
}

Subgroup image_of(const GroupHom& f, const Subgroup& h) {
  std::uint64_t m = 0;
  for (int x : h.elements()) m |= bit(f.map[x]);
  return Subgroup(f.target, m);
}

Subgroup preimage_of(const GroupHom& f, const Subgroup& h) {
  std::uint64_t m = 0;
  for (int x = 0; x < f.source->order(); ++x)
    if (h.contains(f.map[x])) m |= bit(x);
  return Subgroup(f.source, m);
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> queue{bit(g->identity())};
  seen.insert(queue.front());
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint64_t m = queue[qi];
    for (int x = 0; x < g->order(); ++x) {
      if ((m >> x) & 1u) continue;
      std::uint64_t c = closure_mask(*g, m | bit(x));
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  std::vector<Subgroup> out;
  for (auto m : seen) out.emplace_back(g, m);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubgroupClass> conjugacy_classes(const GroupPtr& g) {
  auto subs = all_subgroups(g);
  std::vector<SubgroupClass> out;
  std::set<std::uint64_t> done;
  for (const auto& h : subs) {
    if (done.count(h.mask())) continue;
    std::set<std::uint64_t> cls;
    for (int x = 0; x < g->order(); ++x) cls.insert(h.conjugate(x).mask());
    std::vector<Subgroup> members;
    for (auto m : cls) {
      done.insert(m);
      members.emplace_back(g, m);
    }
    std::sort(members.begin(), members.end());
    int norm = h.normalizer().order();
    out.push_back(SubgroupClass{members.front(), members, norm, norm / h.order()});
  }
  return out;
}

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

int p_group_prime(const Group& g) {
  auto ps = prime_divisors(g.order());
  return ps.size() == 1 ? ps.front() : 0;
}

bool is_elementary_abelian(const Group& g) {
  if (g.order() == 1) return true;
  int p = p_group_prime(g);
  if (!p || !g.is_abelian()) return false;
  for (int a = 0; a < g.order(); ++a)
    if (a != g.identity() && g.element_order(a) != p) return false;
  return true;
}

bool is_elementary_abelian_section(const Subgroup& h, const Subgroup& k, int p) {
  if (!k.is_normal_in(h)) return false;
  const Group& g = h.group();
  for (int a : h.elements())
    for (int b : h.elements()) {
      // commutator and p-th power land in K
      int c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
      if (!k.contains(c)) return false;
    }
  for (int a : h.elements()) {
    int x = g.identity();
    for (int i = 0; i < p; ++i) x = g.mul(x, a);
    if (!k.contains(x)) return false;
  }
  return true;
}

std::string structure_name(const Group& g) {
  int n = g.order();
  if (n == 1) return "1";
  for (int a = 0; a < n; ++a)
    if (g.element_order(a) == n) return "C" + std::to_string(n);
  if (is_elementary_abelian(g)) {
    int p = p_group_prime(g);
    std::string s;
    for (int m = n; m > 1; m /= p) s += (s.empty() ? "" : "x") + ("C" + std::to_string(p));
    return s;
  }
  return "G" + std::to_string(n);
}

int SectionsCategory::find(const Subgroup& h, const Subgroup& k) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].upper == h && objects[i].lower == k) return static_cast<int>(i);
  return -1;
}

bool SectionsCategory::is_morphism(int source, int target, int g) const {
  const auto& a = objects[source];
  const auto& b = objects[target];
  Subgroup kg = a.lower.conjugate(g);
  Subgroup hg = a.upper.conjugate(g);
  return b.lower.is_subgroup_of(kg) && hg.is_subgroup_of(b.upper);
}

SectionsCategory sections_category(const GroupPtr& g, int p) {
  if (!is_prime(p)) throw PreconditionError("sections category needs a prime");
  SectionsCategory cat{g, p, {}, {}};
  auto subs = all_subgroups(g);
  for (const auto& h : subs)
    for (const auto& k : subs)
      if (k.is_subgroup_of(h) && is_elementary_abelian_section(h, k, p)) cat.objects.push_back(Section{h, k});
  for (std::size_t i = 0; i < cat.objects.size(); ++i)
    for (std::size_t j = 0; j < cat.objects.size(); ++j)
      for (int x = 0; x < g->order(); ++x)
        if (cat.is_morphism(static_cast<int>(i), static_cast<int>(j), x))
          cat.morphisms.push_back(SectionMorphism{static_cast<int>(i), static_cast<int>(j), x});
  return cat;
}

OrbitCategory orbit_category(const GroupPtr& g) {
  OrbitCategory oc{g, {}, {}, {}};
  for (const auto& c : conjugacy_classes(g)) oc.objects.push_back(c.representative);
  std::size_t n = oc.objects.size();
  oc.maps.assign(n, std::vector<int>(n, 0));
  oc.automorphism_orbits.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& h = oc.objects[i];
      const auto& k = oc.objects[j];
      auto cosets = k.left_cosets();
      // fixed cosets xK with h x K = x K for all h in H
      std::vector<int> fixed;
      for (std::size_t c = 0; c < cosets.size(); ++c) {
        int x = cosets[c][0];
        bool ok = true;
        for (int y : h.elements())
          if (!std::binary_search(cosets[c].begin(), cosets[c].end(), g->mul(y, x))) {
            ok = false;
            break;
          }
        if (ok) fixed.push_back(static_cast<int>(c));
      }
      oc.maps[i][j] = static_cast<int>(fixed.size());
      // W_G(K) = N_G(K)/K acts on G/K by xK -> x n^-1 K
      auto nk = k.normalizer();
      std::set<int> seen;
      int orbits = 0;
      for (int c : fixed) {
        if (seen.count(c)) continue;
        ++orbits;
        for (int m : nk.elements()) {
          int y = g->mul(cosets[c][0], g->inv(m));
          for (std::size_t d = 0; d < cosets.size(); ++d)
            if (std::binary_search(cosets[d].begin(), cosets[d].end(), y)) seen.insert(static_cast<int>(d));
        }
      }
      oc.automorphism_orbits[i][j] = orbits;
    }
  return oc;
}

}  // namespace ttperm

namespace ttperm {

Subgroup parse_subgroup(const GroupPtr& g, std::string_view text) {
  std::string s(text);
  if (s == "1") return Subgroup::trivial(g);
  if (s == "G") return Subgroup::whole(g);
  if (!s.empty() && s.front() == '{' && s.back() == '}') {
    std::vector<int> els;
    std::stringstream in(s.substr(1, s.size() - 2));
    for (std::string tok; std::getline(in, tok, ',');) {
      try {
        els.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw PreconditionError("bad element '" + tok + "' in subgroup '" + s + "'");
      }
      if (els.back() < 0 || els.back() >= g->order()) throw PreconditionError("element out of range in '" + s + "'");
    }
    Subgroup h = Subgroup::generated(g, els);
    if (h.order() != static_cast<int>(els.size()) && static_cast<int>(els.size()) > 0) {
      std::set<int> given(els.begin(), els.end());
      if (given != std::set<int>(h.elements().begin(), h.elements().end()))
        throw PreconditionError("'" + s + "' is not closed; it generates " + h.describe());
    }
    return h;
  }
  std::vector<Subgroup> hits;
  for (const auto& h : all_subgroups(g))
    if (structure_name(*inclusion(h).source) == s) hits.push_back(h);
  if (hits.size() == 1) return hits.front();
  if (hits.empty()) throw PreconditionError("no subgroup of " + g->name() + " is " + s);
  std::string all;
  for (const auto& h : hits) all += " " + h.describe();
  throw PreconditionError("subgroup " + s + " of " + g->name() + " is ambiguous; pick one of" + all);
}

}  // namespace ttperm
