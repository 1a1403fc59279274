#include "ttperm/spectrum.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ttperm/ring.hpp"

namespace ttperm {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

int log_base(int order, int p) {
  int n = 0;
  while (order % p == 0) {
    order /= p;
    ++n;
  }
  if (order != 1) throw PreconditionError("not a power of " + std::to_string(p));
  return n;
}

std::string modular_name(int subgroup, const std::string& tag, int p, int n) {
  int i = n - log_base(subgroup, p);
  return (tag == "m" ? "m_" : "p_") + std::to_string(i);
}

// Ordinary part of Spc K(1, Z) with the primes in `split` realised, and the family excluding `excluded`.
void add_ordinary(SymbolicPoset& x, const std::vector<int>& split, std::vector<int> excluded) {
  int zero = x.add(SpcPoint::zero());
  for (int q : split)
    if (!std::count(excluded.begin(), excluded.end(), q)) {
      x.relate(zero, x.add(SpcPoint::ordinary(q)));
    }
  excluded.insert(excluded.end(), split.begin(), split.end());
  x.relate(zero, x.add(SpcPoint::family(excluded)));
}

// Glue the spaces along the given point maps, keeping the label of the chosen representative.
struct Gluing {
  std::vector<SymbolicPoset> spaces;
  std::vector<int> offset;
  int total = 0;

  int add(SymbolicPoset x) {
    offset.push_back(total);
    total += static_cast<int>(x.points.size());
    spaces.push_back(std::move(x));
    return static_cast<int>(spaces.size()) - 1;
  }
  const SpcPoint& point(int global) const {
    int s = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), global) - offset.begin()) - 1;
    return spaces[s].points[global - offset[s]];
  }

  // `relabel` gives each glued point's label in the colimit; members of one class must agree.
  SymbolicPoset quotient(UnionFind& uf, const std::function<SpcPoint(int)>& relabel) const {
    std::map<int, int> cls;
    std::map<std::string, int> by_label;
    SymbolicPoset out;
    std::vector<int> image(total);
    for (int i = 0; i < total; ++i) {
      int r = uf.find(i);
      if (!cls.count(r)) {
        SpcPoint rep = relabel(r);
        if (by_label.count(rep.label()))
          throw TheoryCheckFailure("two distinct colimit points share the label " + rep.label());
        cls[r] = out.add(rep);
        by_label[rep.label()] = cls[r];
      }
      image[i] = cls[r];
    }
    for (int i = 0; i < total; ++i) {
      SpcPoint here = relabel(i);
      const SpcPoint& rep = out.points[image[i]];
      bool agree = here.label() == rep.label() || (here.is_ordinary() && !rep.is_ordinary() && here.prime == rep.prime);
      if (!agree) throw TheoryCheckFailure("gluing identifies " + here.label() + " with " + rep.label());
    }
    for (std::size_t s = 0; s < spaces.size(); ++s)
      for (auto [a, b] : spaces[s].specializations) out.relate(image[offset[s] + a], image[offset[s] + b]);
    out.close();
    return out;
  }
};

void require_valid(const SymbolicPoset& x, const std::string& what) {
  auto v = validate(x);
  if (!v.ok()) throw TheoryCheckFailure(what + ": " + v.violations.front());
}

int kind_rank(SpcPoint::Kind k) {
  switch (k) {
    case SpcPoint::Kind::OrdinaryZero: return 0;
    case SpcPoint::Kind::OrdinaryPrime: return 1;
    case SpcPoint::Kind::OrdinaryFamily: return 2;
    case SpcPoint::Kind::Modular: return 3;
  }
  return 4;
}

}  // namespace

SpcPoint SpcPoint::zero() {
  SpcPoint x;
  x.name = "(0)";
  return x;
}

SpcPoint SpcPoint::ordinary(int q) {
  SpcPoint x;
  x.kind = Kind::OrdinaryPrime;
  x.prime = q;
  x.name = "(" + std::to_string(q) + ")";
  return x;
}

SpcPoint SpcPoint::family(std::vector<int> excluded) {
  SpcPoint x;
  x.kind = Kind::OrdinaryFamily;
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  x.excluded = std::move(excluded);
  x.name = "(q)";
  return x;
}

SpcPoint SpcPoint::modular(int subgroup, std::string tag, int p, std::string name) {
  SpcPoint x;
  x.kind = Kind::Modular;
  x.prime = p;
  x.subgroup = subgroup;
  x.tag = std::move(tag);
  x.name = std::move(name);
  return x;
}

std::string SpcPoint::label() const {
  switch (kind) {
    case Kind::OrdinaryZero: return "(0)";
    case Kind::OrdinaryPrime: return "(" + std::to_string(prime) + ")";
    case Kind::OrdinaryFamily: {
      std::string s = "(q), q not in {";
      for (std::size_t i = 0; i < excluded.size(); ++i) s += (i ? "," : "") + std::to_string(excluded[i]);
      return s + "}";
    }
    case Kind::Modular:
      return "P(" + (subgroup == 1 ? std::string("1") : "C" + std::to_string(subgroup)) + "," + tag + "," +
             std::to_string(prime) + ")";
  }
  return {};
}

std::string SpcPoint::kind_str() const {
  switch (kind) {
    case Kind::OrdinaryZero: return "OrdinaryZero";
    case Kind::OrdinaryPrime: return "OrdinaryPrime";
    case Kind::OrdinaryFamily: return "OrdinaryFamily";
    case Kind::Modular: return "Modular";
  }
  return {};
}

int SymbolicPoset::add(SpcPoint p) {
  points.push_back(std::move(p));
  return static_cast<int>(points.size()) - 1;
}

void SymbolicPoset::close() {
  int n = static_cast<int>(points.size());
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (auto [a, b] : specializations) r[a][b] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  specializations.clear();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (r[i][j] && i != j) specializations.emplace(i, j);
}

void SymbolicPoset::canonicalize() {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    const auto& x = points[i];
    return std::make_tuple(kind_rank(x.kind) == 3, x.prime, kind_rank(x.kind), -x.subgroup, x.tag == "m", x.label());
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<int> where(points.size());
  std::vector<SpcPoint> sorted;
  for (std::size_t i = 0; i < order.size(); ++i) {
    where[order[i]] = static_cast<int>(i);
    sorted.push_back(points[order[i]]);
  }
  std::set<std::pair<int, int>> rel;
  for (auto [a, b] : specializations) rel.emplace(where[a], where[b]);
  points = std::move(sorted);
  specializations = std::move(rel);
}

int SymbolicPoset::find_label(const std::string& label) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].label() == label) return static_cast<int>(i);
  return -1;
}

int SymbolicPoset::find_name(const std::string& name) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> SymbolicPoset::modular_primes() const {
  std::set<int> ps;
  for (const auto& x : points)
    if (!x.is_ordinary()) ps.insert(x.prime);
  return {ps.begin(), ps.end()};
}

int SymbolicPoset::modular_count(int p) const {
  return static_cast<int>(
      std::count_if(points.begin(), points.end(), [&](const SpcPoint& x) { return !x.is_ordinary() && x.prime == p; }));
}

std::set<std::pair<int, int>> SymbolicPoset::covers() const {
  std::set<std::pair<int, int>> out;
  for (auto [a, b] : specializations) {
    bool composite = false;
    for (std::size_t k = 0; k < points.size() && !composite; ++k)
      composite = specializes(a, static_cast<int>(k)) && specializes(static_cast<int>(k), b);
    if (!composite) out.emplace(a, b);
  }
  return out;
}

SymbolicPoset seed_cyclic_field(int n, int p) {
  if (n < 0) throw PreconditionError("seed needs n >= 0");
  if (!is_prime(p)) throw PreconditionError("seed needs a prime");
  SymbolicPoset x;
  std::vector<int> m, g;
  int order = 1;
  for (int i = 0; i < n; ++i) order *= p;
  for (int i = 0, o = order; i <= n; ++i, o /= p) m.push_back(x.add(SpcPoint::modular(o, "m", p, "m_" + std::to_string(i))));
  for (int i = 1, o = order / p; i <= n; ++i, o /= p) {
    g.push_back(x.add(SpcPoint::modular(o, "g", p, "p_" + std::to_string(i))));
    x.relate(g.back(), m[i - 1]);
    x.relate(g.back(), m[i]);
  }
  x.canonicalize();
  return x;
}

SymbolicPoset assemble_over_Z(int n, int p, const std::vector<int>& split) {
  SymbolicPoset x = seed_cyclic_field(n, p);
  std::size_t modular = x.points.size();
  add_ordinary(x, split, {p});
  int zero = x.find_label("(0)");
  for (std::size_t i = 0; i < modular; ++i)
    if (x.points[i].tag == "m") x.relate(zero, static_cast<int>(i));
  x.close();
  x.canonicalize();
  return x;
}

SymbolicPoset assemble_over_Z(const GroupPtr& g, const std::vector<int>& split) {
  int p = p_group_prime(*g);
  if (p == 0 || !is_cyclic(*g)) throw PreconditionError("assembly needs a nontrivial cyclic p-group");
  return assemble_over_Z(log_base(g->order(), p), p, split);
}

bool is_cyclic(const Group& g) {
  for (int a = 0; a < g.order(); ++a)
    if (g.element_order(a) == g.order()) return true;
  return false;
}

SymbolicPoset sections_colimit(const GroupPtr& g, const std::vector<int>& split) {
  int p = p_group_prime(*g);
  if (p == 0 || !is_cyclic(*g)) throw PreconditionError("sections colimit needs a nontrivial cyclic p-group");
  int n = log_base(g->order(), p);
  auto cat = sections_category(g, p);

  Gluing glue;
  std::vector<int> lower;  // |K| of each object; P(L/K, a) of a piece is P(L, a) in G
  for (const auto& s : cat.objects) {
    int index = s.upper.order() / s.lower.order();
    if (index != 1 && index != p) throw PreconditionError("section " + s.upper.describe() + "/" + s.lower.describe() + " is not cyclic of order p");
    glue.add(assemble_over_Z(index == 1 ? 0 : 1, p, split));
    lower.push_back(s.lower.order());
  }
  UnionFind uf(glue.total);
  for (const auto& mor : cat.morphisms) {
    if (mor.source == mor.target) continue;  // conjugation acts trivially on an abelian group
    const auto& s = cat.objects[mor.source];
    const auto& t = cat.objects[mor.target];
    bool s_trivial = s.upper == s.lower;
    bool t_trivial = t.upper == t.lower;
    if (!s_trivial || t_trivial) throw PreconditionError("unexpected morphism between sections of the same shape");
    // K' < K^g: fixed points along K^g/K'; otherwise K' = K^g and this is restriction from H'/K'
    bool psi = t.lower.order() < s.lower.order();
    const auto& src = glue.spaces[mor.source];
    const auto& dst = glue.spaces[mor.target];
    for (std::size_t i = 0; i < src.points.size(); ++i) {
      const auto& x = src.points[i];
      int j = x.is_ordinary() ? dst.find_label(x.label())
                              : dst.find_name("m_" + std::to_string(psi ? kPsiEndpoint : kRhoEndpoint));
      uf.unite(glue.offset[mor.source] + static_cast<int>(i), glue.offset[mor.target] + j);
    }
  }
  auto out = glue.quotient(uf, [&](int global) {
    int s = static_cast<int>(std::upper_bound(glue.offset.begin(), glue.offset.end(), global) - glue.offset.begin()) - 1;
    SpcPoint x = glue.point(global);
    if (!x.is_ordinary()) {
      x.subgroup *= lower[s];
      x.name = modular_name(x.subgroup, x.tag, p, n);
    }
    return x;
  });
  out.canonicalize();
  require_valid(out, "sections colimit of " + g->name());
  return out;
}

SymbolicPoset orbit_colimit(const GroupPtr& g, const std::vector<int>& split) {
  if (!is_cyclic(*g)) throw PreconditionError("orbit colimit needs a cyclic group");
  auto primes = prime_divisors(g->order());
  // isotropy: the prime-power subgroups, one per order
  std::vector<std::pair<int, int>> objects{{1, 0}};
  for (int p : primes)
    for (int d = p; g->order() % d == 0; d *= p) objects.emplace_back(d, p);

  Gluing glue;
  for (auto [d, p] : objects) {
    if (d == 1) {
      SymbolicPoset x;
      add_ordinary(x, split, primes);
      int zero = x.find_label("(0)");
      for (int q : primes) x.relate(zero, x.add(SpcPoint::modular(1, "m", q, "m_0")));
      glue.add(std::move(x));
    } else {
      std::vector<int> others = split;
      for (int q : primes)
        if (q != p) others.push_back(q);
      glue.add(sections_colimit(cyclic_group(d), others));
    }
  }
  // restriction along H <= H'; labels P(L, a, q) persist while H' is a q-group, else land on (q)
  UnionFind uf(glue.total);
  for (std::size_t a = 0; a < objects.size(); ++a)
    for (std::size_t b = 0; b < objects.size(); ++b) {
      auto [d, p] = objects[a];
      auto [e, q] = objects[b];
      if (a == b || e % d != 0 || (d != 1 && p != q)) continue;
      const auto& src = glue.spaces[a];
      const auto& dst = glue.spaces[b];
      for (std::size_t i = 0; i < src.points.size(); ++i) {
        const auto& x = src.points[i];
        std::string target = !x.is_ordinary() && x.prime != q ? SpcPoint::ordinary(x.prime).label() : x.label();
        int j = dst.find_label(target);
        if (j < 0) throw TheoryCheckFailure("restriction to " + std::to_string(e) + " misses " + target);
        uf.unite(glue.offset[a] + static_cast<int>(i), glue.offset[b] + j);
      }
    }
  // prefer a modular member as the class representative
  std::map<int, int> modular_member;
  for (int i = glue.total - 1; i >= 0; --i)
    if (!glue.point(i).is_ordinary()) modular_member[uf.find(i)] = i;
  auto out = glue.quotient(uf, [&](int global) {
    bool root = uf.find(global) == global;
    return glue.point(root && modular_member.count(global) ? modular_member[global] : global);
  });
  for (auto& x : out.points) {
    if (x.is_ordinary()) continue;
    int order = g->order();
    while (order % x.prime == 0) order /= x.prime;
    x.name = modular_name(x.subgroup, x.tag, x.prime, log_base(g->order() / order, x.prime));
    if (primes.size() > 1) x.name += "[" + std::to_string(x.prime) + "]";
  }
  out.canonicalize();
  require_valid(out, "orbit colimit of " + g->name());
  return out;
}

SpcValidation validate(const SymbolicPoset& x) {
  SpcValidation v;
  const auto& pts = x.points;
  auto name = [&](int i) { return pts[i].name + " " + pts[i].label(); };
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [it, fresh] = seen.emplace(pts[i].label(), static_cast<int>(i));
    if (!fresh) v.violations.push_back("duplicate label: " + name(it->second) + " and " + name(static_cast<int>(i)));
  }
  for (auto [a, b] : x.specializations) {
    if (a == b) {
      v.violations.push_back("reflexive pair stored: " + name(a));
      continue;
    }
    if (x.specializes(b, a) && a < b)
      v.violations.push_back("T0: " + name(a) + " and " + name(b) + " specialize to each other");
    for (auto it = x.specializations.lower_bound({b, -1}); it != x.specializations.end() && it->first == b; ++it)
      if (it->second != a && !x.specializes(a, it->second))
        v.violations.push_back("not transitive: " + name(a) + " ~> " + name(b) + " ~> " + name(it->second));
    const auto& pa = pts[a];
    const auto& pb = pts[b];
    if (pa.kind == SpcPoint::Kind::OrdinaryFamily || pa.kind == SpcPoint::Kind::OrdinaryPrime)
      v.violations.push_back("closed ordinary point specializes: " + name(a) + " ~> " + name(b));
    if (pb.kind == SpcPoint::Kind::OrdinaryFamily && pa.kind != SpcPoint::Kind::OrdinaryZero)
      v.violations.push_back("family point has an internal relation: " + name(a) + " ~> " + name(b));
    if (!pa.is_ordinary() && (pb.is_ordinary() || pb.prime != pa.prime))
      v.violations.push_back("modular fiber not closed: " + name(a) + " ~> " + name(b));
  }
  // sober: an irreducible closed set of a finite T0 space is the closure of exactly one point
  int n = static_cast<int>(pts.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      bool same = true;
      for (int c = 0; c < n && same; ++c) {
        bool in_a = c == a || x.specializes(a, c);
        bool in_b = c == b || x.specializes(b, c);
        same = in_a == in_b;
      }
      if (same) v.violations.push_back("sober: " + name(a) + " and " + name(b) + " are generic points of one closed set");
    }
  return v;
}

bool isomorphic(const SymbolicPoset& a, const SymbolicPoset& b, bool match_labels) {
  int n = static_cast<int>(a.points.size());
  if (n != static_cast<int>(b.points.size()) || a.specializations.size() != b.specializations.size()) return false;
  auto color = [&](const SymbolicPoset& x, int i) {
    const auto& pt = x.points[i];
    std::string c = pt.kind_str() + "/" + std::to_string(pt.prime) + "/" + (match_labels ? pt.label() : pt.tag);
    int out = 0, in = 0;
    for (auto [s, t] : x.specializations) {
      out += s == i;
      in += t == i;
    }
    return c + "/" + std::to_string(out) + "/" + std::to_string(in);
  };
  std::vector<std::string> ca(n), cb(n);
  for (int i = 0; i < n; ++i) {
    ca[i] = color(a, i);
    cb[i] = color(b, i);
  }
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> extend = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || ca[i] != cb[j]) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k)
        ok = a.specializes(i, k) == b.specializes(j, map[k]) && a.specializes(k, i) == b.specializes(map[k], j);
      if (!ok) continue;
      map[i] = j;
      used[j] = 1;
      if (extend(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return extend(0);
}

std::string export_dot(const SymbolicPoset& x) {
  static const std::vector<std::string> palette{"darkgreen", "blue", "purple", "darkorange", "red3"};
  auto primes = x.modular_primes();
  std::ostringstream os;
  os << "digraph spc {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    const auto& pt = x.points[i];
    std::string color = "saddlebrown";
    if (!pt.is_ordinary()) {
      auto k = std::find(primes.begin(), primes.end(), pt.prime) - primes.begin();
      color = palette[k % palette.size()];
    }
    std::string text = pt.kind == SpcPoint::Kind::OrdinaryFamily ? pt.label() : pt.name;
    os << "  n" << i << " [label=\"" << text << "\", tooltip=\"" << pt.label() << "\", fontcolor=" << color << "];\n";
  }
  for (auto [a, b] : x.covers()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

std::string export_json(const SymbolicPoset& x) {
  nlohmann::ordered_json j;
  j["points"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    const auto& pt = x.points[i];
    j["points"].push_back({{"id", i}, {"kind", pt.kind_str()}, {"label", pt.label()}, {"name", pt.name}});
  }
  j["specializations"] = nlohmann::ordered_json::array();
  for (auto [a, b] : x.specializations) j["specializations"].push_back({a, b});
  return j.dump(2);
}

}  // namespace ttperm
