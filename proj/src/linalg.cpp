#include "ttperm/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>

namespace ttperm {

namespace {

struct Overflow {};

struct I64Dom {
  using T = std::int64_t;
  static constexpr bool field = false;
  T from(const Scalar& x) const {
    if (!x.get_num().fits_slong_p()) throw Overflow{};
    return x.get_num().get_si();
  }
  Scalar to(T x) const { return Scalar(static_cast<long>(x)); }
  bool zero(T x) const { return x == 0; }
  T add(T a, T b) const {
    T r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  T sub(T a, T b) const {
    T r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  T mul(T a, T b) const {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  T neg(T a) const { return sub(0, a); }
  std::uint64_t norm(T x) const { return x < 0 ? std::uint64_t(0) - std::uint64_t(x) : std::uint64_t(x); }
  T quo(T a, T b) const {
    if (a == std::numeric_limits<T>::min()) throw Overflow{};
    return a / b;
  }
  bool divides(T b, T a) const { return a % b == 0; }
  T unit_of(T x) const { return x < 0 ? -1 : 1; }
  T unit_inv(T u) const { return u; }
};

struct MpzDom {
  using T = mpz_class;
  static constexpr bool field = false;
  T from(const Scalar& x) const { return x.get_num(); }
  Scalar to(const T& x) const { return Scalar(x); }
  bool zero(const T& x) const { return sgn(x) == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  T norm(const T& x) const { return abs(x); }
  T quo(const T& a, const T& b) const {
    T q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  bool divides(const T& b, const T& a) const { return mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0; }
  T unit_of(const T& x) const { return sgn(x) < 0 ? T(-1) : T(1); }
  T unit_inv(const T& u) const { return u; }
};

struct FpDom {
  using T = std::int64_t;
  static constexpr bool field = true;
  std::int64_t p;
  T from(const Scalar& x) const {
    mpz_class v = x.get_num() % p;
    if (v < 0) v += p;
    return v.get_si();
  }
  Scalar to(T x) const { return Scalar(static_cast<long>(x)); }
  bool zero(T x) const { return x == 0; }
  T add(T a, T b) const { return (a + b) % p; }
  T sub(T a, T b) const { return ((a - b) % p + p) % p; }
  T mul(T a, T b) const { return (a * b) % p; }
  T neg(T a) const { return (p - a) % p; }
  int norm(T x) const { return x == 0 ? 0 : (x == 1 ? 1 : 2); }
  T inv(T a) const {
    T r = 1, b = a, e = p - 2;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  T quo(T a, T b) const { return mul(a, inv(b)); }
  bool divides(T, T) const { return true; }
  T unit_of(T x) const { return inv(x); }
  T unit_inv(T u) const { return inv(u); }
};

struct QDom {
  using T = mpq_class;
  static constexpr bool field = true;
  T from(const Scalar& x) const { return x; }
  Scalar to(const T& x) const { return x; }
  bool zero(const T& x) const { return sgn(x) == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  std::size_t norm(const T& x) const {
    return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
  }
  T quo(const T& a, const T& b) const { return a / b; }
  bool divides(const T&, const T&) const { return true; }
  T unit_of(const T& x) const { return 1 / x; }
  T unit_inv(const T& u) const { return 1 / u; }
};

template <class D>
struct Dense {
  using T = typename D::T;
  std::size_t rows = 0, cols = 0;
  std::vector<T> v;
  Dense() = default;
  Dense(std::size_t r, std::size_t c, const D& d) : rows(r), cols(c), v(r * c, d.from(Scalar(0))) {}
  T& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  const T& at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

template <class D>
Dense<D> to_dense(const Matrix& a, const D& d) {
  Dense<D> m(a.rows(), a.cols(), d);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) != 0) m.at(i, j) = d.from(a(i, j));
  return m;
}

template <class D>
Dense<D> identity_dense(std::size_t n, const D& d) {
  Dense<D> m(n, n, d);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = d.from(Scalar(1));
  return m;
}

template <class D>
Matrix to_matrix(const Dense<D>& m, const D& d) {
  Matrix a(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (!d.zero(m.at(i, j))) a(i, j) = d.to(m.at(i, j));
  return a;
}

template <class D>
Dense<D> mul_dense(const Dense<D>& a, const Dense<D>& b, const D& d) {
  Dense<D> c(a.rows, b.cols, d);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const auto& x = a.at(i, k);
      if (d.zero(x)) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        if (!d.zero(b.at(k, j))) c.at(i, j) = d.add(c.at(i, j), d.mul(x, b.at(k, j)));
    }
  return c;
}

// Diagonalisation L * A * R = D by unimodular row and column operations.
template <class D>
struct Diagonalizer {
  using T = typename D::T;
  const D& d;
  Dense<D> m;
  bool want_l, want_li, want_r, want_ri, divisibility;
  Dense<D> l, li, r, ri;
  std::size_t rank = 0;

  Diagonalizer(const D& dom, const Matrix& a, bool left, bool left_inv, bool right, bool right_inv, bool div)
      : d(dom),
        m(to_dense(a, dom)),
        want_l(left),
        want_li(left_inv),
        want_r(right),
        want_ri(right_inv),
        divisibility(div) {
    if (want_l) l = identity_dense(m.rows, d);
    if (want_li) li = identity_dense(m.rows, d);
    if (want_r) r = identity_dense(m.cols, d);
    if (want_ri) ri = identity_dense(m.cols, d);
  }

  // row_i += q * row_j
  void row_add(std::size_t i, std::size_t j, const T& q) {
    for (std::size_t c = 0; c < m.cols; ++c)
      if (!d.zero(m.at(j, c))) m.at(i, c) = d.add(m.at(i, c), d.mul(q, m.at(j, c)));
    if (want_l)
      for (std::size_t c = 0; c < l.cols; ++c)
        if (!d.zero(l.at(j, c))) l.at(i, c) = d.add(l.at(i, c), d.mul(q, l.at(j, c)));
    if (want_li)
      for (std::size_t c = 0; c < li.rows; ++c)
        if (!d.zero(li.at(c, i))) li.at(c, j) = d.sub(li.at(c, j), d.mul(q, li.at(c, i)));
  }

  // col_i += q * col_j
  void col_add(std::size_t i, std::size_t j, const T& q) {
    for (std::size_t c = 0; c < m.rows; ++c)
      if (!d.zero(m.at(c, j))) m.at(c, i) = d.add(m.at(c, i), d.mul(q, m.at(c, j)));
    if (want_r)
      for (std::size_t c = 0; c < r.rows; ++c)
        if (!d.zero(r.at(c, j))) r.at(c, i) = d.add(r.at(c, i), d.mul(q, r.at(c, j)));
    if (want_ri)
      for (std::size_t c = 0; c < ri.cols; ++c)
        if (!d.zero(ri.at(i, c))) ri.at(j, c) = d.sub(ri.at(j, c), d.mul(q, ri.at(i, c)));
  }

  static void swap_rows_of(Dense<D>& x, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < x.cols; ++c) std::swap(x.at(i, c), x.at(j, c));
  }
  static void swap_cols_of(Dense<D>& x, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < x.rows; ++c) std::swap(x.at(c, i), x.at(c, j));
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_rows_of(m, i, j);
    if (want_l) swap_rows_of(l, i, j);
    if (want_li) swap_cols_of(li, i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_cols_of(m, i, j);
    if (want_r) swap_cols_of(r, i, j);
    if (want_ri) swap_rows_of(ri, i, j);
  }

  void scale_row(std::size_t i, const T& u) {
    T ui = d.unit_inv(u);
    for (std::size_t c = 0; c < m.cols; ++c)
      if (!d.zero(m.at(i, c))) m.at(i, c) = d.mul(u, m.at(i, c));
    if (want_l)
      for (std::size_t c = 0; c < l.cols; ++c)
        if (!d.zero(l.at(i, c))) l.at(i, c) = d.mul(u, l.at(i, c));
    if (want_li)
      for (std::size_t c = 0; c < li.rows; ++c)
        if (!d.zero(li.at(c, i))) li.at(c, i) = d.mul(li.at(c, i), ui);
  }

  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    decltype(d.norm(m.at(0, 0))) best{};
    for (std::size_t i = t; i < m.rows; ++i)
      for (std::size_t j = t; j < m.cols; ++j) {
        const auto& x = m.at(i, j);
        if (d.zero(x)) continue;
        auto n = d.norm(x);
        if (!found || n < best) {
          found = true;
          best = n;
          pi = i;
          pj = j;
          if (D::field && n <= 1) return true;
        }
      }
    return found;
  }

  void run() {
    std::size_t lim = std::min(m.rows, m.cols);
    for (std::size_t t = 0; t < lim; ++t) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      for (;;) {
        bool dirty = false;
        for (std::size_t i = t + 1; i < m.rows; ++i) {
          if (d.zero(m.at(i, t))) continue;
          T q = d.quo(m.at(i, t), m.at(t, t));
          row_add(i, t, d.neg(q));
          if (!d.zero(m.at(i, t))) dirty = true;
        }
        for (std::size_t j = t + 1; j < m.cols; ++j) {
          if (d.zero(m.at(t, j))) continue;
          T q = d.quo(m.at(t, j), m.at(t, t));
          col_add(j, t, d.neg(q));
          if (!d.zero(m.at(t, j))) dirty = true;
        }
        if (dirty) {
          auto best = d.norm(m.at(t, t));
          std::size_t bi = t, bj = t;
          for (std::size_t i = t + 1; i < m.rows; ++i)
            if (!d.zero(m.at(i, t)) && d.norm(m.at(i, t)) < best) {
              best = d.norm(m.at(i, t));
              bi = i;
              bj = t;
            }
          for (std::size_t j = t + 1; j < m.cols; ++j)
            if (!d.zero(m.at(t, j)) && d.norm(m.at(t, j)) < best) {
              best = d.norm(m.at(t, j));
              bi = t;
              bj = j;
            }
          swap_rows(t, bi);
          swap_cols(t, bj);
          continue;
        }
        if (divisibility && !D::field) {
          bool fixed = false;
          for (std::size_t i = t + 1; i < m.rows && !fixed; ++i)
            for (std::size_t j = t + 1; j < m.cols; ++j)
              if (!d.zero(m.at(i, j)) && !d.divides(m.at(t, t), m.at(i, j))) {
                row_add(t, i, d.from(Scalar(1)));
                fixed = true;
                break;
              }
          if (fixed) continue;
        }
        break;
      }
      scale_row(t, d.unit_of(m.at(t, t)));
      rank = t + 1;
    }
  }
};

template <class F>
auto with_domain(const Ring& ring, F&& f) {
  switch (ring.kind()) {
    case Ring::Kind::PrimeField: return f(FpDom{ring.characteristic()});
    case Ring::Kind::Rationals: return f(QDom{});
    case Ring::Kind::Integers: break;
  }
  try {
    return f(I64Dom{});
  } catch (const Overflow&) {
    return f(MpzDom{});
  }
}

template <class D>
std::optional<Matrix> solve_in(const D& d, const Matrix& a, const Matrix& b) {
  Diagonalizer<D> z(d, a, true, false, true, false, false);
  z.run();
  Dense<D> lb = mul_dense(z.l, to_dense(b, d), d);
  Dense<D> y(a.cols(), b.cols(), d);
  for (std::size_t i = 0; i < lb.rows; ++i)
    for (std::size_t j = 0; j < lb.cols; ++j) {
      const auto& x = lb.at(i, j);
      if (d.zero(x)) continue;
      if (i >= z.rank) return std::nullopt;
      if (!d.divides(z.m.at(i, i), x)) return std::nullopt;
      y.at(i, j) = d.quo(x, z.m.at(i, i));
    }
  return to_matrix(mul_dense(z.r, y, d), d);
}

}  // namespace

Matrix SmithForm::D() const {
  Matrix out(U.rows(), V.rows());
  for (std::size_t i = 0; i < diagonal.size(); ++i) out(i, i) = diagonal[i];
  return out;
}

SmithForm smith_form(const Matrix& a, const Ring& ring, bool transforms) {
  Matrix an = reduce(a, ring);
  return with_domain(ring, [&](const auto& d) {
    using D = std::decay_t<decltype(d)>;
    Diagonalizer<D> z(d, an, transforms, transforms, transforms, transforms, true);
    z.run();
    SmithForm s;
    s.rank = z.rank;
    for (std::size_t i = 0; i < z.rank; ++i) s.diagonal.push_back(d.to(z.m.at(i, i)));
    if (transforms) {
      s.U = to_matrix(z.li, d);
      s.Uinv = to_matrix(z.l, d);
      s.V = to_matrix(z.ri, d);
      s.Vinv = to_matrix(z.r, d);
    }
    return s;
  });
}

std::size_t rank(const Matrix& a, const Ring& ring) {
  Matrix an = reduce(a, ring);
  return with_domain(ring, [&](const auto& d) {
    using D = std::decay_t<decltype(d)>;
    Diagonalizer<D> z(d, an, false, false, false, false, false);
    z.run();
    return z.rank;
  });
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const Ring& ring) {
  if (a.rows() != b.rows()) throw PreconditionError("solve: row mismatch");
  Matrix an = reduce(a, ring), bn = reduce(b, ring);
  auto x = with_domain(ring, [&](const auto& d) { return solve_in(d, an, bn); });
  if (!x) return x;
  return reduce(*x, ring);
}

std::optional<Vector> solve(const Matrix& a, const Vector& b, const Ring& ring) {
  Matrix bm(b.size(), 1);
  bm.set_column(0, b);
  auto x = solve(a, bm, ring);
  if (!x) return std::nullopt;
  return x->column(0);
}

Matrix kernel(const Matrix& a, const Ring& ring) {
  Matrix an = reduce(a, ring);
  return with_domain(ring, [&](const auto& d) {
    using D = std::decay_t<decltype(d)>;
    Diagonalizer<D> z(d, an, false, false, true, false, false);
    z.run();
    Matrix r = to_matrix(z.r, d);
    return r.block(0, z.rank, r.rows(), r.cols() - z.rank);
  });
}

std::string Presentation::str(const Ring& ring) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (free_rank > 0) {
    sep();
    os << ring.name();
    if (free_rank > 1) os << "^" << free_rank;
  }
  for (const auto& t : torsion) {
    sep();
    os << ring.name() << "/" << t.get_str();
  }
  return os.str();
}

Vector HomologyData::coordinates(const Vector& cycle, const Ring& ring) const {
  Vector c = reduce(coordinate_map * cycle, ring);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(orders[i]) == 0) continue;
    mpz_class r = c[i].get_num() % orders[i].get_num();
    if (r < 0) r += orders[i].get_num();
    c[i] = r;
  }
  return c;
}

bool HomologyData::is_boundary(const Vector& cycle, const Ring& ring) const {
  return ttperm::is_zero(coordinates(cycle, ring));
}

HomologyData homology(const Matrix& d_out, const Matrix& d_in, std::size_t dim, const Ring& ring) {
  if (d_out.cols() != dim || d_in.rows() != dim) throw PreconditionError("homology: dimension mismatch");
  HomologyData h;
  SmithForm s1 = smith_form(d_out, ring, true);
  std::size_t k = dim - s1.rank;
  // kernel basis: columns rank.. of Vinv; coordinates: rows rank.. of V
  Matrix kb = s1.Vinv.block(0, s1.rank, dim, k);
  Matrix proj = s1.V.block(s1.rank, 0, k, dim);
  Matrix bc = reduce(proj * d_in, ring);
  SmithForm s2 = smith_form(bc, ring, true);
  // bc = U2 D2 V2, so the quotient Z^k/im(bc) has coordinates y = Uinv2 x.
  Matrix gens_x = s2.U;
  Matrix coord_x = s2.Uinv;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k; ++i) {
    if (i < s2.rank) {
      if (ring.is_unit(s2.diagonal[i])) continue;
      h.presentation.torsion.push_back(s2.diagonal[i]);
      h.orders.push_back(s2.diagonal[i]);
    } else {
      ++h.presentation.free_rank;
      h.orders.push_back(0);
    }
    keep.push_back(i);
  }
  Matrix full_coord = reduce(coord_x * proj, ring);
  h.coordinate_map = full_coord.select_rows(keep);
  for (std::size_t i : keep) h.generators.push_back(reduce(kb * gens_x.column(i), ring));
  return h;
}

Matrix hermite_rows(const Matrix& a, const Ring& ring) {
  Matrix m = reduce(a, ring);
  std::size_t rows = m.rows(), cols = m.cols();
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    if (ring.is_field()) {
      std::size_t piv = rows;
      for (std::size_t i = lead; i < rows; ++i)
        if (sgn(m(i, c)) != 0) {
          piv = i;
          break;
        }
      if (piv == rows) continue;
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(lead, j), m(piv, j));
      Scalar inv = ring.normalize(1 / m(lead, c));
      for (std::size_t j = 0; j < cols; ++j) m(lead, j) = ring.normalize(m(lead, j) * inv);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == lead || sgn(m(i, c)) == 0) continue;
        Scalar f = m(i, c);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = ring.normalize(m(i, j) - f * m(lead, j));
      }
      ++lead;
      continue;
    }
    // Euclid on column c among rows lead..
    for (;;) {
      std::size_t piv = rows;
      for (std::size_t i = lead; i < rows; ++i)
        if (sgn(m(i, c)) != 0 && (piv == rows || abs(m(i, c)) < abs(m(piv, c)))) piv = i;
      if (piv == rows) break;
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(lead, j), m(piv, j));
      bool done = true;
      for (std::size_t i = lead + 1; i < rows; ++i) {
        if (sgn(m(i, c)) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_num_mpz_t(), m(lead, c).get_num_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(lead, j);
        if (sgn(m(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (lead >= rows || sgn(m(lead, c)) == 0) continue;
    if (sgn(m(lead, c)) < 0)
      for (std::size_t j = 0; j < cols; ++j) m(lead, j) = -m(lead, j);
    for (std::size_t i = 0; i < lead; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_num_mpz_t(), m(lead, c).get_num_mpz_t());
      for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(lead, j);
    }
    ++lead;
  }
  return m.block(0, 0, lead, cols);
}

}  // namespace ttperm
