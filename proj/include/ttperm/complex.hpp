#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ttperm/module.hpp"

namespace ttperm {

class Complex;
using ComplexPtr = std::shared_ptr<const Complex>;

// Bounded chain complex of signed permutation modules, homological grading.
class Complex {
 public:
  // terms[k] sits in degree lo + k; diffs[k] is d_{lo+k+1} : terms[k+1] -> terms[k].
  // Zero terms at either end are trimmed.
  Complex(GroupPtr group, Ring ring, int lo, std::vector<ModulePtr> terms, std::vector<Matrix> diffs);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool is_zero() const { return terms_.empty(); }

  const ModulePtr& term(int n) const;
  int rank(int n) const { return term(n)->rank(); }
  // d_n : C_n -> C_{n-1}
  const Matrix& d(int n) const;
  int total_rank() const;
  bool all_permutation() const;
  std::string summary() const;

 private:
  GroupPtr group_;
  Ring ring_;
  int lo_ = 0;
  std::vector<ModulePtr> terms_;
  std::vector<Matrix> diffs_;  // d_n for n in [lo, hi+1]
  ModulePtr zero_;
  Matrix empty_;
};

ComplexPtr make_complex(GroupPtr group, Ring ring, int lo, std::vector<ModulePtr> terms, std::vector<Matrix> diffs);
ComplexPtr unit_complex(GroupPtr group, Ring ring);
ComplexPtr zero_complex(GroupPtr group, Ring ring);
ComplexPtr concentrated(ModulePtr m, int degree);

// Offsets of the summands X_i (x) Y_{n-i} inside (X (x) Y)_n, i ascending.
struct TensorLayout {
  int x_lo, x_hi, y_lo, y_hi;
  std::vector<int> x_ranks, y_ranks;
  int first(int n) const;  // smallest i with a summand
  int last(int n) const;
  int offset(int n, int i) const;
};
TensorLayout tensor_layout(const Complex& x, const Complex& y);

ComplexPtr tensor(const Complex& x, const Complex& y);
ComplexPtr tensor_all(const std::vector<ComplexPtr>& factors);
// X[s]_n = X_{n-s}, differential scaled by (-1)^s
ComplexPtr shift(const Complex& x, int s);
// (X*)_n = (X_{-n})^*, d*_n = (-1)^n (d_{1-n})^T
ComplexPtr dual(const Complex& x);
ComplexPtr base_change(const Complex& x, const Ring& ring);
ComplexPtr restrict_complex(const Complex& x, const GroupHom& f);
ComplexPtr induce_complex(const Complex& x, const GroupHom& f);
ComplexPtr direct_sum(const Complex& x, const Complex& y);
bool same_complex(const Complex& a, const Complex& b);

// Degree-0 equivariant chain map.
struct ChainMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<Matrix> components;  // components[k] acts on source degree source->lo() + k

  Matrix at(int n) const;
};

// Validates shapes, equivariance and commutation with the differentials.
ChainMap make_chain_map(ComplexPtr source, ComplexPtr target, std::vector<Matrix> components);
ChainMap make_chain_map_at(ComplexPtr source, ComplexPtr target, const std::vector<std::pair<int, Matrix>>& comps);
ChainMap identity_map(ComplexPtr x);
ChainMap zero_map(ComplexPtr source, ComplexPtr target);
ChainMap compose(const ChainMap& f, const ChainMap& g);  // f after g
ChainMap subtract(const ChainMap& f, const ChainMap& g);
ChainMap scale(const Scalar& s, const ChainMap& f);
ChainMap tensor_maps(const ChainMap& f, const ChainMap& g);
ChainMap restrict_map(const ChainMap& f, const GroupHom& h);
ChainMap base_change_map(const ChainMap& f, const Ring& ring);
ChainMap shift_map(const ChainMap& f, int s);
// cone_n = X_{n-1} (+) Y_n, d(x,y) = (-dx, f x + dy)
ComplexPtr cone(const ChainMap& f);
bool is_chain_map(const Complex& source, const Complex& target, const std::vector<Matrix>& comps, int lo);

}  // namespace ttperm
