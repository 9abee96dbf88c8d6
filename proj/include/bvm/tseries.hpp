#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bvm/element.hpp"
#include "bvm/hbar_poly.hpp"

namespace bvm {

// Sorted multiset of coupling indices; {0, 1, 1} stands for t^0 (t^1)^2.
using TKey = std::vector<int>;

TKey merge_keys(const TKey& a, const TKey& b);
// Product of factorials of the index multiplicities: the factor between a
// symmetric tensor entry and the coefficient of the matching t-monomial.
Rational multiplicity_factor(const TKey& key);
std::string key_to_string(const TKey& key);

// Polynomial in even couplings t^alpha with HbarPoly coefficients.
class TSeries {
 public:
  using TermMap = std::map<TKey, HbarPoly>;

  TSeries() = default;
  explicit TSeries(TablePtr table) : table_(std::move(table)) {}
  static TSeries monomial(TablePtr table, TKey key, HbarPoly coeff);

  const TablePtr& table() const noexcept { return table_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  HbarPoly coefficient(const TKey& key) const;
  void add(const TKey& key, const HbarPoly& c);

  TSeries& operator+=(const TSeries& other);
  TSeries& operator-=(const TSeries& other);
  TSeries& operator*=(const Rational& c);
  TSeries operator-() const;
  friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
  friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
  friend TSeries operator*(TSeries a, const Rational& c) { return a *= c; }
  friend TSeries operator*(const Rational& c, TSeries a) { return a *= c; }
  friend TSeries operator*(const TSeries& a, const TSeries& b);
  bool operator==(const TSeries& other) const { return terms_ == other.terms_; }

  // Multiply every coefficient by an hbar-polynomial.
  TSeries times(const HbarPoly& c) const;
  TSeries shifted(int k) const;
  TSeries divided_by_hbar() const;
  // d/dt^index
  TSeries partial(int index) const;
  // Apply a coefficientwise linear map.
  TSeries map(const std::function<HbarPoly(const HbarPoly&)>& f) const;
  // Terms whose word length equals / is below a bound.
  TSeries layer(int length) const;
  TSeries truncated(int max_length) const;
  TSeries hbar_part(int power) const;

  std::string to_string() const;

 private:
  void adopt_table(const TablePtr& t);
  TablePtr table_;
  TermMap terms_;
};

TSeries bv_bracket(const TSeries& a, const TSeries& b);
TSeries bv_delta(const TSeries& a);
TSeries q_apply(const Element& action, const TSeries& a);
TSeries k_apply(const Element& action, const TSeries& a);

// Derivation V = sum_gamma V^gamma d/dt^gamma on coupling series, with
// components whose coefficients are constants in the algebra.
struct CouplingField {
  std::vector<TSeries> components;

  TSeries apply(const TSeries& x) const;
  // (this o inner)^gamma = this(inner^gamma)
  CouplingField after(const CouplingField& inner) const;
  CouplingField& operator+=(const CouplingField& other);
  CouplingField scaled(const HbarPoly& c) const;
  bool operator==(const CouplingField& other) const { return components == other.components; }
};

// Identity field components t^gamma, gamma = 0..dim-1.
CouplingField coupling_identity(TablePtr table, std::size_t dim);

}  // namespace bvm
