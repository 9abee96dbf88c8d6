#pragma once

#include <optional>
#include <vector>

#include "bvm/element.hpp"

namespace bvm {

enum class OrderKind { GradedReverseLex, GradedLex, WeightedGradedReverseLex };

// Exponent vector restricted to the variables of a polynomial ring.
using Exponents = std::vector<int>;

struct MonomialOrder {
  OrderKind kind = OrderKind::GradedReverseLex;
  std::vector<int> weights;  // per ring variable; only used by the weighted kind

  static MonomialOrder grevlex() { return {}; }
  static MonomialOrder grlex() { return {OrderKind::GradedLex, {}}; }
  static MonomialOrder weighted(std::vector<int> w) {
    return {OrderKind::WeightedGradedReverseLex, std::move(w)};
  }

  int degree(const Exponents& e) const;
  // Three-way comparison: negative when a < b.
  int compare(const Exponents& a, const Exponents& b) const;
};

struct DivisionResult {
  Element remainder;
  std::vector<Element> quotients;  // one per original generator
};

class GroebnerBasis {
 public:
  // Polynomial kernel used internally; terms sorted by decreasing order.
  struct Term {
    Exponents exps;
    Rational coef;
  };
  using Poly = std::vector<Term>;

  GroebnerBasis(TablePtr table, std::vector<std::size_t> ring_vars, MonomialOrder order,
                std::vector<Element> generators);

  const TablePtr& table() const noexcept { return table_; }
  const MonomialOrder& order() const noexcept { return order_; }
  const std::vector<std::size_t>& ring_variables() const noexcept { return ring_vars_; }
  const std::vector<Element>& generators() const noexcept { return generators_; }

  std::vector<Element> basis() const;
  // cofactors()[j][i]: coefficient of generator i in basis element j.
  std::vector<std::vector<Element>> cofactors() const;
  std::vector<Monomial> leading_monomials() const;

  DivisionResult normal_form(const Element& p) const;

  bool contains_unit() const;
  bool is_zero_dimensional() const;
  bool is_homogeneous() const;

  // Sorted by (degree, order). Throws NotZeroDimensional without a cap on an infinite staircase.
  std::vector<Monomial> standard_monomials(std::optional<int> degree_cap = std::nullopt) const;
  // Standard monomials of exactly this degree under the order's grading.
  std::vector<Monomial> graded_slice(int degree) const;

  // Conversions between Elements and the ring representation.
  Poly to_poly(const Element& e) const;
  Element to_element(const Poly& p) const;
  Monomial to_monomial(const Exponents& e) const;
  Exponents to_exponents(const Monomial& m) const;

 private:
  void run_buchberger();
  void reduce_basis();
  // Full reduction of p by the current basis; fills quotients per basis element.
  Poly reduce(Poly p, std::vector<Poly>* quotients) const;

  TablePtr table_;
  std::vector<std::size_t> ring_vars_;
  MonomialOrder order_;
  std::vector<Element> generators_;
  std::vector<Poly> gens_;
  std::vector<Poly> basis_;
  std::vector<std::vector<Poly>> cof_;
};

// Reduced Groebner basis of the ideal generated by even polynomials.
// ring_vars defaults to every even variable of the table.
GroebnerBasis buchberger(const std::vector<Element>& generators, const MonomialOrder& order,
                         std::optional<std::vector<std::size_t>> ring_vars = std::nullopt);

}  // namespace bvm
