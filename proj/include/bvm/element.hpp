#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvm/rational.hpp"
#include "bvm/variables.hpp"

namespace bvm {

// Exponent vector over all declared variables; odd entries are 0 or 1.
// Read in declaration order this is the canonical ordered product.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}

  std::size_t size() const noexcept { return exps_.size(); }
  std::uint16_t operator[](std::size_t i) const { return exps_[i]; }
  void set(std::size_t i, std::uint16_t e) { exps_[i] = e; }
  const std::vector<std::uint16_t>& exponents() const noexcept { return exps_; }

  bool is_one() const;
  int ghost(const VariableTable& table) const;
  int weighted_degree(const std::vector<int>& weights) const;
  int total_degree() const;
  // Number of odd factors mod 2.
  int parity(const VariableTable& table) const;

  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<std::uint16_t> exps_;
};

// Sign of reordering a*b into canonical order, 0 when an odd factor repeats.
int product_sign(const Monomial& a, const Monomial& b, const VariableTable& table);
Monomial product_monomial(const Monomial& a, const Monomial& b);
bool divides(const Monomial& a, const Monomial& b);

class Element {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Element() = default;
  explicit Element(TablePtr table) : table_(std::move(table)) {}

  static Element constant(TablePtr table, const Rational& c);
  static Element variable(TablePtr table, std::size_t index);
  static Element variable(TablePtr table, std::string_view name);
  static Element monomial(TablePtr table, const Monomial& m, const Rational& c = 1);

  const TablePtr& table() const noexcept { return table_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  // Common ghost number of all monomials, nullopt when mixed. Zero reports 0.
  std::optional<int> ghost() const;
  Element ghost_part(int g) const;
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;
  bool is_constant() const;

  void add_term(const Monomial& m, const Rational& c);

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(const Rational& c);
  Element operator-() const;

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const Rational& c) { return a *= c; }
  friend Element operator*(const Rational& c, Element a) { return a *= c; }
  friend Element operator*(const Element& a, const Element& b);

  bool operator==(const Element& other) const { return terms_ == other.terms_; }

  // Deterministic text: terms by (total degree, exponent order), "0" when empty.
  std::string to_string() const;

 private:
  void adopt_table(const Element& other);

  TablePtr table_;
  TermMap terms_;
};

// Left derivative with respect to variable `var`.
Element derivative(const Element& a, std::size_t var);

std::string monomial_to_string(const Monomial& m, const VariableTable& table);

}  // namespace bvm
