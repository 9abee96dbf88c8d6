#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvm/element.hpp"

namespace bvm {

// Exact polynomial in hbar with Element coefficients; index = power of hbar.
class HbarPoly {
 public:
  HbarPoly() = default;
  explicit HbarPoly(TablePtr table) : table_(std::move(table)) {}
  HbarPoly(const Element& e);  // NOLINT(google-explicit-constructor): hbar^0 embedding

  const TablePtr& table() const noexcept { return table_; }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<Element>& coefficients() const noexcept { return coeffs_; }

  Element coeff(int power) const;
  void set(int power, Element e);
  void add(int power, const Element& e);

  std::optional<int> ghost() const;

  HbarPoly& operator+=(const HbarPoly& other);
  HbarPoly& operator-=(const HbarPoly& other);
  HbarPoly& operator*=(const Rational& c);
  HbarPoly operator-() const;
  friend HbarPoly operator+(HbarPoly a, const HbarPoly& b) { return a += b; }
  friend HbarPoly operator-(HbarPoly a, const HbarPoly& b) { return a -= b; }
  friend HbarPoly operator*(HbarPoly a, const Rational& c) { return a *= c; }
  friend HbarPoly operator*(const Rational& c, HbarPoly a) { return a *= c; }
  friend HbarPoly operator*(const HbarPoly& a, const HbarPoly& b);

  bool operator==(const HbarPoly& other) const { return coeffs_ == other.coeffs_; }

  // Multiply by hbar^k (k >= 0).
  HbarPoly shifted(int k) const;
  // Exact division by hbar; throws HbarDivisionFails when the hbar^0 part is nonzero.
  HbarPoly divided_by_hbar() const;

  std::string to_string() const;

 private:
  void trim();
  void adopt_table(const TablePtr& t);

  TablePtr table_;
  std::vector<Element> coeffs_;
};

}  // namespace bvm
