#include "bvm/hbar_poly.hpp"

#include "bvm/errors.hpp"

namespace bvm {

HbarPoly::HbarPoly(const Element& e) : table_(e.table()) {
  if (!e.is_zero()) coeffs_.push_back(e);
}

void HbarPoly::adopt_table(const TablePtr& t) {
  if (!t) return;
  if (!table_) {
    table_ = t;
  } else if (table_ != t) {
    throw Error(ErrorKind::ModelMismatch, "hbar polynomials over different variable tables");
  }
}

void HbarPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Element HbarPoly::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return Element(table_);
  return coeffs_[power];
}

void HbarPoly::set(int power, Element e) {
  adopt_table(e.table());
  if (power >= static_cast<int>(coeffs_.size())) {
    if (e.is_zero()) return;
    coeffs_.resize(power + 1, Element(table_));
  }
  coeffs_[power] = std::move(e);
  trim();
}

void HbarPoly::add(int power, const Element& e) {
  if (e.is_zero()) return;
  adopt_table(e.table());
  if (power >= static_cast<int>(coeffs_.size())) coeffs_.resize(power + 1, Element(table_));
  coeffs_[power] += e;
  trim();
}

std::optional<int> HbarPoly::ghost() const {
  std::optional<int> g;
  for (const auto& c : coeffs_) {
    if (c.is_zero()) continue;
    auto cg = c.ghost();
    if (!cg) return std::nullopt;
    if (g && *g != *cg) return std::nullopt;
    g = cg;
  }
  return g.value_or(0);
}

HbarPoly& HbarPoly::operator+=(const HbarPoly& other) {
  adopt_table(other.table_);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) add(static_cast<int>(k), other.coeffs_[k]);
  return *this;
}

HbarPoly& HbarPoly::operator-=(const HbarPoly& other) {
  adopt_table(other.table_);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) add(static_cast<int>(k), -other.coeffs_[k]);
  return *this;
}

HbarPoly& HbarPoly::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& e : coeffs_) e *= c;
  return *this;
}

HbarPoly HbarPoly::operator-() const {
  HbarPoly out = *this;
  for (auto& e : out.coeffs_) e = -e;
  return out;
}

HbarPoly operator*(const HbarPoly& a, const HbarPoly& b) {
  HbarPoly out(a.table_ ? a.table_ : b.table_);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      out.add(static_cast<int>(i + j), a.coeffs_[i] * b.coeffs_[j]);
  return out;
}

HbarPoly HbarPoly::shifted(int k) const {
  HbarPoly out(table_);
  if (is_zero()) return out;
  out.coeffs_.assign(k, Element(table_));
  out.coeffs_.insert(out.coeffs_.end(), coeffs_.begin(), coeffs_.end());
  return out;
}

HbarPoly HbarPoly::divided_by_hbar() const {
  HbarPoly out(table_);
  if (is_zero()) return out;
  if (!coeffs_[0].is_zero())
    throw Error(ErrorKind::HbarDivisionFails, "nonzero hbar^0 part: " + coeffs_[0].to_string());
  out.coeffs_.assign(coeffs_.begin() + 1, coeffs_.end());
  return out;
}

std::string HbarPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string body = coeffs_[k].to_string();
    if (k == 0) {
      out += body;
    } else {
      out += "hbar";
      if (k > 1) out += "^" + std::to_string(k);
      out += "*(" + body + ")";
    }
  }
  return out;
}

}  // namespace bvm
