#include "bvm/tseries.hpp"

#include <algorithm>
#include <sstream>

#include "bvm/errors.hpp"
#include "bvm/operators.hpp"

namespace bvm {

TKey merge_keys(const TKey& a, const TKey& b) {
  TKey out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Rational multiplicity_factor(const TKey& key) {
  Rational out = 1;
  std::size_t run = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    run = (i > 0 && key[i] == key[i - 1]) ? run + 1 : 1;
    out *= static_cast<unsigned long>(run);
  }
  return out;
}

std::string key_to_string(const TKey& key) {
  std::string s = "(";
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + std::to_string(key[i]);
  return s + ")";
}

TSeries TSeries::monomial(TablePtr table, TKey key, HbarPoly coeff) {
  std::sort(key.begin(), key.end());
  TSeries s(std::move(table));
  s.add(key, coeff);
  return s;
}

void TSeries::adopt_table(const TablePtr& t) {
  if (!t) return;
  if (!table_) {
    table_ = t;
  } else if (table_ != t) {
    throw Error(ErrorKind::ModelMismatch, "coupling series over different variable tables");
  }
}

HbarPoly TSeries::coefficient(const TKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? HbarPoly(table_) : it->second;
}

void TSeries::add(const TKey& key, const HbarPoly& c) {
  if (c.is_zero()) return;
  adopt_table(c.table());
  auto [it, inserted] = terms_.try_emplace(key, HbarPoly(table_));
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

TSeries& TSeries::operator+=(const TSeries& other) {
  adopt_table(other.table_);
  for (const auto& [k, c] : other.terms_) add(k, c);
  return *this;
}

TSeries& TSeries::operator-=(const TSeries& other) {
  adopt_table(other.table_);
  for (const auto& [k, c] : other.terms_) add(k, -c);
  return *this;
}

TSeries& TSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

TSeries TSeries::operator-() const {
  TSeries out = *this;
  return out *= Rational(-1);
}

TSeries operator*(const TSeries& a, const TSeries& b) {
  TSeries out(a.table_ ? a.table_ : b.table_);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) out.add(merge_keys(ka, kb), ca * cb);
  return out;
}

TSeries TSeries::times(const HbarPoly& c) const {
  return map([&](const HbarPoly& v) { return v * c; });
}

TSeries TSeries::shifted(int k) const {
  return map([k](const HbarPoly& v) { return v.shifted(k); });
}

TSeries TSeries::divided_by_hbar() const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_) {
    try {
      out.add(k, c.divided_by_hbar());
    } catch (const Error&) {
      throw Error(ErrorKind::HbarDivisionFails, "nonzero hbar^0 part at t-monomial " + key_to_string(k) + ": " +
                                                    c.coeff(0).to_string());
    }
  }
  return out;
}

TSeries TSeries::partial(int index) const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_) {
    auto first = std::find(k.begin(), k.end(), index);
    if (first == k.end()) continue;
    long mult = std::count(k.begin(), k.end(), index);
    TKey rest = k;
    rest.erase(rest.begin() + (first - k.begin()));
    out.add(rest, c * Rational(mult));
  }
  return out;
}

TSeries TSeries::map(const std::function<HbarPoly(const HbarPoly&)>& f) const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_) out.add(k, f(c));
  return out;
}

TSeries TSeries::layer(int length) const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_)
    if (static_cast<int>(k.size()) == length) out.terms_.emplace(k, c);
  return out;
}

TSeries TSeries::truncated(int max_length) const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_)
    if (static_cast<int>(k.size()) <= max_length) out.terms_.emplace(k, c);
  return out;
}

TSeries TSeries::hbar_part(int power) const {
  TSeries out(table_);
  for (const auto& [k, c] : terms_) out.add(k, HbarPoly(c.coeff(power)));
  return out;
}

std::string TSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : " + ") << "t" << key_to_string(k) << "*[" << c.to_string() << "]";
    first = false;
  }
  return os.str();
}

TSeries bv_bracket(const TSeries& a, const TSeries& b) {
  TSeries out(a.table() ? a.table() : b.table());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) out.add(merge_keys(ka, kb), bv_bracket(ca, cb));
  return out;
}

TSeries bv_delta(const TSeries& a) {
  return a.map([](const HbarPoly& c) { return bv_delta(c); });
}

TSeries q_apply(const Element& action, const TSeries& a) {
  return a.map([&](const HbarPoly& c) { return q_apply(action, c); });
}

TSeries k_apply(const Element& action, const TSeries& a) {
  return a.map([&](const HbarPoly& c) { return k_apply(action, c); });
}

TSeries CouplingField::apply(const TSeries& x) const {
  TSeries out(x.table());
  for (std::size_t g = 0; g < components.size(); ++g) {
    if (components[g].is_zero()) continue;
    TSeries d = x.partial(static_cast<int>(g));
    if (!d.is_zero()) out += components[g] * d;
  }
  return out;
}

CouplingField CouplingField::after(const CouplingField& inner) const {
  CouplingField out;
  for (const auto& c : inner.components) out.components.push_back(apply(c));
  return out;
}

CouplingField& CouplingField::operator+=(const CouplingField& other) {
  if (components.size() < other.components.size()) components.resize(other.components.size());
  for (std::size_t g = 0; g < other.components.size(); ++g) components[g] += other.components[g];
  return *this;
}

CouplingField CouplingField::scaled(const HbarPoly& c) const {
  CouplingField out;
  for (const auto& comp : components) out.components.push_back(comp.times(c));
  return out;
}

CouplingField coupling_identity(TablePtr table, std::size_t dim) {
  CouplingField out;
  for (std::size_t g = 0; g < dim; ++g)
    out.components.push_back(
        TSeries::monomial(table, {static_cast<int>(g)}, HbarPoly(Element::constant(table, 1))));
  return out;
}

}  // namespace bvm
