#include "bvm/element.hpp"

#include <algorithm>
#include <sstream>

#include "bvm/errors.hpp"

namespace bvm {

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
}

int Monomial::ghost(const VariableTable& table) const {
  int g = 0;
  for (std::size_t i = 0; i < exps_.size(); ++i) g += table[i].ghost * exps_[i];
  return g;
}

int Monomial::weighted_degree(const std::vector<int>& weights) const {
  int d = 0;
  for (std::size_t i = 0; i < exps_.size(); ++i) d += weights[i] * exps_[i];
  return d;
}

int Monomial::total_degree() const {
  int d = 0;
  for (auto e : exps_) d += e;
  return d;
}

int Monomial::parity(const VariableTable& table) const {
  int p = 0;
  for (auto i : table.odd_indices()) p += exps_[i];
  return p & 1;
}

int product_sign(const Monomial& a, const Monomial& b, const VariableTable& table) {
  // Moving each odd factor of b left past the odd factors of a with larger index.
  int total_a = 0;
  for (auto i : table.odd_indices()) total_a += a[i];
  int a_seen = 0;
  int swaps = 0;
  for (auto i : table.odd_indices()) {
    if (a[i]) {
      if (b[i]) return 0;
      ++a_seen;
    } else if (b[i]) {
      swaps += total_a - a_seen;
    }
  }
  return (swaps & 1) ? -1 : 1;
}

Monomial product_monomial(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m.set(i, static_cast<std::uint16_t>(a[i] + b[i]));
  return m;
}

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Element Element::constant(TablePtr table, const Rational& c) {
  Element e(table);
  e.add_term(Monomial(e.table_->size()), c);
  return e;
}

Element Element::variable(TablePtr table, std::size_t index) {
  Monomial m(table->size());
  m.set(index, 1);
  return monomial(std::move(table), m);
}

Element Element::variable(TablePtr table, std::string_view name) {
  auto idx = table->index_of(name);
  if (!idx) throw Error(ErrorKind::ModelMismatch, "unknown variable '" + std::string(name) + "'");
  return variable(std::move(table), *idx);
}

Element Element::monomial(TablePtr table, const Monomial& m, const Rational& c) {
  Element e(std::move(table));
  e.add_term(m, c);
  return e;
}

std::optional<int> Element::ghost() const {
  if (terms_.empty()) return 0;
  int g = terms_.begin()->first.ghost(*table_);
  for (const auto& [m, c] : terms_)
    if (m.ghost(*table_) != g) return std::nullopt;
  return g;
}

Element Element::ghost_part(int g) const {
  Element out(table_);
  for (const auto& [m, c] : terms_)
    if (m.ghost(*table_) == g) out.terms_.emplace_hint(out.terms_.end(), m, c);
  return out;
}

Rational Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Element::constant_term() const {
  if (!table_) return 0;
  return coefficient(Monomial(table_->size()));
}

bool Element::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

void Element::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Element::adopt_table(const Element& other) {
  if (!other.table_) return;
  if (!table_) {
    table_ = other.table_;
  } else if (table_ != other.table_) {
    throw Error(ErrorKind::ModelMismatch, "operands belong to different variable tables");
  }
}

Element& Element::operator+=(const Element& other) {
  adopt_table(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Element& Element::operator-=(const Element& other) {
  adopt_table(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Element& Element::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

Element Element::operator-() const {
  Element out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

Element operator*(const Element& a, const Element& b) {
  Element out(a.table_ ? a.table_ : b.table_);
  if (a.table_ && b.table_ && a.table_ != b.table_)
    throw Error(ErrorKind::ModelMismatch, "operands belong to different variable tables");
  if (a.is_zero() || b.is_zero()) return out;
  const auto& table = *out.table_;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      int s = product_sign(ma, mb, table);
      if (s == 0) continue;
      Rational c = ca * cb;
      if (s < 0) c = -c;
      out.add_term(product_monomial(ma, mb), c);
    }
  }
  return out;
}

Element derivative(const Element& a, std::size_t var) {
  Element out(a.table());
  if (a.is_zero()) return out;
  const auto& table = *a.table();
  const bool odd = table[var].odd;
  for (const auto& [m, c] : a.terms()) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d.set(var, static_cast<std::uint16_t>(m[var] - 1));
    Rational coef = c;
    if (odd) {
      int before = 0;
      for (auto i : table.odd_indices()) {
        if (i >= var) break;
        before += m[i];
      }
      if (before & 1) coef = -coef;
    } else {
      coef *= m[var];
    }
    out.add_term(d, coef);
  }
  return out;
}

std::string monomial_to_string(const Monomial& m, const VariableTable& table) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += table[i].name;
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) {
    int dx = x->first.total_degree(), dy = y->first.total_degree();
    if (dx != dy) return dx < dy;
    return x->first > y->first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    Rational c = t->second;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = t->first.is_one();
    if (unit) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << '*';
      os << monomial_to_string(t->first, *table_);
    }
  }
  return os.str();
}

}  // namespace bvm
