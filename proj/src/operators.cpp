#include "bvm/operators.hpp"

namespace bvm {

Element parity_twist(const Element& a) {
  if (a.is_zero()) return a;
  Element out(a.table());
  const auto& table = *a.table();
  for (const auto& [m, c] : a.terms()) out.add_term(m, m.parity(table) ? Rational(-c) : c);
  return out;
}

HbarPoly parity_twist(const HbarPoly& a) {
  HbarPoly out(a.table());
  for (int k = 0; k <= a.degree(); ++k) out.set(k, parity_twist(a.coeff(k)));
  return out;
}

Element bv_delta(const Element& a) {
  Element out(a.table());
  if (a.is_zero()) return out;
  for (const auto& p : a.table()->pairs()) out += derivative(derivative(a, p.odd), p.even);
  return out;
}

HbarPoly bv_delta(const HbarPoly& a) {
  HbarPoly out(a.table());
  for (int k = 0; k <= a.degree(); ++k) out.set(k, bv_delta(a.coeff(k)));
  return out;
}

// Per pair (u even, v odd):  (a,b) = (-1)^|a| d_v a * d_u b + d_u a * d_v b.
Element bv_bracket(const Element& a, const Element& b) {
  Element out(a.table() ? a.table() : b.table());
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& p : out.table()->pairs()) {
    Element dva = derivative(a, p.odd);
    if (!dva.is_zero()) {
      Element dub = derivative(b, p.even);
      // d_v a has the opposite parity of a, so (-1)^|a| = -(-1)^|d_v a|.
      if (!dub.is_zero()) out -= parity_twist(dva) * dub;
    }
    Element dua = derivative(a, p.even);
    if (!dua.is_zero()) {
      Element dvb = derivative(b, p.odd);
      if (!dvb.is_zero()) out += dua * dvb;
    }
  }
  return out;
}

HbarPoly bv_bracket(const HbarPoly& a, const HbarPoly& b) {
  HbarPoly out(a.table() ? a.table() : b.table());
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) out.add(i + j, bv_bracket(a.coeff(i), b.coeff(j)));
  return out;
}

Element q_apply(const Element& action, const Element& a) { return bv_bracket(action, a); }

HbarPoly q_apply(const Element& action, const HbarPoly& a) {
  HbarPoly out(a.table());
  for (int k = 0; k <= a.degree(); ++k) out.set(k, q_apply(action, a.coeff(k)));
  return out;
}

HbarPoly k_apply(const Element& action, const HbarPoly& a) {
  HbarPoly out = q_apply(action, a);
  out -= bv_delta(a).shifted(1);
  return out;
}

}  // namespace bvm
