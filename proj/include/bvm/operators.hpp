#pragma once

#include "bvm/element.hpp"
#include "bvm/hbar_poly.hpp"

namespace bvm {

// Second-order BV operator: sum over pairs of d/d(even) d/d(odd), left derivatives.
Element bv_delta(const Element& a);
HbarPoly bv_delta(const HbarPoly& a);

// Bracket derived from the failure of bv_delta to be a derivation.
Element bv_bracket(const Element& a, const Element& b);
HbarPoly bv_bracket(const HbarPoly& a, const HbarPoly& b);

// Q = (S, .)
Element q_apply(const Element& action, const Element& a);
HbarPoly q_apply(const Element& action, const HbarPoly& a);

// K = Q - hbar * Delta
HbarPoly k_apply(const Element& action, const HbarPoly& a);

// (-1)^parity applied termwise, i.e. the grading involution.
Element parity_twist(const Element& a);
HbarPoly parity_twist(const HbarPoly& a);

}  // namespace bvm

namespace bvm {
// nullopt marks a mixed-ghost element.
inline std::optional<int> ghost_number(const Element& a) { return a.ghost(); }
inline std::optional<int> ghost_number(const HbarPoly& a) { return a.ghost(); }
}  // namespace bvm
