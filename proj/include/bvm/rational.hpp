#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bvm {

using Rational = mpq_class;

// Accepts "p", "-p", "p/q"; throws Error(ParseError) otherwise.
Rational parse_rational(std::string_view text);

// Canonical reduced form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

// Reduced p/q; mpq_class(p, q) alone leaves the fraction unreduced.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline int sign_of(const Rational& q) { return sgn(q); }

}  // namespace bvm
