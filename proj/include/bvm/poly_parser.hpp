#pragma once

#include <string_view>

#include "bvm/element.hpp"

namespace bvm {

// Parses a polynomial over the variables of `table`.
// Grammar: sums and differences of products ('*' or U+00B7) of powers ('^' with
// a non-negative integer exponent) of integers, variable names and parenthesised
// expressions; '/' divides by a nonzero constant. U+2212 is accepted as minus.
// Errors report `line` and `column + offset` of the offending character.
Element parse_polynomial(const TablePtr& table, std::string_view text, int line = 1, int column = 1);

}  // namespace bvm
