#include "bvm/rational.hpp"

#include <cctype>

#include "bvm/errors.hpp"

namespace bvm {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  auto num = text.substr(0, slash);
  auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+')
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  mpz_class zn(n), zd{std::string(den)};
  if (zd == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

}  // namespace bvm
