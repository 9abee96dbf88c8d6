#include "bvm/poly_parser.hpp"

#include <cctype>
#include <string>

#include "bvm/errors.hpp"

namespace bvm {

namespace {

class Parser {
 public:
  Parser(const TablePtr& table, std::string_view text, int line, int column)
      : table_(table), text_(text), line_(line), column_(column) {}

  Element parse() {
    Element e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    // Column counts characters, so continuation bytes of UTF-8 sequences are skipped.
    int col = column_;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    throw ParseError(line_, col, msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  bool accept_minus() { return accept("-") || accept("−"); }
  bool accept_times() { return accept("*") || accept("·"); }

  Element expr() {
    Element acc(table_);
    bool first = true;
    for (;;) {
      bool negate = false;
      if (accept("+")) {
      } else if (accept_minus()) {
        negate = true;
      } else if (!first) {
        break;
      }
      Element t = term();
      acc += negate ? -t : t;
      first = false;
    }
    return acc;
  }

  Element term() {
    Element acc = factor();
    for (;;) {
      if (accept_times()) {
        acc = acc * factor();
      } else if (accept("/")) {
        std::size_t at = pos_;
        Element d = factor();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          skip_space();
          fail("division by a non-constant or zero expression");
        }
        acc *= Rational(1) / d.constant_term();
      } else {
        break;
      }
    }
    return acc;
  }

  Element factor() {
    Element base = primary();
    if (accept("^")) {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      if (pos_ - start > 4) {
        pos_ = start;
        fail("exponent too large");
      }
      int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      Element out = Element::constant(table_, 1);
      for (int i = 0; i < k; ++i) out = out * base;
      return out;
    }
    return base;
  }

  Element primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      Element e = expr();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if (accept_minus()) return -factor();
    if (accept("+")) return factor();
    char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Element::constant(table_, Rational(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = table_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Element::variable(table_, *idx);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  const TablePtr& table_;
  std::string_view text_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse_polynomial(const TablePtr& table, std::string_view text, int line, int column) {
  return Parser(table, text, line, column).parse();
}

}  // namespace bvm
