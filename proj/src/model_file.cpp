#include "bvm/model_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "bvm/errors.hpp"
#include "bvm/poly_parser.hpp"

namespace bvm {

namespace {

struct Value {
  enum class Kind { String, Integer, Array } kind = Kind::String;
  std::string text;
  long integer = 0;
  std::vector<Value> items;
  int line = 0, column = 0;  // position of the first content character
};

using Section = std::map<std::string, Value>;

struct Document {
  Section top;
  std::vector<std::pair<int, Section>> variables;  // header line, keys
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Document read() {
    Document doc;
    Section* current = &doc.top;
    std::size_t start = 0;
    int line = 0;
    while (start <= text_.size()) {
      ++line;
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      line_ = text_.substr(start, end - start);
      if (!line_.empty() && line_.back() == '\r') line_.remove_suffix(1);
      lineno_ = line;
      pos_ = 0;
      skip_space();
      if (!at_end() && peek() != '#') {
        if (line_.substr(pos_, 2) == "[[") {
          pos_ += 2;
          std::string header = ident();
          if (!accept("]]")) fail("expected ']]'");
          if (header != "variable") fail("unknown table [[" + header + "]]");
          doc.variables.emplace_back(line, Section{});
          current = &doc.variables.back().second;
        } else {
          int key_col = column();
          std::string key = ident();
          if (key.empty()) fail("expected a key");
          skip_space();
          if (!accept("=")) fail("expected '='");
          skip_space();
          Value v = value();
          if (current->count(key)) throw ParseError(lineno_, key_col, "duplicate key '" + key + "'");
          current->emplace(key, std::move(v));
        }
        skip_space();
        if (!at_end() && peek() != '#') fail("unexpected trailing text");
      }
      if (end == text_.size()) break;
      start = end + 1;
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  int column() const {
    int col = 1;
    for (std::size_t i = 0; i < pos_; ++i)
      if ((static_cast<unsigned char>(line_[i]) & 0xC0) != 0x80) ++col;
    return col;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(lineno_, column(), msg); }
  void skip_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  bool accept(std::string_view tok) {
    if (line_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    std::size_t s = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    return std::string(line_.substr(s, pos_ - s));
  }

  Value value() {
    if (at_end()) fail("missing value");
    Value v;
    v.line = lineno_;
    if (peek() == '"') {
      ++pos_;
      v.column = column();
      v.kind = Value::Kind::String;
      while (!at_end() && peek() != '"') {
        if (peek() == '\\') {
          ++pos_;
          if (at_end()) break;
          char c = peek();
          v.text += c == 'n' ? '\n' : c == 't' ? '\t' : c;
        } else {
          v.text += peek();
        }
        ++pos_;
      }
      if (at_end()) fail("unterminated string");
      ++pos_;
      return v;
    }
    v.column = column();
    if (peek() == '[') {
      ++pos_;
      v.kind = Value::Kind::Array;
      skip_space();
      if (accept("]")) return v;
      for (;;) {
        skip_space();
        v.items.push_back(value());
        skip_space();
        if (accept("]")) return v;
        if (!accept(",")) fail("expected ',' or ']'");
        skip_space();
        if (accept("]")) return v;  // trailing comma
      }
    }
    std::size_t s = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == s || (pos_ == s + 1 && !std::isdigit(static_cast<unsigned char>(line_[s])))) {
      pos_ = s;
      fail("expected a string, integer or array");
    }
    v.kind = Value::Kind::Integer;
    v.integer = std::stol(std::string(line_.substr(s, pos_ - s)));
    return v;
  }

  std::string_view text_;
  std::string_view line_;
  int lineno_ = 0;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(const Value& v, const std::string& msg) { throw ParseError(v.line, v.column, msg); }

const std::string& as_string(const Value& v) {
  if (v.kind != Value::Kind::String) bad(v, "expected a string");
  return v.text;
}

long as_int(const Value& v) {
  if (v.kind != Value::Kind::Integer) bad(v, "expected an integer");
  return v.integer;
}

Rational as_rational(const Value& v) {
  if (v.kind == Value::Kind::Integer) return Rational(v.integer);
  try {
    return parse_rational(as_string(v));
  } catch (const Error&) {
    bad(v, "expected a rational number");
  }
}

std::vector<std::string> as_strings(const Value& v) {
  if (v.kind != Value::Kind::Array) bad(v, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v.items) out.push_back(as_string(item));
  return out;
}

std::vector<int> as_ints(const Value& v) {
  if (v.kind != Value::Kind::Array) bad(v, "expected an array of integers");
  std::vector<int> out;
  for (const auto& item : v.items) out.push_back(static_cast<int>(as_int(item)));
  return out;
}

Element polynomial(const TablePtr& table, const Value& v) { return parse_polynomial(table, as_string(v), v.line, v.column); }

void reject_unknown(const Section& s, std::initializer_list<std::string_view> allowed, int line) {
  for (const auto& [k, v] : s) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw ParseError(v.line ? v.line : line, v.column > 1 ? 1 : v.column, "unknown key '" + k + "'");
  }
}

const Value& required(const Section& s, const std::string& key, int line) {
  auto it = s.find(key);
  if (it == s.end()) throw ParseError(line, 1, "missing key '" + key + "'");
  return it->second;
}

TablePtr explicit_table(const Document& doc) {
  std::vector<Variable> vars;
  std::map<std::string, std::size_t> index;
  for (const auto& [line, sec] : doc.variables) {
    reject_unknown(sec, {"name", "ghost", "parity", "weight", "partner"}, line);
    Variable v;
    v.name = as_string(required(sec, "name", line));
    v.ghost = static_cast<int>(as_int(required(sec, "ghost", line)));
    v.odd = (v.ghost % 2) != 0;
    if (auto it = sec.find("parity"); it != sec.end()) {
      const std::string& p = as_string(it->second);
      if (p != "even" && p != "odd") bad(it->second, "parity must be \"even\" or \"odd\"");
      v.odd = p == "odd";
    }
    if (auto it = sec.find("weight"); it != sec.end()) v.weight = static_cast<int>(as_int(it->second));
    index[v.name] = vars.size();
    vars.push_back(v);
  }
  std::size_t i = 0;
  for (const auto& [line, sec] : doc.variables) {
    if (auto it = sec.find("partner"); it != sec.end()) {
      auto j = index.find(as_string(it->second));
      if (j == index.end()) bad(it->second, "unknown partner '" + it->second.text + "'");
      vars[i].partner = j->second;
    }
    ++i;
  }
  try {
    return make_table(std::move(vars));
  } catch (const Error& e) {
    throw ParseError(doc.variables.front().first, 1, e.what());
  }
}

MonomialOrder order_from(const Value& v, const std::optional<std::vector<int>>& weights) {
  const std::string& s = as_string(v);
  if (s == "grevlex") return MonomialOrder::grevlex();
  if (s == "grlex") return MonomialOrder::grlex();
  if (s == "weighted") {
    if (!weights) bad(v, "weighted order needs `weights`");
    return MonomialOrder::weighted(*weights);
  }
  bad(v, "unknown monomial order '" + s + "'");
}

}  // namespace

ModelFile parse_model_file(std::string_view text) {
  Document doc = Reader(text).read();
  const Section& top = doc.top;
  reject_unknown(top, {"name", "class", "coordinates", "action", "superpotential", "weights", "order", "truncation",
                       "expectation", "degree_cap", "corrupt_lambda"},
                 1);
  ModelFile file;
  std::string name = top.count("name") ? as_string(top.at("name")) : "model";
  std::string cls = top.count("class") ? as_string(top.at("class")) : "isolated";
  std::optional<std::vector<int>> weights;
  if (auto it = top.find("weights"); it != top.end()) weights = as_ints(it->second);

  {
    if (cls == "isolated") {
      if (top.count("superpotential")) bad(top.at("superpotential"), "isolated models take `action`");
      const Value& action = required(top, "action", 1);
      if (!doc.variables.empty()) {
        if (top.count("coordinates")) bad(top.at("coordinates"), "coordinates are implied by [[variable]] blocks");
        TablePtr table = explicit_table(doc);
        std::optional<std::vector<int>> cw = weights;
        file.spec = isolated_spec(name, table, polynomial(table, action), cw);
      } else {
        auto coords = as_strings(required(top, "coordinates", 1));
        // Parse once against a provisional table to surface syntax errors with positions.
        ModelSpec probe = isolated_spec(name, coords, "0", weights ? std::optional(*weights) : std::nullopt);
        polynomial(probe.table, action);
        file.spec = isolated_spec(name, coords, action.text, weights);
      }
    } else if (cls == "gauged") {
      if (!doc.variables.empty()) throw ParseError(doc.variables.front().first, 1, "gauged models build their own variables");
      if (top.count("action")) bad(top.at("action"), "gauged models take `superpotential`");
      auto coords = as_strings(required(top, "coordinates", 1));
      const Value& g = required(top, "superpotential", 1);
      TablePtr table = gauged_table(coords);
      file.spec = gauged_spec(name, table, polynomial(table, g));
    } else {
      bad(top.at("class"), "class must be \"isolated\" or \"gauged\"");
    }
  }

  if (auto it = top.find("order"); it != top.end()) file.spec.order = order_from(it->second, weights);
  if (auto it = top.find("truncation"); it != top.end()) {
    file.truncation = static_cast<int>(as_int(it->second));
    if (file.truncation < 1) bad(it->second, "truncation must be positive");
  }
  if (auto it = top.find("degree_cap"); it != top.end()) file.spec.degree_cap = static_cast<int>(as_int(it->second));
  if (auto it = top.find("corrupt_lambda"); it != top.end()) file.corrupt_lambda = static_cast<int>(as_int(it->second));
  if (auto it = top.find("expectation"); it != top.end()) {
    if (it->second.kind != Value::Kind::Array) bad(it->second, "expectation must be an array");
    for (const auto& item : it->second.items) {
      std::vector<Rational> poly;
      if (item.kind == Value::Kind::Array) {
        for (const auto& c : item.items) poly.push_back(as_rational(c));
      } else {
        poly.push_back(as_rational(item));
      }
      file.spec.expectation.values.push_back(std::move(poly));
    }
  }
  return file;
}

ModelFile load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_file(ss.str());
}

}  // namespace bvm
