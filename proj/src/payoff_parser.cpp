#include <cctype>
#include <charconv>
#include <string>

#include "fairprice/payoff.hpp"

namespace fairprice {

PayoffParseError::PayoffParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

namespace {

using Kind = PayoffExpr::Kind;

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  PayoffExpr parse() {
    PayoffExpr e = expr();
    skip_ws();
    if (!at_end()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) const { throw PayoffParseError(message, pos_); }
  [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
    throw PayoffParseError(message, offset);
  }

  bool at_end() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  PayoffExpr expr() {
    PayoffExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = PayoffExpr::binary(Kind::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = PayoffExpr::binary(Kind::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  PayoffExpr term() {
    PayoffExpr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = PayoffExpr::binary(Kind::mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = PayoffExpr::binary(Kind::div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  // digits ['.' digits], not immediately followed by another number or name character.
  double number() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !is_digit(src_[pos_])) fail("expected a number");
    while (!at_end() && is_digit(src_[pos_])) ++pos_;
    if (!at_end() && src_[pos_] == '.') {
      ++pos_;
      if (at_end() || !is_digit(src_[pos_])) fail_at(start, "malformed number");
      while (!at_end() && is_digit(src_[pos_])) ++pos_;
    }
    if (!at_end() && (src_[pos_] == '.' || is_ident_char(src_[pos_]))) fail_at(start, "malformed number");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || ptr != src_.data() + pos_) fail_at(start, "malformed number");
    return value;
  }

  int natural() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !is_digit(src_[pos_])) fail("expected a time index");
    while (!at_end() && is_digit(src_[pos_])) ++pos_;
    if (!at_end() && (src_[pos_] == '.' || is_ident_char(src_[pos_]))) fail_at(start, "time index must be a natural number");
    int value = 0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{}) fail_at(start, "time index out of range");
    return value;
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(src_[pos_])) ++pos_;
    return src_.substr(start, pos_ - start);
  }

  // After "max(" or "min(": a lone S followed by ')' selects the path aggregate.
  bool bare_path_argument() {
    const std::size_t saved = pos_;
    skip_ws();
    if (!at_end() && src_[pos_] == 'S') {
      ++pos_;
      if (at_end() || !is_ident_char(src_[pos_])) {
        skip_ws();
        if (!at_end() && src_[pos_] == ')') {
          ++pos_;
          return true;
        }
      }
    }
    pos_ = saved;
    return false;
  }

  PayoffExpr factor() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (is_digit(c)) return PayoffExpr::constant(number());
    if (c == '.') fail("malformed number");
    if (c == '(') {
      ++pos_;
      PayoffExpr inner = expr();
      expect(')');
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return PayoffExpr::unary(Kind::neg, factor());
    }
    if (!is_ident_start(c)) fail("unexpected '" + std::string(1, c) + "'");

    const std::size_t start = pos_;
    const std::string_view name = identifier();
    if (name == "S") {
      skip_ws();
      if (at_end() || src_[pos_] != '[') fail_at(start, "bare S is only allowed as max(S), min(S) or avg(S)");
      ++pos_;
      const int t = natural();
      expect(']');
      return PayoffExpr::price_at(t);
    }
    if (name == "S_T") return PayoffExpr::leaf(Kind::terminal_price);
    if (name == "lookback") {
      return PayoffExpr::binary(Kind::sub, PayoffExpr::leaf(Kind::path_max), PayoffExpr::leaf(Kind::terminal_price));
    }
    if (name == "max" || name == "min") {
      expect('(');
      if (bare_path_argument()) return PayoffExpr::leaf(name == "max" ? Kind::path_max : Kind::path_min);
      PayoffExpr a = expr();
      expect(',');
      PayoffExpr b = expr();
      expect(')');
      return PayoffExpr::binary(name == "max" ? Kind::max2 : Kind::min2, std::move(a), std::move(b));
    }
    if (name == "avg") {
      expect('(');
      if (!bare_path_argument()) fail("avg takes the path S: avg(S)");
      return PayoffExpr::leaf(Kind::path_avg);
    }
    if (name == "pos") {
      expect('(');
      PayoffExpr a = expr();
      expect(')');
      return PayoffExpr::unary(Kind::pos_part, std::move(a));
    }
    if (name == "call" || name == "put" || name == "forward") {
      expect('(');
      const double strike = number();
      expect(')');
      const auto s_t = PayoffExpr::leaf(Kind::terminal_price);
      const auto k = PayoffExpr::constant(strike);
      if (name == "call") return PayoffExpr::unary(Kind::pos_part, PayoffExpr::binary(Kind::sub, s_t, k));
      if (name == "put") return PayoffExpr::unary(Kind::pos_part, PayoffExpr::binary(Kind::sub, k, s_t));
      return PayoffExpr::binary(Kind::sub, s_t, k);
    }
    fail_at(start, "unknown identifier '" + std::string(name) + "'");
  }
};

std::string format_constant(double value) {
  char buf[512];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

void print(const PayoffExpr& e, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print(e.args[0], out);
    out += op;
    print(e.args[1], out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (i != 0) out += ", ";
      print(e.args[i], out);
    }
    out += ')';
  };
  switch (e.kind) {
    case Kind::constant:
      out += format_constant(e.value);
      return;
    case Kind::price_at:
      out += "S[" + std::to_string(e.index) + "]";
      return;
    case Kind::terminal_price:
      out += "S_T";
      return;
    case Kind::path_max:
      out += "max(S)";
      return;
    case Kind::path_min:
      out += "min(S)";
      return;
    case Kind::path_avg:
      out += "avg(S)";
      return;
    case Kind::add:
      return bin(" + ");
    case Kind::sub:
      return bin(" - ");
    case Kind::mul:
      return bin(" * ");
    case Kind::div:
      return bin(" / ");
    case Kind::neg:
      out += "-(";
      print(e.args[0], out);
      out += ')';
      return;
    case Kind::max2:
      return call("max");
    case Kind::min2:
      return call("min");
    case Kind::pos_part:
      return call("pos");
  }
}

}  // namespace

PayoffExpr parse_payoff(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const PayoffExpr& e) {
  std::string out;
  print(e, out);
  return out;
}

}  // namespace fairprice
