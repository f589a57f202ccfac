#pragma once

// Payoff expressions over the risky price path S_0..S_T.
//
// Grammar (whitespace-insensitive):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := number | 'S[' nat ']' | 'S_T' | 'max(S)' | 'min(S)' | 'avg(S)'
//           | 'max(' expr ',' expr ')' | 'min(' expr ',' expr ')' | 'pos(' expr ')'
//           | 'call(' number ')' | 'put(' number ')' | 'forward(' number ')'
//           | 'lookback' | '(' expr ')' | '-' factor
//
// call(K) = pos(S_T - K), put(K) = pos(K - S_T), forward(K) = S_T - K and
// lookback = max(S) - S_T are expanded while parsing. Path aggregates range
// over S_0..S_T inclusive.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairprice {

struct PayoffExpr {
  enum class Kind {
    constant,
    price_at,
    terminal_price,
    path_max,
    path_min,
    path_avg,
    add,
    sub,
    mul,
    div,
    neg,
    max2,
    min2,
    pos_part,
  };

  Kind kind = Kind::constant;
  double value = 0.0;  // constant
  int index = 0;       // price_at
  std::vector<PayoffExpr> args;

  static PayoffExpr constant(double c) { return {Kind::constant, c, 0, {}}; }
  static PayoffExpr price_at(int t) { return {Kind::price_at, 0.0, t, {}}; }
  static PayoffExpr leaf(Kind k) { return {k, 0.0, 0, {}}; }
  static PayoffExpr unary(Kind k, PayoffExpr a) { return {k, 0.0, 0, {std::move(a)}}; }
  static PayoffExpr binary(Kind k, PayoffExpr a, PayoffExpr b) { return {k, 0.0, 0, {std::move(a), std::move(b)}}; }

  friend bool operator==(const PayoffExpr&, const PayoffExpr&) = default;
};

class PayoffParseError : public std::runtime_error {
 public:
  PayoffParseError(const std::string& message, std::size_t offset);
  // Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class PayoffEvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PayoffExpr parse_payoff(std::string_view text);

// Canonical form: binary operations fully parenthesised, built-ins expanded.
// parse_payoff(to_string(e)) == e for every parsed e.
std::string to_string(const PayoffExpr& e);

// prices holds S_0..S_T. Throws PayoffEvalError on an index beyond T, a zero
// divisor, or a non-finite result.
double eval_payoff(const PayoffExpr& e, std::span<const double> prices);

struct PayoffHorizon {
  int max_index = 0;        // largest explicit S[t] index, 0 if none
  bool parametric = false;  // uses S_T or a path aggregate, so T comes from the caller
};

PayoffHorizon payoff_horizon(const PayoffExpr& e);

}  // namespace fairprice
