#include <algorithm>
#include <cmath>
#include <string>

#include "fairprice/payoff.hpp"

namespace fairprice {

namespace {

using Kind = PayoffExpr::Kind;

double eval(const PayoffExpr& e, std::span<const double> s) {
  switch (e.kind) {
    case Kind::constant:
      return e.value;
    case Kind::price_at:
      if (e.index < 0 || static_cast<std::size_t>(e.index) >= s.size()) {
        throw PayoffEvalError("S[" + std::to_string(e.index) + "] lies beyond maturity T=" +
                              std::to_string(s.size() - 1));
      }
      return s[static_cast<std::size_t>(e.index)];
    case Kind::terminal_price:
      return s.back();
    case Kind::path_max:
      return *std::max_element(s.begin(), s.end());
    case Kind::path_min:
      return *std::min_element(s.begin(), s.end());
    case Kind::path_avg: {
      double sum = 0.0;
      for (double x : s) sum += x;
      return sum / static_cast<double>(s.size());
    }
    case Kind::add:
      return eval(e.args[0], s) + eval(e.args[1], s);
    case Kind::sub:
      return eval(e.args[0], s) - eval(e.args[1], s);
    case Kind::mul:
      return eval(e.args[0], s) * eval(e.args[1], s);
    case Kind::div: {
      const double num = eval(e.args[0], s);
      const double den = eval(e.args[1], s);
      if (den == 0.0) throw PayoffEvalError("division by zero in " + to_string(e));
      return num / den;
    }
    case Kind::neg:
      return -eval(e.args[0], s);
    case Kind::max2:
      return std::max(eval(e.args[0], s), eval(e.args[1], s));
    case Kind::min2:
      return std::min(eval(e.args[0], s), eval(e.args[1], s));
    case Kind::pos_part:
      return std::max(0.0, eval(e.args[0], s));
  }
  throw PayoffEvalError("unknown payoff node");
}

void collect_horizon(const PayoffExpr& e, PayoffHorizon& h) {
  switch (e.kind) {
    case Kind::price_at:
      h.max_index = std::max(h.max_index, e.index);
      break;
    case Kind::terminal_price:
    case Kind::path_max:
    case Kind::path_min:
    case Kind::path_avg:
      h.parametric = true;
      break;
    default:
      break;
  }
  for (const auto& arg : e.args) collect_horizon(arg, h);
}

}  // namespace

double eval_payoff(const PayoffExpr& e, std::span<const double> prices) {
  if (prices.empty()) throw PayoffEvalError("price path must contain at least S_0");
  const double value = eval(e, prices);
  if (!std::isfinite(value)) throw PayoffEvalError("payoff " + to_string(e) + " is not finite");
  return value;
}

PayoffHorizon payoff_horizon(const PayoffExpr& e) {
  PayoffHorizon h;
  collect_horizon(e, h);
  return h;
}

}  // namespace fairprice
