#include "fairprice/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fairprice/simd/kernels.hpp"

namespace fairprice {

namespace {

void check_maturity(const CrrMarket& crr, int maturity) {
  if (maturity < 0 || maturity > crr.horizon()) {
    throw std::domain_error("maturity " + std::to_string(maturity) + " outside the market horizon " +
                            std::to_string(crr.horizon()));
  }
}

void check_payoff_table(std::span<const double> payoff, int maturity) {
  if (payoff.size() != BinaryLattice::node_count(maturity)) {
    throw std::invalid_argument("payoff table has " + std::to_string(payoff.size()) + " entries, expected 2^" +
                                std::to_string(maturity));
  }
  for (std::size_t i = 0; i < payoff.size(); ++i) {
    if (!std::isfinite(payoff[i])) {
      throw PayoffEvalError("payoff is not finite at path " + TossPath::from_index(i, maturity).to_string());
    }
  }
}

}  // namespace

std::vector<double> terminal_payoff(const CrrMarket& crr, const PayoffExpr& payoff, int maturity) {
  check_maturity(crr, maturity);
  const LatticeProcess& s = crr.risky_prices();
  const std::size_t count = BinaryLattice::node_count(maturity);
  std::vector<double> out(count);
  std::vector<double> path_prices(static_cast<std::size_t>(maturity) + 1);
  for (std::size_t i = 0; i < count; ++i) {
    for (int k = 0; k <= maturity; ++k) path_prices[static_cast<std::size_t>(k)] = s.level(k)[i >> (maturity - k)];
    try {
      out[i] = eval_payoff(payoff, path_prices);
    } catch (const PayoffEvalError& e) {
      throw PayoffEvalError("at path " + TossPath::from_index(i, maturity).to_string() + ": " + e.what());
    }
  }
  return out;
}

double fair_price(const CrrMarket& crr, std::span<const double> payoff, int maturity) {
  check_maturity(crr, maturity);
  check_payoff_table(payoff, maturity);
  const PathMeasure q = crr.risk_neutral_measure();
  const auto probs = path_probabilities(q, maturity);
  return simd::dot(probs, payoff) / disc_rfr_proc(crr.params().r, maturity);
}

double fair_price(const CrrMarket& crr, const PayoffExpr& payoff, int maturity) {
  if (!is_viable(crr.params())) throw NotViableError();
  return fair_price(crr, terminal_payoff(crr, payoff, maturity), maturity);
}

PriceLattice price_lattice(const CrrMarket& crr, std::span<const double> payoff, int maturity) {
  check_maturity(crr, maturity);
  check_payoff_table(payoff, maturity);
  const double q = risk_neutral_q(crr.params());
  const double r = crr.params().r;
  const double growth = 1.0 + r;

  PriceLattice out{LatticeProcess(maturity, 0.0, kMaxHorizon), q, r};
  std::copy(payoff.begin(), payoff.end(), out.values.level(maturity).begin());
  for (int n = maturity - 1; n >= 0; --n) {
    simd::contract(out.values.level(n + 1), out.values.level(n), q / growth, (1.0 - q) / growth);
  }

  const double expected = fair_price(crr, payoff, maturity);
  if (std::fabs(out.price() - expected) > 1e-9 * std::max(1.0, std::fabs(expected))) {
    throw std::logic_error("backward induction root " + std::to_string(out.price()) +
                           " disagrees with the risk-neutral expectation " + std::to_string(expected));
  }
  return out;
}

PriceLattice price_lattice(const CrrMarket& crr, const PayoffExpr& payoff, int maturity) {
  if (!is_viable(crr.params())) throw NotViableError();
  return price_lattice(crr, terminal_payoff(crr, payoff, maturity), maturity);
}

Portfolio replicating_portfolio(const CrrMarket& crr, std::span<const double> payoff, int maturity) {
  const PriceLattice lattice = price_lattice(crr, payoff, maturity);
  const LatticeProcess& v = lattice.values;
  const LatticeProcess& s = crr.risky_prices();
  const int horizon = crr.horizon();

  PredictableProcess delta(horizon, 0.0, kMaxHorizon);
  PredictableProcess bond(horizon, 0.0, kMaxHorizon);
  if (maturity == 0) {
    // A constant claim is held as cash in the risk-free asset (price 1 at time 0).
    for (int n = 1; n <= horizon; ++n) std::fill(bond.level(n).begin(), bond.level(n).end(), v.level(0)[0]);
  } else {
    for (int n = 0; n < maturity; ++n) {
      auto dn = delta.level(n + 1);
      simd::hedge_ratio(v.level(n + 1), s.level(n + 1), dn);
      const double growth = disc_rfr_proc(crr.params().r, n);
      const auto value = v.level(n);
      const auto price = s.level(n);
      auto bn = bond.level(n + 1);
      for (std::size_t i = 0; i < bn.size(); ++i) bn[i] = (value[i] - dn[i] * price[i]) / growth;
    }
    for (int k = maturity + 1; k <= horizon; ++k) {
      const auto last_delta = delta.level(maturity);
      const auto last_bond = bond.level(maturity);
      auto dk = delta.level(k);
      auto bk = bond.level(k);
      for (std::size_t i = 0; i < dk.size(); ++i) {
        dk[i] = last_delta[i >> (k - maturity)];
        bk[i] = last_bond[i >> (k - maturity)];
      }
    }
  }

  Portfolio p(horizon);
  p.set_component(kRiskyAsset, std::move(delta));
  p.set_component(kRiskFreeAsset, std::move(bond));
  return p;
}

Portfolio replicating_portfolio(const CrrMarket& crr, const PayoffExpr& payoff, int maturity) {
  if (!is_viable(crr.params())) throw NotViableError();
  return replicating_portfolio(crr, terminal_payoff(crr, payoff, maturity), maturity);
}

ReplicationReport verify_replication(const CrrMarket& crr, const Portfolio& p, std::span<const double> payoff,
                                     int maturity, double tolerance) {
  check_maturity(crr, maturity);
  check_payoff_table(payoff, maturity);
  const Market& mkt = crr.market();
  for (const auto& asset : support_set(p)) {
    if (!mkt.is_stock(asset)) {
      throw std::domain_error("stock-portfolio: support contains non-stock asset '" + asset + "'");
    }
  }
  ReplicationReport report;
  report.self_financing_defect = self_financing_defect(mkt, p);
  report.self_financing = report.self_financing_defect <= tolerance;
  report.trading_strategy = is_trading_strategy(p);
  const auto closing = closing_value_level(mkt, p, maturity);
  report.max_terminal_error = simd::max_abs_diff(closing, payoff);
  report.init_value = init_value(mkt, p);
  return report;
}

ReplicationReport verify_replication(const CrrMarket& crr, const Portfolio& p, const PayoffExpr& payoff,
                                     int maturity, double tolerance) {
  return verify_replication(crr, p, terminal_payoff(crr, payoff, maturity), maturity, tolerance);
}

double martingale_residual(const PathMeasure& m, const LatticeProcess& x, int maturity) {
  if (maturity < 0 || maturity > x.horizon()) throw std::domain_error("martingale check: maturity beyond the horizon");
  double residual = 0.0;
  for (int n = 0; n < maturity; ++n) {
    const auto expected = conditional_expectation_level(m, x, n);
    const auto probs = path_probabilities(m, n);
    const auto actual = x.level(n);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (probs[i] > 0.0) residual = std::max(residual, std::fabs(actual[i] - expected[i]));
    }
  }
  return residual;
}

bool is_martingale(const PathMeasure& m, const LatticeProcess& x, int maturity, double tolerance) {
  return martingale_residual(m, x, maturity) <= tolerance;
}

bool is_risk_neutral(const CrrMarket& crr, const PathMeasure& m, double tolerance) {
  for (const auto& stock : crr.market().stocks()) {
    const LatticeProcess discounted = discounted_value(crr.params().r, crr.market().price(stock));
    if (!is_martingale(m, discounted, crr.horizon(), tolerance)) return false;
  }
  return true;
}

std::string_view to_string(ArbitrageClause clause) {
  switch (clause) {
    case ArbitrageClause::init_nonzero:
      return "init-nonzero";
    case ArbitrageClause::not_self_financing:
      return "not-self-financing";
    case ArbitrageClause::not_predictable:
      return "not-predictable";
    case ArbitrageClause::negative_closing_value:
      return "negative-closing-value";
    case ArbitrageClause::no_strict_gain:
      return "no-strict-gain";
    case ArbitrageClause::none:
      return "none";
  }
  return "unknown";
}

ArbitrageVerdict is_arbitrage_process(const Market& mkt, const PathMeasure& m, const Portfolio& p, double tolerance) {
  if (!is_portfolio(mkt, p)) throw std::invalid_argument("arbitrage check: not a portfolio on this market");
  if (std::fabs(init_value(mkt, p)) > tolerance) return {false, 0, ArbitrageClause::init_nonzero};
  if (!is_self_financing(mkt, p, kReplicationTolerance)) return {false, 0, ArbitrageClause::not_self_financing};
  if (!is_trading_strategy(p)) return {false, 0, ArbitrageClause::not_predictable};

  bool some_time_nonnegative = false;
  for (int t = 1; t <= mkt.horizon(); ++t) {
    const auto closing = closing_value_level(mkt, p, t);
    const auto probs = path_probabilities(m, t);
    bool nonnegative = true;
    bool gain = false;
    for (std::size_t i = 0; i < closing.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      if (closing[i] < -tolerance) nonnegative = false;
      if (closing[i] > tolerance) gain = true;
    }
    if (nonnegative && gain) return {true, t, ArbitrageClause::none};
    some_time_nonnegative = some_time_nonnegative || nonnegative;
  }
  return {false, 0,
          some_time_nonnegative || mkt.horizon() == 0 ? ArbitrageClause::no_strict_gain
                                                      : ArbitrageClause::negative_closing_value};
}

ArbitrageVerdict is_arbitrage_process(const CrrMarket& crr, const PathMeasure& m, const Portfolio& p,
                                      double tolerance) {
  return is_arbitrage_process(crr.market(), m, p, tolerance);
}

Portfolio construct_arbitrage(const CrrMarket& crr) {
  const CrrParams& params = crr.params();
  if (is_viable(params)) throw std::domain_error("market is viable: no arbitrage portfolio exists");
  if (crr.horizon() < 1) throw std::domain_error("arbitrage construction needs a horizon of at least 1");
  // Stock cheaper to hold than cash in every state (1+r <= d): buy it with
  // borrowed cash. Otherwise (u <= 1+r) short it and lend the proceeds.
  const double stock_side = (1.0 + params.r <= params.d) ? 1.0 : -1.0;
  const int horizon = crr.horizon();
  return qty_sum(qty_single(kRiskyAsset, PredictableProcess(horizon, stock_side, kMaxHorizon)),
                 qty_single(kRiskFreeAsset, PredictableProcess(horizon, -stock_side * params.v, kMaxHorizon)));
}

bool one_step_no_arbitrage_check(const CrrMarket& crr) {
  const CrrParams& params = crr.params();
  const double growth = 1.0 + params.r;
  const LatticeProcess& s = crr.risky_prices();
  const int last = std::max(crr.horizon() - 1, 0);
  for (int n = 0; n <= last; ++n) {
    for (double price : s.level(n)) {
      const double riskless = growth * price;
      if (!(price * params.d < riskless && riskless < price * params.u)) return false;
    }
  }
  return true;
}

}  // namespace fairprice
