#pragma once

// Risk-neutral pricing and replication on the CRR lattice, plus the
// verification predicates used to check them: replication, martingale,
// risk neutrality and arbitrage.
//
// Payoffs enter either as a PayoffExpr over the risky price path or as a
// terminal table: 2^T values, one per length-T path in storage order.

#include <span>
#include <string_view>
#include <vector>

#include "fairprice/crr.hpp"
#include "fairprice/lattice.hpp"
#include "fairprice/market.hpp"
#include "fairprice/payoff.hpp"

namespace fairprice {

inline constexpr double kReplicationTolerance = 1e-9;

// Evaluates the expression on every length-T path. Errors name the path.
std::vector<double> terminal_payoff(const CrrMarket& crr, const PayoffExpr& payoff, int maturity);

// Discounted risk-neutral expectation of the payoff.
double fair_price(const CrrMarket& crr, std::span<const double> payoff, int maturity);
double fair_price(const CrrMarket& crr, const PayoffExpr& payoff, int maturity);

struct PriceLattice {
  LatticeProcess values;  // V(n, prefix) for n <= maturity
  double q = 0.0;
  double r = 0.0;

  double price() const { return values.level(0)[0]; }
};

// Backward induction V(n) = (q V(n+1, up) + (1-q) V(n+1, down)) / (1+r).
// The root is cross-checked against fair_price; a mismatch throws std::logic_error.
PriceLattice price_lattice(const CrrMarket& crr, std::span<const double> payoff, int maturity);
PriceLattice price_lattice(const CrrMarket& crr, const PayoffExpr& payoff, int maturity);

// Delta hedge: over ]n, n+1] hold (V_up - V_down) / (S_up - S_down) of the
// risky asset and (V - delta S) / (1+r)^n of the risk-free asset. After the
// maturity the last composition is held unchanged up to the market horizon.
Portfolio replicating_portfolio(const CrrMarket& crr, std::span<const double> payoff, int maturity);
Portfolio replicating_portfolio(const CrrMarket& crr, const PayoffExpr& payoff, int maturity);

struct ReplicationReport {
  bool self_financing = false;
  bool trading_strategy = false;
  double self_financing_defect = 0.0;
  double max_terminal_error = 0.0;
  double init_value = 0.0;

  bool replicating(double tolerance = kReplicationTolerance) const {
    return self_financing && trading_strategy && max_terminal_error <= tolerance;
  }
};

// Throws std::domain_error ("stock-portfolio") when the support contains a
// non-stock asset.
ReplicationReport verify_replication(const CrrMarket& crr, const Portfolio& p, std::span<const double> payoff,
                                     int maturity, double tolerance = kReplicationTolerance);
ReplicationReport verify_replication(const CrrMarket& crr, const Portfolio& p, const PayoffExpr& payoff,
                                     int maturity, double tolerance = kReplicationTolerance);

// Largest |X(n, w) - E[X(n+1) | w]| over nodes n < maturity with positive
// probability under m.
double martingale_residual(const PathMeasure& m, const LatticeProcess& x, int maturity);
bool is_martingale(const PathMeasure& m, const LatticeProcess& x, int maturity, double tolerance = 1e-9);

// Both discounted stock prices are martingales under m.
bool is_risk_neutral(const CrrMarket& crr, const PathMeasure& m, double tolerance = 1e-9);

enum class ArbitrageClause {
  init_nonzero,
  not_self_financing,
  not_predictable,
  negative_closing_value,
  no_strict_gain,
  none,
};

std::string_view to_string(ArbitrageClause clause);

struct ArbitrageVerdict {
  bool is_arbitrage = false;
  int witness_time = 0;
  ArbitrageClause violated_clause = ArbitrageClause::no_strict_gain;
};

// Zero initial value, self-financing, predictable, and some time m in
// 1..horizon where the closing value is >= 0 on every positive-probability
// path and > 0 on at least one. Returns the first such m.
ArbitrageVerdict is_arbitrage_process(const Market& mkt, const PathMeasure& m, const Portfolio& p,
                                      double tolerance = 1e-12);
ArbitrageVerdict is_arbitrage_process(const CrrMarket& crr, const PathMeasure& m, const Portfolio& p,
                                      double tolerance = 1e-12);

// For an inviable market: long one share against v risk-free units when
// 1+r <= d, the mirror image when u <= 1+r. Throws std::domain_error
// ("market is viable") otherwise.
Portfolio construct_arbitrage(const CrrMarket& crr);

// Whether every node's two one-step risky returns strictly straddle 1+r.
bool one_step_no_arbitrage_check(const CrrMarket& crr);

}  // namespace fairprice
