#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fairprice/io.hpp"
#include "fairprice/pricing.hpp"
#include "support/generators.hpp"

namespace fairprice {
namespace {

using testing::Rng;

const CrrParams kLookbackParams{1.2, 0.8, 10.0, 0.03, 0.5};

PayoffExpr random_claim(Rng& rng, const CrrParams& params, int maturity) {
  const double k = std::round(rng.uniform(0.6, 1.4) * params.v * 100.0) / 100.0;
  switch (rng.integer(0, 5)) {
    case 0:
      return parse_payoff("call(" + format_shortest(k) + ")");
    case 1:
      return parse_payoff("put(" + format_shortest(k) + ")");
    case 2:
      return parse_payoff("forward(" + format_shortest(k) + ")");
    case 3:
      return parse_payoff("lookback");
    case 4:
      return parse_payoff("pos(avg(S) - " + format_shortest(k) + ")");
    default:
      return testing::random_payoff_expr(rng, 4, maturity);
  }
}

TEST(PricingTest, LookbackGoldenValues) {
  const CrrMarket crr(kLookbackParams, 2);
  const auto lookback = parse_payoff("lookback");
  const auto payoff = terminal_payoff(crr, lookback, 2);
  const double expected[] = {0.0, 2.4, 0.4, 3.6};
  ASSERT_EQ(payoff.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(payoff[i], expected[i], 1e-12);
  EXPECT_NEAR(fair_price(crr, lookback, 2), 1.2579, 5e-4);

  const PriceLattice tree = price_lattice(crr, lookback, 2);
  EXPECT_NEAR(tree.price(), 1.2579, 5e-4);
  EXPECT_NEAR(tree.values.at(1, {kUp}), 0.9903, 5e-4);
  EXPECT_NEAR(tree.values.at(1, {kDown}), 1.7087, 5e-4);
  EXPECT_NEAR(tree.q, 0.575, 1e-12);

  const Portfolio p = replicating_portfolio(crr, lookback, 2);
  EXPECT_NEAR(p.at(kRiskyAsset, 1, {}), -0.1796, 5e-4);
  EXPECT_NEAR(p.at(kRiskyAsset, 2, {kUp}), -0.5, 5e-4);
  EXPECT_NEAR(p.at(kRiskyAsset, 2, {kDown}), -1.0, 5e-4);
  EXPECT_NEAR(p.at(kRiskFreeAsset, 1, {}), 3.0539, 5e-4);
  EXPECT_EQ(support_set(p), (std::set<std::string>{kRiskyAsset, kRiskFreeAsset}));

  const auto report = verify_replication(crr, p, lookback, 2);
  EXPECT_TRUE(report.replicating());
  EXPECT_NEAR(report.init_value, tree.price(), 1e-9);
}

TEST(PricingTest, PriceDoesNotDependOnPhysicalProbability) {
  for (double p : {0.1, 0.5, 0.9}) {
    const CrrMarket crr({1.2, 0.8, 10.0, 0.03, p}, 2);
    EXPECT_NEAR(fair_price(crr, parse_payoff("lookback"), 2), 1.2579, 5e-4);
  }
}

TEST(PricingTest, ForwardPriceIsModelIndependent) {
  const CrrMarket example({1.1, 0.9, 95.0, 0.02, 0.5}, 2);
  const double price = fair_price(example, parse_payoff("forward(98)"), 2);
  EXPECT_NEAR(price, 95.0 - 98.0 / 1.0404, 1e-9);
  EXPECT_EQ(std::round(price * 100.0) / 100.0, 0.81);

  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const auto params = testing::random_viable_params(rng);
    const int t = rng.integer(1, 10);
    const CrrMarket crr(params, t);
    const double k = rng.uniform(0.5, 1.5) * params.v;
    const std::vector<double> payoff = [&] {
      std::vector<double> out;
      for (double s : crr.risky_prices().level(t)) out.push_back(s - k);
      return out;
    }();
    EXPECT_NEAR(fair_price(crr, payoff, t), params.v - k * discount_factor(params.r, t), 1e-9 * params.v);
  }
}

TEST(PricingTest, ConstantAndWorthlessClaims) {
  const CrrMarket crr(kLookbackParams, 3);
  EXPECT_NEAR(fair_price(crr, parse_payoff("7"), 3), 7.0 / std::pow(1.03, 3), 1e-12);
  EXPECT_EQ(fair_price(crr, parse_payoff("call(1000)"), 3), 0.0);
  EXPECT_EQ(fair_price(crr, parse_payoff("5"), 0), 5.0);

  const Portfolio cash = replicating_portfolio(crr, parse_payoff("5"), 0);
  EXPECT_TRUE(verify_replication(crr, cash, parse_payoff("5"), 0).replicating());
  EXPECT_EQ(cash.at(kRiskFreeAsset, 3, {kUp, kUp}), 5.0);
}

TEST(PricingTest, HoldingTheStockReplicatesItself) {
  const CrrMarket crr(kLookbackParams, 4);
  const Portfolio p = replicating_portfolio(crr, parse_payoff("S_T"), 4);
  for (int n = 1; n <= 4; ++n) {
    for (const auto& w : enumerate_paths(n - 1)) {
      EXPECT_NEAR(p.at(kRiskyAsset, n, w), 1.0, 1e-12);
      EXPECT_NEAR(p.at(kRiskFreeAsset, n, w), 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(fair_price(crr, parse_payoff("S_T"), 4), 10.0, 1e-12);
}

TEST(PricingTest, ErrorsSurfaceAsTypedExceptions) {
  const CrrMarket inviable({1.2, 0.8, 10.0, 0.25, 0.5}, 2);
  EXPECT_THROW(fair_price(inviable, parse_payoff("lookback"), 2), NotViableError);
  EXPECT_THROW(replicating_portfolio(inviable, parse_payoff("lookback"), 2), NotViableError);

  const CrrMarket crr(kLookbackParams, 2);
  EXPECT_THROW(fair_price(crr, parse_payoff("lookback"), 3), std::domain_error);
  EXPECT_THROW(fair_price(crr, std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
  EXPECT_THROW(fair_price(crr, parse_payoff("S[3]"), 2), PayoffEvalError);
  EXPECT_THROW(fair_price(crr, parse_payoff("1 / (S_T - S_T)"), 2), PayoffEvalError);
}

TEST(PricingTest, ReplicationOfRandomClaims) {
  Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    const auto params = testing::random_viable_params(rng);
    const int horizon = rng.integer(1, 8);
    const int maturity = rng.integer(1, horizon);
    const CrrMarket crr(params, horizon);
    const PayoffExpr claim = random_claim(rng, params, maturity);
    const auto payoff = terminal_payoff(crr, claim, maturity);
    const Portfolio p = replicating_portfolio(crr, payoff, maturity);
    const auto report = verify_replication(crr, p, payoff, maturity);
    const double scale = std::max(1.0, *std::max_element(payoff.begin(), payoff.end(),
                                                         [](double a, double b) { return std::fabs(a) < std::fabs(b); }));
    EXPECT_TRUE(report.self_financing) << to_string(claim) << " defect " << report.self_financing_defect;
    EXPECT_TRUE(report.trading_strategy);
    EXPECT_LE(report.max_terminal_error, 1e-9 * std::fabs(scale)) << to_string(claim);
    EXPECT_NEAR(report.init_value, fair_price(crr, payoff, maturity), 1e-9 * std::fabs(scale));
    EXPECT_TRUE(is_self_financing(crr.market(), p));  // also across the held-after-maturity stretch
  }
}

TEST(PricingTest, PerturbedHedgeStopsReplicating) {
  const CrrMarket crr(kLookbackParams, 3);
  const auto claim = parse_payoff("lookback");
  Portfolio p = replicating_portfolio(crr, claim, 3);
  PredictableProcess delta = *p.find(kRiskyAsset);
  delta.set(2, {kUp}, delta.at(2, {kUp}) + 0.01);
  p.set_component(kRiskyAsset, delta);
  const auto report = verify_replication(crr, p, claim, 3);
  EXPECT_FALSE(report.replicating());
  EXPECT_FALSE(report.self_financing);

  const auto zero = verify_replication(crr, qty_empty(3), claim, 3);
  EXPECT_TRUE(zero.self_financing);
  EXPECT_FALSE(zero.replicating());
  const auto payoff = terminal_payoff(crr, claim, 3);
  EXPECT_EQ(zero.max_terminal_error, *std::max_element(payoff.begin(), payoff.end()));

  Portfolio with_claim = replicating_portfolio(crr, claim, 3);
  with_claim.set_component(kClaimSlot, PredictableProcess(3, 1.0));
  EXPECT_THROW(verify_replication(crr, with_claim, claim, 3), std::domain_error);
}

TEST(PricingTest, DiscountedPricesAreMartingalesOnlyUnderQ) {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto params = testing::random_viable_params(rng);
    const int t = rng.integer(1, 10);
    const CrrMarket crr(params, t);
    const double q = risk_neutral_q(params);
    const auto discounted = discounted_value(params.r, crr.risky_prices());
    EXPECT_LT(martingale_residual(PathMeasure(q), discounted, t), 1e-9 * params.v);

    const auto payoff = terminal_payoff(crr, random_claim(rng, params, t), t);
    const Portfolio p = replicating_portfolio(crr, payoff, t);
    LatticeProcess hedged(t, 0.0, kMaxHorizon);
    for (int n = 0; n <= t; ++n) {
      const auto closing = closing_value_level(crr.market(), p, n);
      std::copy(closing.begin(), closing.end(), hedged.level(n).begin());
    }
    const auto discounted_hedge = discounted_value(params.r, hedged);
    double scale = std::max(1.0, params.v);
    for (double x : payoff) scale = std::max(scale, std::fabs(x));
    EXPECT_LT(martingale_residual(PathMeasure(q), discounted_hedge, t), 1e-9 * scale);

    for (double shift : {-0.05, 0.05}) {
      if (q + shift <= 0.0 || q + shift >= 1.0) continue;
      EXPECT_GT(martingale_residual(PathMeasure(q + shift), discounted, t), 1e-4);
    }
  }
}

TEST(PricingTest, RiskNeutralMeasureIsUnique) {
  const CrrMarket crr(kLookbackParams, 3);
  EXPECT_TRUE(is_risk_neutral(crr, crr.risk_neutral_measure()));
  EXPECT_FALSE(is_risk_neutral(crr, crr.physical_measure()));
  int found = 0;
  for (int i = 1; i < 1000; ++i) {
    const double q = i / 1000.0;
    if (is_risk_neutral(crr, PathMeasure(q))) {
      ++found;
      EXPECT_NEAR(q, 0.575, 0.01);
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(PricingTest, NonnegativeClaimsHavePositivePrices) {
  Rng rng(54);
  for (int trial = 0; trial < 40; ++trial) {
    const auto params = testing::random_viable_params(rng);
    const int t = rng.integer(1, 8);
    const CrrMarket crr(params, t);
    std::vector<double> payoff(BinaryLattice::node_count(t), 0.0);
    payoff[static_cast<std::size_t>(rng.integer(0, static_cast<int>(payoff.size()) - 1))] = rng.uniform(0.1, 5.0);
    EXPECT_GT(fair_price(crr, payoff, t), 0.0);
  }
}

TEST(ArbitrageTest, ConstructedPortfoliosAreCertified) {
  struct Case {
    CrrParams params;
    double up_gain, down_gain;
  };
  const Case cases[] = {
      {{1.2, 1.05, 10.0, 0.0, 0.5}, 2.0, 0.5},  // 1+r <= d: long the stock
      {{1.1, 0.9, 10.0, 0.2, 0.5}, 1.0, 3.0},   // u <= 1+r: short the stock
  };
  for (const auto& c : cases) {
    const CrrMarket crr(c.params, 3);
    ASSERT_FALSE(is_viable(c.params));
    const Portfolio p = construct_arbitrage(crr);
    EXPECT_EQ(init_value(crr.market(), p), 0.0);
    EXPECT_NEAR(closing_value_process(crr.market(), p, 1, {kUp}), c.up_gain, 1e-12);
    EXPECT_NEAR(closing_value_process(crr.market(), p, 1, {kDown}), c.down_gain, 1e-12);
    const auto verdict = is_arbitrage_process(crr, crr.physical_measure(), p);
    EXPECT_TRUE(verdict.is_arbitrage);
    EXPECT_EQ(verdict.witness_time, 1);
    EXPECT_EQ(verdict.violated_clause, ArbitrageClause::none);
  }
  EXPECT_THROW(construct_arbitrage(CrrMarket(kLookbackParams, 2)), std::domain_error);
}

TEST(ArbitrageTest, ClausesAreReported) {
  const CrrMarket crr(kLookbackParams, 2);
  const PathMeasure m = crr.physical_measure();
  EXPECT_EQ(is_arbitrage_process(crr, m, qty_single(kRiskyAsset, PredictableProcess(2, 1.0))).violated_clause,
            ArbitrageClause::init_nonzero);

  PredictableProcess jump(2, 1.0);
  jump.set(2, {kUp}, 2.0);
  const Portfolio unfunded =
      qty_sum(qty_single(kRiskyAsset, jump), qty_single(kRiskFreeAsset, PredictableProcess(2, -10.0)));
  EXPECT_EQ(is_arbitrage_process(crr, m, unfunded).violated_clause, ArbitrageClause::not_self_financing);

  const auto zero = is_arbitrage_process(crr, m, qty_empty(2));
  EXPECT_FALSE(zero.is_arbitrage);
  EXPECT_EQ(zero.violated_clause, ArbitrageClause::no_strict_gain);

  // Long stock against cash in a viable market loses on the down path.
  const Portfolio bet =
      qty_sum(qty_single(kRiskyAsset, PredictableProcess(2, 1.0)), qty_single(kRiskFreeAsset, PredictableProcess(2, -10.0)));
  const auto verdict = is_arbitrage_process(crr, m, bet);
  EXPECT_FALSE(verdict.is_arbitrage);
  EXPECT_EQ(verdict.violated_clause, ArbitrageClause::negative_closing_value);
  EXPECT_EQ(to_string(ArbitrageClause::init_nonzero), "init-nonzero");
}

TEST(ArbitrageTest, OneStepCheckAgreesWithViability) {
  const double factors[] = {0.5, 0.75, 0.875, 1.0, 1.125, 1.25, 1.5};
  const double rates[] = {-0.5, -0.25, 0.0, 0.125, 0.25, 0.5};
  int inviable = 0;
  for (double d : factors) {
    for (double u : factors) {
      if (!(d < u)) continue;
      for (double r : rates) {
        const CrrParams params{u, d, 8.0, r, 0.5};
        const CrrMarket crr(params, 3);
        EXPECT_EQ(one_step_no_arbitrage_check(crr), is_viable(params)) << u << " " << d << " " << r;
        if (!is_viable(params)) {
          ++inviable;
          const auto verdict = is_arbitrage_process(crr, crr.physical_measure(), construct_arbitrage(crr));
          EXPECT_TRUE(verdict.is_arbitrage);
          EXPECT_EQ(verdict.witness_time, 1);
        }
      }
    }
  }
  EXPECT_GT(inviable, 0);
}

}  // namespace
}  // namespace fairprice
