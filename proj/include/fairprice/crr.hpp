#pragma once

// Cox-Ross-Rubinstein binomial market: one risky asset following a
// geometric random walk and one risk-free asset growing at a per-period
// rate r.

#include <stdexcept>
#include <string>

#include "fairprice/lattice.hpp"
#include "fairprice/market.hpp"

namespace fairprice {

inline const std::string kRiskyAsset = "S";
inline const std::string kRiskFreeAsset = "R";
// Non-stock slot a derivative can be listed in; priced at zero by default.
inline const std::string kClaimSlot = "claim";

struct CrrParams {
  double u = 0.0;  // up factor
  double d = 0.0;  // down factor
  double v = 0.0;  // initial risky price
  double r = 0.0;  // per-period risk-free rate
  double p = 0.0;  // physical probability of an up move
};

// Throws std::invalid_argument naming the first violated invariant among
// 0 < d < u, 0 < v, -1 < r, 0 < p < 1.
void validate(const CrrParams& params);

class NotViableError : public std::domain_error {
 public:
  NotViableError() : std::domain_error("market not viable: requires d < 1+r < u") {}
};

// v * product over the first n tosses of (u on up, d on down).
double geom_rand_walk(const CrrParams& params, int n, const TossPath& w);
LatticeProcess geom_rand_walk_process(const CrrParams& params, int horizon, int horizon_cap = kDefaultHorizonCap);

// (1 + r)^n by repeated multiplication; std::domain_error when r <= -1.
double disc_rfr_proc(double r, int n);
// (1 + r)^-n.
double discount_factor(double r, int n);
// X(n, w) / (1 + r)^n at every node.
LatticeProcess discounted_value(double r, const LatticeProcess& x);

// d < 1 + r < u, strict and without tolerance.
bool is_viable(const CrrParams& params);
// (1 + r - d) / (u - d); throws NotViableError when !is_viable(params).
double risk_neutral_q(const CrrParams& params);

// Per-step rate r with (1 + r)^steps = 1 + annual.
double step_rate_from_annual(double annual, int steps_per_year);

// Whether Bernoulli(p) and Bernoulli(q) path measures on the length-T
// lattice have the same null events.
bool filtration_equivalent_bernoulli(double p, double q, int horizon);

class CrrMarket {
 public:
  // Validates params; viability is not required.
  CrrMarket(const CrrParams& params, int horizon, int horizon_cap = kDefaultHorizonCap);

  const CrrParams& params() const { return params_; }
  int horizon() const { return market_.horizon(); }
  const Market& market() const { return market_; }
  const LatticeProcess& risky_prices() const { return market_.price(kRiskyAsset); }
  const LatticeProcess& riskfree_prices() const { return market_.price(kRiskFreeAsset); }
  PathMeasure physical_measure() const { return PathMeasure(params_.p); }
  // Throws NotViableError.
  PathMeasure risk_neutral_measure() const { return PathMeasure(risk_neutral_q(params_)); }

 private:
  CrrParams params_;
  Market market_;
};

}  // namespace fairprice
