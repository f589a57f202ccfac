#include "fairprice/crr.hpp"

#include <cmath>

#include "fairprice/simd/kernels.hpp"

namespace fairprice {

namespace {

void check_rate(double r) {
  if (!(r > -1.0)) throw std::domain_error("risk-free rate must satisfy r > -1");
}

Market make_crr_market(const CrrParams& params, int horizon, int horizon_cap) {
  LatticeProcess risky = geom_rand_walk_process(params, horizon, horizon_cap);
  LatticeProcess riskfree(horizon, 0.0, horizon_cap);
  for (int n = 0; n <= horizon; ++n) {
    const double growth = disc_rfr_proc(params.r, n);
    for (double& x : riskfree.level(n)) x = growth;
  }
  std::map<std::string, LatticeProcess> prices;
  prices.emplace(kRiskyAsset, std::move(risky));
  prices.emplace(kRiskFreeAsset, std::move(riskfree));
  prices.emplace(kClaimSlot, LatticeProcess(horizon, 0.0, horizon_cap));
  return Market({{kRiskyAsset, AssetKind::stock}, {kRiskFreeAsset, AssetKind::stock}, {kClaimSlot, AssetKind::extra}},
                std::move(prices));
}

}  // namespace

void validate(const CrrParams& params) {
  if (!(params.d > 0.0 && params.d < params.u)) throw std::invalid_argument("invalid parameters: requires 0 < d < u");
  if (!(params.v > 0.0)) throw std::invalid_argument("invalid parameters: requires 0 < v");
  if (!(params.r > -1.0)) throw std::invalid_argument("invalid parameters: requires -1 < r");
  if (!(params.p > 0.0 && params.p < 1.0)) throw std::invalid_argument("invalid parameters: requires 0 < p < 1");
}

double geom_rand_walk(const CrrParams& params, int n, const TossPath& w) {
  if (n < 0 || n > w.size()) throw std::domain_error("geom_rand_walk: path shorter than the time index");
  double s = params.v;
  for (int i = 0; i < n; ++i) s *= w[i] ? params.u : params.d;
  return s;
}

LatticeProcess geom_rand_walk_process(const CrrParams& params, int horizon, int horizon_cap) {
  LatticeProcess s(horizon, 0.0, horizon_cap);
  s.level(0)[0] = params.v;
  for (int n = 0; n < horizon; ++n) simd::expand(s.level(n), s.level(n + 1), params.u, params.d);
  return s;
}

double disc_rfr_proc(double r, int n) {
  check_rate(r);
  if (n < 0) throw std::domain_error("disc_rfr_proc: negative time");
  double growth = 1.0;
  for (int i = 0; i < n; ++i) growth *= 1.0 + r;
  return growth;
}

double discount_factor(double r, int n) { return 1.0 / disc_rfr_proc(r, n); }

LatticeProcess discounted_value(double r, const LatticeProcess& x) {
  check_rate(r);
  LatticeProcess out = x;
  for (int n = 0; n <= out.horizon(); ++n) {
    // Dividing (rather than multiplying by the inverse) keeps the discounted
    // risk-free price exactly 1.
    const double growth = disc_rfr_proc(r, n);
    for (double& value : out.level(n)) value /= growth;
  }
  return out;
}

bool is_viable(const CrrParams& params) {
  const double growth = 1.0 + params.r;
  return params.d < growth && growth < params.u;
}

double risk_neutral_q(const CrrParams& params) {
  if (!is_viable(params)) throw NotViableError();
  return (1.0 + params.r - params.d) / (params.u - params.d);
}

double step_rate_from_annual(double annual, int steps_per_year) {
  check_rate(annual);
  if (steps_per_year < 1) throw std::domain_error("steps per year must be at least 1");
  if (steps_per_year == 1) return annual;
  return std::expm1(std::log1p(annual) / steps_per_year);
}

bool filtration_equivalent_bernoulli(double p, double q, int horizon) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("filtration equivalence: probabilities must lie in [0, 1]");
  }
  if (horizon < 0) throw std::domain_error("filtration equivalence: negative horizon");
  if (horizon == 0) return true;  // the only events are the empty set and the whole space
  const bool p_interior = p > 0.0 && p < 1.0;
  const bool q_interior = q > 0.0 && q < 1.0;
  return (p_interior && q_interior) || (p == q);
}

CrrMarket::CrrMarket(const CrrParams& params, int horizon, int horizon_cap)
    : params_((validate(params), params)), market_(make_crr_market(params, horizon, horizon_cap)) {}

}  // namespace fairprice
