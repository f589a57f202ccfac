#include "fairprice/market.hpp"

#include <cmath>
#include <stdexcept>

#include "fairprice/simd/kernels.hpp"

namespace fairprice {

namespace {

void check_same_horizon(const Market& mkt, const QuantityProcess& q) {
  if (mkt.horizon() != q.horizon()) {
    throw std::domain_error("portfolio horizon " + std::to_string(q.horizon()) + " differs from market horizon " +
                            std::to_string(mkt.horizon()));
  }
}

void check_time(const Market& mkt, int n) {
  if (n < 0 || n > mkt.horizon()) {
    throw std::domain_error("time " + std::to_string(n) + " outside the market horizon " +
                            std::to_string(mkt.horizon()));
  }
}

// Supported components, with their price processes; throws on assets the
// market does not price.
std::vector<std::pair<const LatticeProcess*, const PredictableProcess*>> priced_support(const Market& mkt,
                                                                                       const Portfolio& p) {
  std::vector<std::pair<const LatticeProcess*, const PredictableProcess*>> out;
  for (const auto& [asset, quantity] : p.components()) {
    if (quantity.is_zero()) continue;
    if (!mkt.contains(asset)) throw std::invalid_argument("asset '" + asset + "' is not traded on the market");
    out.emplace_back(&mkt.price(asset), &quantity);
  }
  return out;
}

}  // namespace

Market::Market(std::vector<Asset> assets, std::map<std::string, LatticeProcess> prices)
    : assets_(std::move(assets)), prices_(std::move(prices)) {
  if (assets_.empty()) throw std::invalid_argument("market requires at least one asset");
  std::set<std::string> ids;
  bool has_extra = false;
  for (const auto& a : assets_) {
    if (!ids.insert(a.id).second) throw std::invalid_argument("duplicate asset id '" + a.id + "'");
    if (a.kind == AssetKind::extra) has_extra = true;
    if (!prices_.contains(a.id)) throw std::invalid_argument("asset '" + a.id + "' has no price process");
  }
  if (!has_extra) throw std::invalid_argument("market requires a non-stock asset (stocks must be a proper subset)");
  if (prices_.size() != assets_.size()) throw std::invalid_argument("price process given for an unknown asset");
  horizon_ = prices_.begin()->second.horizon();
  for (const auto& [id, process] : prices_) {
    if (process.horizon() != horizon_) {
      throw std::invalid_argument("price process of '" + id + "' does not share the market horizon");
    }
  }
}

std::vector<std::string> Market::stocks() const {
  std::vector<std::string> out;
  for (const auto& a : assets_) {
    if (a.kind == AssetKind::stock) out.push_back(a.id);
  }
  return out;
}

bool Market::contains(const std::string& id) const { return prices_.contains(id); }

bool Market::is_stock(const std::string& id) const {
  for (const auto& a : assets_) {
    if (a.id == id) return a.kind == AssetKind::stock;
  }
  return false;
}

const LatticeProcess& Market::price(const std::string& id) const {
  auto it = prices_.find(id);
  if (it == prices_.end()) throw std::invalid_argument("asset '" + id + "' is not traded on the market");
  return it->second;
}

PredictableProcess::PredictableProcess(int horizon, double fill, int horizon_cap) {
  check_horizon(horizon, horizon_cap);
  levels_.reserve(static_cast<std::size_t>(horizon));
  for (int n = 1; n <= horizon; ++n) levels_.emplace_back(BinaryLattice::node_count(n - 1), fill);
}

PredictableProcess PredictableProcess::from_function(int horizon,
                                                     const std::function<double(int, const TossPath&)>& f,
                                                     int horizon_cap) {
  PredictableProcess x(horizon, 0.0, horizon_cap);
  for (int n = 1; n <= horizon; ++n) {
    auto values = x.level(n);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(n, TossPath::from_index(i, n - 1));
  }
  return x;
}

double PredictableProcess::at(int n, const TossPath& prefix) const {
  if (prefix.size() != n - 1) throw std::domain_error("quantity key: prefix length must be n - 1");
  return level(n)[prefix.index()];
}

void PredictableProcess::set(int n, const TossPath& prefix, double value) {
  if (prefix.size() != n - 1) throw std::domain_error("quantity key: prefix length must be n - 1");
  level(n)[prefix.index()] = value;
}

std::span<const double> PredictableProcess::level(int n) const {
  if (n < 1 || n > horizon()) throw std::domain_error("quantity time " + std::to_string(n) + " outside 1.." +
                                                      std::to_string(horizon()));
  return levels_[static_cast<std::size_t>(n - 1)];
}

std::span<double> PredictableProcess::level(int n) {
  if (n < 1 || n > horizon()) throw std::domain_error("quantity time " + std::to_string(n) + " outside 1.." +
                                                      std::to_string(horizon()));
  return levels_[static_cast<std::size_t>(n - 1)];
}

bool PredictableProcess::is_zero() const {
  for (const auto& lvl : levels_) {
    for (double x : lvl) {
      if (x != 0.0) return false;
    }
  }
  return true;
}

QuantityProcess::QuantityProcess(int horizon) : horizon_(horizon) { check_horizon(horizon, kMaxHorizon); }

double QuantityProcess::at(const std::string& asset, int n, const TossPath& prefix) const {
  if (const auto* q = find(asset)) return q->at(n, prefix);
  if (n < 1 || n > horizon_ || prefix.size() != n - 1) throw std::domain_error("quantity key out of range");
  return 0.0;
}

const PredictableProcess* QuantityProcess::find(const std::string& asset) const {
  auto it = quantities_.find(asset);
  return it == quantities_.end() ? nullptr : &it->second;
}

void QuantityProcess::set_component(const std::string& asset, PredictableProcess quantity) {
  if (quantity.horizon() != horizon_) throw std::domain_error("quantity component horizon mismatch");
  quantities_.insert_or_assign(asset, std::move(quantity));
}

QuantityProcess qty_empty(int horizon) { return QuantityProcess(horizon); }

QuantityProcess qty_single(const std::string& asset, const PredictableProcess& quantity) {
  QuantityProcess q(quantity.horizon());
  q.set_component(asset, quantity);
  return q;
}

QuantityProcess qty_sum(const QuantityProcess& q1, const QuantityProcess& q2) {
  if (q1.horizon() != q2.horizon()) throw std::domain_error("qty_sum: horizon mismatch");
  QuantityProcess out = q1;
  for (const auto& [asset, quantity] : q2.components()) {
    const auto* existing = out.find(asset);
    if (existing == nullptr) {
      out.set_component(asset, quantity);
      continue;
    }
    PredictableProcess sum = *existing;
    for (int n = 1; n <= sum.horizon(); ++n) {
      auto dst = sum.level(n);
      auto src = quantity.level(n);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    out.set_component(asset, std::move(sum));
  }
  return out;
}

QuantityProcess qty_mult_comp(const QuantityProcess& q, const PredictableProcess& factor) {
  if (q.horizon() != factor.horizon()) throw std::domain_error("qty_mult_comp: horizon mismatch");
  QuantityProcess out(q.horizon());
  for (const auto& [asset, quantity] : q.components()) {
    PredictableProcess scaled = quantity;
    for (int n = 1; n <= scaled.horizon(); ++n) {
      auto dst = scaled.level(n);
      auto f = factor.level(n);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= f[i];
    }
    out.set_component(asset, std::move(scaled));
  }
  return out;
}

QuantityProcess qty_rem_comp(const QuantityProcess& q, const std::string& asset) {
  QuantityProcess out = q;
  out.erase_component(asset);
  return out;
}

std::set<std::string> support_set(const QuantityProcess& q) {
  std::set<std::string> out;
  for (const auto& [asset, quantity] : q.components()) {
    if (!quantity.is_zero()) out.insert(asset);
  }
  return out;
}

bool is_portfolio(const Market& mkt, const QuantityProcess& q) {
  if (q.horizon() != mkt.horizon()) return false;
  for (const auto& asset : support_set(q)) {
    if (!mkt.contains(asset)) return false;
  }
  return true;
}

std::vector<double> value_level(const Market& mkt, const Portfolio& p, int n) {
  check_same_horizon(mkt, p);
  check_time(mkt, n);
  if (n == mkt.horizon()) {
    if (n == 0) return {0.0};  // no quantities exist on a zero-horizon market
    return closing_value_level(mkt, p, n);
  }
  std::vector<double> acc(BinaryLattice::node_count(n), 0.0);
  for (const auto& [price, quantity] : priced_support(mkt, p)) {
    simd::multiply_accumulate(acc, price->level(n), quantity->level(n + 1));
  }
  return acc;
}

std::vector<double> closing_value_level(const Market& mkt, const Portfolio& p, int n) {
  check_same_horizon(mkt, p);
  check_time(mkt, n);
  if (n == 0) return value_level(mkt, p, 0);
  const std::size_t nodes = BinaryLattice::node_count(n);
  std::vector<double> acc(nodes, 0.0);
  std::vector<double> held(nodes);
  for (const auto& [price, quantity] : priced_support(mkt, p)) {
    // The quantity over ]n-1, n] is shared by both children of each time n-1 node.
    simd::expand(quantity->level(n), held, 1.0, 1.0);
    simd::multiply_accumulate(acc, price->level(n), held);
  }
  return acc;
}

double value_process(const Market& mkt, const Portfolio& p, int n, const TossPath& w) {
  const TossPath prefix = w.truncate(n);
  return value_level(mkt, p, n)[prefix.index()];
}

double closing_value_process(const Market& mkt, const Portfolio& p, int n, const TossPath& w) {
  const TossPath prefix = w.truncate(n);
  return closing_value_level(mkt, p, n)[prefix.index()];
}

double self_financing_defect(const Market& mkt, const Portfolio& p) {
  double defect = 0.0;
  for (int n = 1; n < mkt.horizon(); ++n) {
    const auto v = value_level(mkt, p, n);
    const auto c = closing_value_level(mkt, p, n);
    defect = std::max(defect, simd::max_abs_diff(v, c));
  }
  return defect;
}

bool is_self_financing(const Market& mkt, const Portfolio& p, double tolerance) {
  return self_financing_defect(mkt, p) <= tolerance;
}

Portfolio make_self_financing(const Market& mkt, const Portfolio& p, const std::string& funding, double v0) {
  check_same_horizon(mkt, p);
  const LatticeProcess& funding_price = mkt.price(funding);
  for (int n = 0; n <= mkt.horizon(); ++n) {
    for (double x : funding_price.level(n)) {
      if (x == 0.0) {
        throw std::domain_error("funding asset '" + funding + "' has a zero price at time " + std::to_string(n));
      }
    }
  }

  const Portfolio rest = qty_rem_comp(p, funding);
  PredictableProcess funding_qty(mkt.horizon(), 0.0, kMaxHorizon);
  for (int n = 0; n < mkt.horizon(); ++n) {
    const auto rest_value = value_level(mkt, rest, n);
    const auto price = funding_price.level(n);
    auto out = funding_qty.level(n + 1);
    if (n == 0) {
      out[0] = (v0 - rest_value[0]) / price[0];
      continue;
    }
    // Target: closing value at n of the portfolio built so far.
    const auto rest_closing = closing_value_level(mkt, rest, n);
    const auto held = funding_qty.level(n);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double target = rest_closing[i] + price[i] * held[i / 2];
      out[i] = (target - rest_value[i]) / price[i];
    }
  }
  Portfolio result = rest;
  result.set_component(funding, std::move(funding_qty));
  return result;
}

bool is_trading_strategy(const QuantityProcess&) { return true; }

bool is_trading_strategy(const QuantityTable& table) {
  const int t = table.horizon;
  for (const auto& [asset, by_time] : table.quantities) {
    if (by_time.size() != static_cast<std::size_t>(t)) return false;
    for (int n = 1; n <= t; ++n) {
      const auto& values = by_time[static_cast<std::size_t>(n - 1)];
      if (values.size() != BinaryLattice::node_count(t)) return false;
      const std::size_t block = std::size_t{1} << (t - (n - 1));
      for (std::size_t start = 0; start < values.size(); start += block) {
        for (std::size_t i = start + 1; i < start + block; ++i) {
          if (values[i] != values[start]) return false;
        }
      }
    }
  }
  return true;
}

QuantityProcess to_quantity_process(const QuantityTable& table) {
  const int t = table.horizon;
  QuantityProcess q(t);
  for (const auto& [asset, by_time] : table.quantities) {
    QuantityTable single{t, {{asset, by_time}}};
    if (!is_trading_strategy(single)) {
      throw std::domain_error("quantities of '" + asset + "' are not predictable");
    }
    PredictableProcess component(t, 0.0, kMaxHorizon);
    for (int n = 1; n <= t; ++n) {
      const auto& values = by_time[static_cast<std::size_t>(n - 1)];
      auto dst = component.level(n);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = values[j << (t - (n - 1))];
    }
    q.set_component(asset, std::move(component));
  }
  return q;
}

double init_value(const Market& mkt, const Portfolio& p) { return value_level(mkt, p, 0)[0]; }

bool approx_equal(const QuantityProcess& a, const QuantityProcess& b, double tolerance) {
  if (a.horizon() != b.horizon()) return false;
  std::set<std::string> assets;
  for (const auto& [id, _] : a.components()) assets.insert(id);
  for (const auto& [id, _] : b.components()) assets.insert(id);
  const PredictableProcess zero(a.horizon(), 0.0, kMaxHorizon);
  for (const auto& id : assets) {
    const auto* qa = a.find(id);
    const auto* qb = b.find(id);
    const PredictableProcess& x = qa ? *qa : zero;
    const PredictableProcess& y = qb ? *qb : zero;
    for (int n = 1; n <= a.horizon(); ++n) {
      if (simd::max_abs_diff(x.level(n), y.level(n)) > tolerance) return false;
    }
  }
  return true;
}

}  // namespace fairprice
