#pragma once

// Discrete markets and portfolio algebra.
//
// Quantity convention: the quantity of an asset at time n (1 <= n <= T) is
// the amount held over ]n-1, n] and is keyed by the first n-1 tosses, so
// quantity processes are predictable by construction. Nothing is stored for
// time 0.
//
//   value(n)         = sum_a price_a(n) * quantity_a(n+1)   (cost of the position held after n)
//   closing value(n) = sum_a price_a(n) * quantity_a(n)     (liquidation at n), value(0) at n = 0
//
// At the horizon there is no further rebalancing and value(T) is defined as
// closing value(T).

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fairprice/lattice.hpp"

namespace fairprice {

enum class AssetKind { stock, extra };

struct Asset {
  std::string id;
  AssetKind kind = AssetKind::stock;
};

class Market {
 public:
  // Requires unique ids, at least one non-stock asset, and one price process
  // per asset, all with the same horizon. Throws std::invalid_argument.
  Market(std::vector<Asset> assets, std::map<std::string, LatticeProcess> prices);

  int horizon() const { return horizon_; }
  const std::vector<Asset>& assets() const { return assets_; }
  std::vector<std::string> stocks() const;
  bool contains(const std::string& id) const;
  bool is_stock(const std::string& id) const;
  const LatticeProcess& price(const std::string& id) const;

 private:
  std::vector<Asset> assets_;
  std::map<std::string, LatticeProcess> prices_;
  int horizon_ = 0;
};

// A real-valued process over times 1..T whose value at n is keyed by the
// first n-1 tosses.
class PredictableProcess {
 public:
  explicit PredictableProcess(int horizon, double fill = 0.0, int horizon_cap = kDefaultHorizonCap);

  // f(n, prefix) for n in 1..T, prefix of length n-1.
  static PredictableProcess from_function(int horizon, const std::function<double(int, const TossPath&)>& f,
                                          int horizon_cap = kDefaultHorizonCap);

  int horizon() const { return static_cast<int>(levels_.size()); }
  double at(int n, const TossPath& prefix) const;
  void set(int n, const TossPath& prefix, double value);

  // 2^(n-1) values in storage order.
  std::span<const double> level(int n) const;
  std::span<double> level(int n);

  bool is_zero() const;

 private:
  std::vector<std::vector<double>> levels_;
};

class QuantityProcess {
 public:
  explicit QuantityProcess(int horizon);

  int horizon() const { return horizon_; }

  // Zero for assets without a component.
  double at(const std::string& asset, int n, const TossPath& prefix) const;
  const PredictableProcess* find(const std::string& asset) const;
  const std::map<std::string, PredictableProcess>& components() const { return quantities_; }

  void set_component(const std::string& asset, PredictableProcess quantity);
  void erase_component(const std::string& asset) { quantities_.erase(asset); }

 private:
  int horizon_;
  std::map<std::string, PredictableProcess> quantities_;
};

// In this finite setting every quantity process has finite support; a
// portfolio on a market is one whose support lies in the market's assets.
using Portfolio = QuantityProcess;

// Quantities given per full length-T path, as loaded from external tables:
// table[asset][n - 1][path index] for n in 1..T.
struct QuantityTable {
  int horizon = 0;
  std::map<std::string, std::vector<std::vector<double>>> quantities;
};

QuantityProcess qty_empty(int horizon);
QuantityProcess qty_single(const std::string& asset, const PredictableProcess& quantity);
QuantityProcess qty_sum(const QuantityProcess& q1, const QuantityProcess& q2);
QuantityProcess qty_mult_comp(const QuantityProcess& q, const PredictableProcess& factor);
QuantityProcess qty_rem_comp(const QuantityProcess& q, const std::string& asset);

// Assets with a nonzero quantity at some node.
std::set<std::string> support_set(const QuantityProcess& q);

bool is_portfolio(const Market& mkt, const QuantityProcess& q);

double value_process(const Market& mkt, const Portfolio& p, int n, const TossPath& w);
double closing_value_process(const Market& mkt, const Portfolio& p, int n, const TossPath& w);

// The same processes over every node of level n, in storage order.
std::vector<double> value_level(const Market& mkt, const Portfolio& p, int n);
std::vector<double> closing_value_level(const Market& mkt, const Portfolio& p, int n);

// |value(n) - closing value(n)| over every node with 1 <= n < T.
double self_financing_defect(const Market& mkt, const Portfolio& p);
bool is_self_financing(const Market& mkt, const Portfolio& p, double tolerance = 1e-9);

// Rewrites the funding asset's quantities so that the result is
// self-financing with initial value v0. Throws std::domain_error when the
// funding price vanishes at some node.
Portfolio make_self_financing(const Market& mkt, const Portfolio& p, const std::string& funding, double v0);

// Always true: the representation cannot express a non-predictable process.
bool is_trading_strategy(const QuantityProcess& q);
// Whether each time-n quantity is constant on classes of paths sharing their
// first n-1 tosses.
bool is_trading_strategy(const QuantityTable& table);
// Throws std::domain_error naming the offending asset and time when the table
// is not predictable.
QuantityProcess to_quantity_process(const QuantityTable& table);

double init_value(const Market& mkt, const Portfolio& p);

bool approx_equal(const QuantityProcess& a, const QuantityProcess& b, double tolerance = 1e-12);

}  // namespace fairprice
