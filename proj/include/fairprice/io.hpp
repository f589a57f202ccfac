#pragma once

// Text formats:
//
//   market config  JSON object {"u", "d", "v", "r", "p", "horizon"}
//   portfolio CSV  time,prefix,asset,quantity
//                  quantity of asset held over ]time, time+1] on every
//                  scenario starting with prefix (U/D string, "-" if empty);
//                  prefix must have at least `time` tosses
//   value tree CSV time,prefix,value
//   path table CSV prefix,value   one row per length-T path
//
// CSV numbers use the shortest representation that round-trips.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairprice/crr.hpp"
#include "fairprice/market.hpp"

namespace fairprice {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MarketConfig {
  CrrParams params;
  int horizon = 1;
};

// Throws FormatError naming the violated invariant.
MarketConfig parse_market_config(std::string_view json_text, int horizon_cap = kDefaultHorizonCap);
std::string market_config_to_json(const MarketConfig& config);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

std::string format_shortest(double x);
// Six significant digits.
std::string format_report(double x);

void write_portfolio_csv(std::ostream& out, const Portfolio& p);
// Expands rows onto full length-T paths. Assets without rows, and cells not
// covered by any row, hold zero. Throws FormatError on malformed rows or
// contradictory cells.
QuantityTable read_portfolio_csv(std::string_view text, int horizon);

void write_tree_csv(std::ostream& out, const LatticeProcess& values);

// Returns the payoff in storage order; every length-T path exactly once.
std::vector<double> read_path_table_csv(std::string_view text, int maturity);

}  // namespace fairprice
