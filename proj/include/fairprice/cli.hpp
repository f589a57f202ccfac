#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairprice::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,           // bad flags, unreadable files
  kNotViable = 2,       // pricing requested on a market without a risk-neutral measure
  kInvalidInput = 3,    // config, payoff, CSV or maturity rejected
  kNotReplicating = 4,  // replicate / verify found a failing clause
  kInviableMarket = 5,  // check: market admits arbitrage
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairprice::cli
