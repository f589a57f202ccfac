#include "fairprice/cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairprice/crr.hpp"
#include "fairprice/io.hpp"
#include "fairprice/payoff.hpp"
#include "fairprice/pricing.hpp"

namespace fairprice::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

struct MarketOptions {
  std::string config;
  int max_horizon = kDefaultHorizonCap;
};

struct PayoffOptions {
  std::string expression;
  std::string path_table;
  std::optional<int> maturity;
};

struct Claim {
  std::vector<double> terminal;
  int maturity = 0;
};

std::string read_input(const std::string& path) {
  try {
    return read_text_file(path);
  } catch (const std::exception& e) {
    throw Failure{kUsage, e.what()};
  }
}

CrrMarket load_market(const MarketOptions& opts) {
  if (opts.max_horizon < 1 || opts.max_horizon > kMaxHorizon) {
    throw Failure{kUsage, "--max-horizon must lie in 1.." + std::to_string(kMaxHorizon)};
  }
  const std::string text = read_input(opts.config);
  try {
    const MarketConfig config = parse_market_config(text, opts.max_horizon);
    return CrrMarket(config.params, config.horizon, opts.max_horizon);
  } catch (const std::exception& e) {
    throw Failure{kInvalidInput, e.what()};
  }
}

Claim load_claim(const CrrMarket& crr, const PayoffOptions& opts) {
  Claim claim;
  claim.maturity = opts.maturity.value_or(crr.horizon());
  if (claim.maturity < 0 || claim.maturity > crr.horizon()) {
    throw Failure{kInvalidInput, "maturity " + std::to_string(claim.maturity) + " outside 0.." +
                                     std::to_string(crr.horizon())};
  }
  try {
    if (!opts.path_table.empty()) {
      claim.terminal = read_path_table_csv(read_input(opts.path_table), claim.maturity);
      return claim;
    }
    const PayoffExpr payoff = parse_payoff(opts.expression);
    const PayoffHorizon needed = payoff_horizon(payoff);
    if (needed.max_index > claim.maturity) {
      throw Failure{kInvalidInput, "payoff reads S[" + std::to_string(needed.max_index) + "] beyond maturity " +
                                       std::to_string(claim.maturity)};
    }
    claim.terminal = terminal_payoff(crr, payoff, claim.maturity);
  } catch (const Failure&) {
    throw;
  } catch (const std::exception& e) {
    throw Failure{kInvalidInput, e.what()};
  }
  return claim;
}

void require_viable(const CrrMarket& crr) {
  if (!is_viable(crr.params())) throw Failure{kNotViable, NotViableError().what()};
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }
std::string pass_fail(bool b) { return b ? "pass" : "FAIL"; }

int cmd_price(const MarketOptions& mo, const PayoffOptions& po, const std::string& tree, std::ostream& out) {
  const CrrMarket crr = load_market(mo);
  const Claim claim = load_claim(crr, po);
  require_viable(crr);
  const PriceLattice lattice = price_lattice(crr, claim.terminal, claim.maturity);
  out << "fair price: " << format_report(lattice.price()) << '\n';
  if (!tree.empty()) {
    std::ostringstream csv;
    write_tree_csv(csv, lattice.values);
    try {
      write_text_file(tree, csv.str());
    } catch (const std::exception& e) {
      throw Failure{kUsage, e.what()};
    }
  }
  return kOk;
}

std::string report_line(const ReplicationReport& report, double tolerance) {
  return "replicating: " + yes_no(report.replicating(tolerance)) +
         "; self-financing: " + yes_no(report.self_financing) +
         "; trading-strategy: " + yes_no(report.trading_strategy) +
         "; max terminal error: " + format_report(report.max_terminal_error) +
         "; init value: " + format_shortest(report.init_value);
}

int cmd_replicate(const MarketOptions& mo, const PayoffOptions& po, const std::string& out_path, double tolerance,
                  std::ostream& out, std::ostream& err) {
  const CrrMarket crr = load_market(mo);
  const Claim claim = load_claim(crr, po);
  require_viable(crr);
  const Portfolio portfolio = replicating_portfolio(crr, claim.terminal, claim.maturity);
  const ReplicationReport report = verify_replication(crr, portfolio, claim.terminal, claim.maturity, tolerance);

  std::ostringstream csv;
  write_portfolio_csv(csv, portfolio);
  if (out_path.empty()) {
    out << csv.str();
    err << report_line(report, tolerance) << '\n';
  } else {
    try {
      write_text_file(out_path, csv.str());
    } catch (const std::exception& e) {
      throw Failure{kUsage, e.what()};
    }
    out << report_line(report, tolerance) << '\n';
  }
  return report.replicating(tolerance) ? kOk : kNotReplicating;
}

int cmd_verify(const MarketOptions& mo, const PayoffOptions& po, const std::string& portfolio_path, double tolerance,
               std::ostream& out) {
  const CrrMarket crr = load_market(mo);
  const Claim claim = load_claim(crr, po);
  const Market& mkt = crr.market();

  QuantityTable table;
  try {
    table = read_portfolio_csv(read_input(portfolio_path), crr.horizon());
  } catch (const FormatError& e) {
    throw Failure{kInvalidInput, "malformed portfolio CSV: " + std::string(e.what())};
  }
  bool stock_only = true;
  for (const auto& [asset, by_time] : table.quantities) {
    if (!mkt.contains(asset)) throw Failure{kInvalidInput, "malformed portfolio CSV: unknown asset '" + asset + "'"};
    const bool nonzero = std::any_of(by_time.begin(), by_time.end(), [](const std::vector<double>& level) {
      return std::any_of(level.begin(), level.end(), [](double x) { return x != 0.0; });
    });
    if (nonzero && !mkt.is_stock(asset)) stock_only = false;
  }

  const bool predictable = is_trading_strategy(table);
  out << "trading-strategy: " << pass_fail(predictable) << '\n';
  out << "stock-portfolio: " << pass_fail(stock_only) << '\n';
  if (!predictable || !stock_only) {
    out << "self-financing: not evaluated\n";
    out << "terminal-value: not evaluated\n";
    out << "replicating: no\n";
    return kNotReplicating;
  }

  const Portfolio portfolio = to_quantity_process(table);
  const ReplicationReport report = verify_replication(crr, portfolio, claim.terminal, claim.maturity, tolerance);
  out << "self-financing: " << pass_fail(report.self_financing) << " (max defect "
      << format_report(report.self_financing_defect) << ")\n";
  out << "terminal-value: " << pass_fail(report.max_terminal_error <= tolerance) << " (max error "
      << format_report(report.max_terminal_error) << ")\n";
  out << "init value: " << format_shortest(report.init_value) << '\n';
  out << "replicating: " << yes_no(report.replicating(tolerance)) << '\n';
  return report.replicating(tolerance) ? kOk : kNotReplicating;
}

int cmd_check(const MarketOptions& mo, std::ostream& out) {
  const CrrMarket crr = load_market(mo);
  if (is_viable(crr.params())) {
    const double q = risk_neutral_q(crr.params());
    out << "viable; q = " << format_report(q) << '\n';
    out << "risk-neutral: " << yes_no(is_risk_neutral(crr, PathMeasure(q))) << '\n';
    return kOk;
  }

  out << NotViableError().what() << '\n';
  const Portfolio arbitrage = construct_arbitrage(crr);
  const ArbitrageVerdict verdict = is_arbitrage_process(crr, crr.physical_measure(), arbitrage);
  out << "arbitrage portfolio:\n";
  write_portfolio_csv(out, arbitrage);
  out << "certified: " << yes_no(verdict.is_arbitrage) << "; witness time " << verdict.witness_time
      << "; clause " << to_string(verdict.violated_clause) << '\n';
  if (verdict.is_arbitrage) {
    out << "closing values at time " << verdict.witness_time << ":\n";
    out << "prefix,closing_value\n";
    const auto closing = closing_value_level(crr.market(), arbitrage, verdict.witness_time);
    for (std::size_t i = 0; i < closing.size(); ++i) {
      out << TossPath::from_index(i, verdict.witness_time).to_string() << ',' << format_shortest(closing[i]) << '\n';
    }
  }
  return kInviableMarket;
}

void add_market_options(CLI::App* cmd, MarketOptions& mo) {
  cmd->add_option("--config", mo.config, "Market config (JSON: u, d, v, r, p, horizon)")->required();
  cmd->add_option("--max-horizon", mo.max_horizon, "Largest accepted horizon")->capture_default_str();
}

void add_payoff_options(CLI::App* cmd, PayoffOptions& po) {
  auto* expr = cmd->add_option("--payoff", po.expression, "Payoff expression, e.g. 'call(98)' or 'lookback'");
  auto* table = cmd->add_option("--path-table", po.path_table, "CSV prefix,value with one row per length-T path");
  expr->excludes(table);
  table->excludes(expr);
  cmd->add_option("--maturity", po.maturity, "Maturity T (default: the market horizon)");
  cmd->callback([cmd, expr, table] {
    if (expr->count() == 0 && table->count() == 0) {
      throw CLI::RequiredError(cmd->get_name() + ": one of --payoff or --path-table is required");
    }
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binomial (CRR) fair pricing, replication and verification"};
  app.name("fairprice");
  app.require_subcommand(1);

  MarketOptions market_opts;
  PayoffOptions payoff_opts;
  std::string tree_path;
  std::string out_path;
  std::string portfolio_path;
  double tolerance = kReplicationTolerance;

  auto* price = app.add_subcommand("price", "Fair price by risk-neutral expectation");
  add_market_options(price, market_opts);
  add_payoff_options(price, payoff_opts);
  price->add_option("--tree", tree_path, "Write the value tree CSV (time,prefix,value)");

  auto* replicate = app.add_subcommand("replicate", "Synthesize the replicating portfolio");
  add_market_options(replicate, market_opts);
  add_payoff_options(replicate, payoff_opts);
  replicate->add_option("--out", out_path, "Write the portfolio CSV here instead of stdout");
  replicate->add_option("--tolerance", tolerance, "Replication tolerance")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check that a portfolio CSV replicates a payoff");
  add_market_options(verify, market_opts);
  add_payoff_options(verify, payoff_opts);
  verify->add_option("--portfolio", portfolio_path, "Portfolio CSV (time,prefix,asset,quantity)")->required();
  verify->add_option("--tolerance", tolerance, "Replication tolerance")->capture_default_str();

  auto* check = app.add_subcommand("check", "Viability and risk-neutral parameter");
  add_market_options(check, market_opts);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (price->parsed()) return cmd_price(market_opts, payoff_opts, tree_path, out);
    if (replicate->parsed()) return cmd_replicate(market_opts, payoff_opts, out_path, tolerance, out, err);
    if (verify->parsed()) return cmd_verify(market_opts, payoff_opts, portfolio_path, tolerance, out);
    if (check->parsed()) return cmd_check(market_opts, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
  return kUsage;
}

}  // namespace fairprice::cli
