#include <gtest/gtest.h>

#include <sstream>

#include "fairprice/cli.hpp"
#include "fairprice/io.hpp"
#include "fairprice/pricing.hpp"

namespace fairprice::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(FAIRPRICE_TEST_TMPDIR) + "/cli_" + name; }

std::string write_tmp(const std::string& name, const std::string& contents) {
  const std::string path = tmp(name);
  write_text_file(path, contents);
  return path;
}

const std::string kLookbackConfig = R"({"u": 1.2, "d": 0.8, "v": 10, "r": 0.03, "p": 0.5, "horizon": 2})";
const std::string kInviableConfig = R"({"u": 1.2, "d": 0.8, "v": 10, "r": 0.25, "p": 0.5, "horizon": 2})";

// Value following a "key: " label on the first line that contains it.
std::string field(const std::string& text, const std::string& key) {
  const auto at = text.find(key + ": ");
  if (at == std::string::npos) return "";
  const auto start = at + key.size() + 2;
  return text.substr(start, text.find_first_of(";\n", start) - start);
}

TEST(CliTest, PriceLookback) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const std::string tree = tmp("tree.csv");
  const auto r = invoke({"price", "--config", config, "--payoff", "lookback", "--maturity", "2", "--tree", tree});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(std::stod(field(r.out, "fair price")), 1.2579, 5e-4);

  const std::string csv = read_text_file(tree);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,prefix,value");
  EXPECT_NE(csv.find("\n1,U,0.990"), std::string::npos);
  EXPECT_NE(csv.find("\n1,D,1.708"), std::string::npos);
  EXPECT_NE(csv.find("\n2,UU,0\n"), std::string::npos);
}

TEST(CliTest, MaturityDefaultsToHorizon) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const auto a = invoke({"price", "--config", config, "--payoff", "lookback"});
  const auto b = invoke({"price", "--config", config, "--payoff", "lookback", "--maturity", "2"});
  EXPECT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, PathTableMatchesExpression) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const std::string table = write_tmp("lookback_table.csv", "prefix,value\nUU,0\nUD,2.4\nDU,0.4\nDD,3.6\n");
  const auto a = invoke({"price", "--config", config, "--path-table", table});
  const auto b = invoke({"price", "--config", config, "--payoff", "lookback"});
  EXPECT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(invoke({"price", "--config", config, "--path-table", table, "--payoff", "lookback"}).code, kUsage);
  EXPECT_EQ(invoke({"price", "--config", config}).code, kUsage);
}

TEST(CliTest, ReplicateThenVerifyRoundTrips) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const std::string portfolio = tmp("replicating.csv");
  const auto rep = invoke({"replicate", "--config", config, "--payoff", "lookback", "--out", portfolio});
  ASSERT_EQ(rep.code, kOk) << rep.err;
  EXPECT_EQ(field(rep.out, "replicating"), "yes");
  EXPECT_EQ(field(rep.out, "self-financing"), "yes");

  const auto ver = invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", portfolio});
  EXPECT_EQ(ver.code, kOk) << ver.out << ver.err;
  EXPECT_NE(ver.out.find("trading-strategy: pass"), std::string::npos);
  EXPECT_NE(ver.out.find("stock-portfolio: pass"), std::string::npos);
  EXPECT_NE(ver.out.find("self-financing: pass"), std::string::npos);
  EXPECT_NE(ver.out.find("terminal-value: pass"), std::string::npos);
  EXPECT_EQ(field(ver.out, "replicating"), "yes");

  // The initial value of the synthesized portfolio is the root of the price tree.
  const std::string tree = tmp("tree_root.csv");
  ASSERT_EQ(invoke({"price", "--config", config, "--payoff", "lookback", "--tree", tree}).code, kOk);
  const std::string csv = read_text_file(tree);
  const auto root_line = csv.find("\n0,-,") + 5;
  const double root = std::stod(csv.substr(root_line, csv.find('\n', root_line) - root_line));
  EXPECT_NEAR(std::stod(field(rep.out, "init value")), root, 1e-9);
  EXPECT_NEAR(std::stod(field(ver.out, "init value")), root, 1e-9);
}

TEST(CliTest, ReplicateToStdoutKeepsReportOnStderr) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const auto r = invoke({"replicate", "--config", config, "--payoff", "call(9)"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "time,prefix,asset,quantity");
  EXPECT_EQ(field(r.err, "replicating"), "yes");
}

TEST(CliTest, VerifyRejectsNonReplicatingPortfolios) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const std::string zero = write_tmp("zero.csv", "time,prefix,asset,quantity\n");
  const auto a = invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", zero});
  EXPECT_EQ(a.code, kNotReplicating);
  EXPECT_NE(a.out.find("terminal-value: FAIL (max error 3.6)"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("self-financing: pass"), std::string::npos);

  const std::string peeking = write_tmp("peeking.csv", "time,prefix,asset,quantity\n0,U,S,1\n0,D,S,2\n");
  const auto b = invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", peeking});
  EXPECT_EQ(b.code, kNotReplicating);
  EXPECT_NE(b.out.find("trading-strategy: FAIL"), std::string::npos);

  const std::string claim = write_tmp("claim.csv", "time,prefix,asset,quantity\n0,-,claim,1\n");
  const auto c = invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", claim});
  EXPECT_EQ(c.code, kNotReplicating);
  EXPECT_NE(c.out.find("stock-portfolio: FAIL"), std::string::npos);

  const std::string unknown = write_tmp("unknown.csv", "time,prefix,asset,quantity\n0,-,Q,1\n");
  EXPECT_EQ(invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", unknown}).code,
            kInvalidInput);
  const std::string broken = write_tmp("broken.csv", "time,prefix,asset,quantity\n0,-,S\n");
  EXPECT_EQ(invoke({"verify", "--config", config, "--payoff", "lookback", "--portfolio", broken}).code,
            kInvalidInput);
}

TEST(CliTest, CheckReportsViability) {
  const std::string viable = write_tmp("lookback.json", kLookbackConfig);
  const auto a = invoke({"check", "--config", viable});
  EXPECT_EQ(a.code, kOk);
  EXPECT_NE(a.out.find("viable; q = 0.575"), std::string::npos);
  EXPECT_NE(a.out.find("risk-neutral: yes"), std::string::npos);

  const std::string inviable = write_tmp("inviable.json", kInviableConfig);
  const auto b = invoke({"check", "--config", inviable});
  EXPECT_EQ(b.code, kInviableMarket);
  EXPECT_NE(b.out.find("market not viable: requires d < 1+r < u"), std::string::npos);
  EXPECT_NE(b.out.find("certified: yes; witness time 1; clause none"), std::string::npos);
  EXPECT_NE(b.out.find("prefix,closing_value\nU,0.5\nD,4.5\n"), std::string::npos) << b.out;
}

TEST(CliTest, ExitCodes) {
  const std::string viable = write_tmp("lookback.json", kLookbackConfig);
  const std::string inviable = write_tmp("inviable.json", kInviableConfig);
  const std::string bad = write_tmp("bad.json", R"({"u": 0.8, "d": 1.2, "v": 10, "r": 0, "p": 0.5, "horizon": 2})");

  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"price", "--payoff", "lookback"}).code, kUsage);
  EXPECT_EQ(invoke({"price", "--config", tmp("missing.json"), "--payoff", "lookback"}).code, kUsage);
  EXPECT_EQ(invoke({"price", "--config", inviable, "--payoff", "lookback"}).code, kNotViable);
  EXPECT_EQ(invoke({"replicate", "--config", inviable, "--payoff", "lookback"}).code, kNotViable);

  const auto parse = invoke({"price", "--config", viable, "--payoff", "S[1", "--maturity", "2"});
  EXPECT_EQ(parse.code, kInvalidInput);
  EXPECT_NE(parse.err.find("syntax error at offset 3"), std::string::npos);
  EXPECT_EQ(invoke({"price", "--config", bad, "--payoff", "lookback"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"price", "--config", viable, "--payoff", "lookback", "--maturity", "3"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"price", "--config", viable, "--payoff", "S[3]", "--maturity", "2"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"price", "--config", viable, "--payoff", "1/(S_T-S_T)"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"price", "--config", viable, "--payoff", "lookback", "--max-horizon", "1"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"check", "--config", inviable}).code, kInviableMarket);
}

TEST(CliTest, OutputIsDeterministic) {
  const std::string config = write_tmp("lookback.json", kLookbackConfig);
  const std::vector<std::string> args{"replicate", "--config", config, "--payoff", "pos(avg(S) - 9.5)"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  EXPECT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
}

}  // namespace
}  // namespace fairprice::cli
