#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qverify/cli.hpp"
#include "qverify/errors.hpp"

namespace qv {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "qverify");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> r;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) r.push_back(l);
  }
  return r;
}

TEST(ParseArgs, Options) {
  const std::vector<const char*> argv{"qverify", "verify", "main", "--pair", "unit", "-N", "30", "--seed", "5",
                                      "--trials", "2", "--format", "json", "--param", "b=2@0", "-j", "1"};
  const RunConfig c = parse_args(static_cast<int>(argv.size()), argv.data());
  EXPECT_EQ(c.command, "verify");
  EXPECT_EQ(c.identity, "main");
  EXPECT_EQ(c.pair, "unit");
  EXPECT_EQ(c.order, 30);
  EXPECT_EQ(c.seed, 5U);
  EXPECT_EQ(c.trials, 2);
  EXPECT_EQ(c.format, Format::Json);
  EXPECT_EQ(c.jobs, 1);
  EXPECT_EQ(c.params, std::vector<std::string>{"b=2@0"});
  EXPECT_FALSE(c.timing);
}

TEST(ParseArgs, Defaults) {
  const std::vector<const char*> argv{"qverify", "verify-all"};
  const RunConfig c = parse_args(static_cast<int>(argv.size()), argv.data());
  EXPECT_EQ(c.command, "verify-all");
  EXPECT_FALSE(c.order.has_value());
  EXPECT_EQ(c.seed, 1U);
  EXPECT_EQ(c.format, Format::Text);
}

TEST(Cli, VerifyPrintsOneLinePerTrial) {
  const Result r = invoke({"verify", "qgauss", "--trials", "2", "--seed", "4"});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2U);
  EXPECT_EQ(ls[0].rfind("PASS qgauss seed=4 N=60", 0), 0U) << ls[0];
  EXPECT_EQ(ls[1].rfind("PASS qgauss seed=5 N=60", 0), 0U) << ls[1];
}

TEST(Cli, UnknownIdentityExitsWithTwo) {
  const Result r = invoke({"verify", "nosuch"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nosuch"), std::string::npos);
}

TEST(Cli, BadFlagIsAParseError) {
  EXPECT_NE(invoke({"verify", "qgauss", "--order", "many"}).code, 0);
  EXPECT_NE(invoke({"frobnicate"}).code, 0);
}

TEST(Cli, MutationFailsWithExitOne) {
  const Result r = invoke({"verify", "qgauss", "--mutation", "flip-argument-sign", "--trials", "1"});
  EXPECT_EQ(r.code, 1);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1U);
  EXPECT_EQ(ls[0].rfind("FAIL qgauss seed=1", 0), 0U) << ls[0];
  EXPECT_NE(ls[0].find("mismatch"), std::string::npos);
}

TEST(Cli, PinnedParametersSkipSampling) {
  const Result r = invoke({"verify", "qwatson", "--param", "lambda=1@4", "--param", "a=4@2", "--param", "b=9@2",
                           "--format", "json", "--trials", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 1U);
  EXPECT_EQ(j[0]["env"]["a"], "4·p^2");
  EXPECT_EQ(j[0]["outcome"], "pass");
}

TEST(Cli, PairsCommand) {
  const Result r = invoke({"pairs", "--nmax", "6"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls.size(), 9U);
  for (const auto& l : ls) EXPECT_EQ(l.rfind("PASS ", 0), 0U) << l;
}

TEST(Cli, JsonSchema) {
  const Result r = invoke({"verify", "mz3", "--format", "json", "--trials", "2"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2U);
  const std::vector<std::string> keys{"name",   "seed",       "order",     "outcome",   "mismatch_index",
                                      "env",    "elapsed_ms", "lhs_coeff", "rhs_coeff", "detail"};
  for (const auto& rep : j) {
    std::vector<std::string> got;
    for (auto it = rep.begin(); it != rep.end(); ++it) got.push_back(it.key());
    EXPECT_EQ(got, keys);
    EXPECT_TRUE(rep["mismatch_index"].is_null());
    EXPECT_TRUE(rep["elapsed_ms"].is_null());
    EXPECT_TRUE(rep["env"].is_object());
  }
  EXPECT_EQ(j[0]["seed"], 1);
  EXPECT_EQ(j[1]["seed"], 2);
}

TEST(Cli, TimingFillsElapsed) {
  const auto j = nlohmann::json::parse(invoke({"verify", "qgauss", "--format", "json", "--trials", "1", "--timing"}).out);
  EXPECT_TRUE(j[0]["elapsed_ms"].is_number());
}

TEST(Cli, EmptyReportListIsEmptyJsonArray) {
  EXPECT_EQ(nlohmann::json::parse(emit_report({}, Format::Json)), nlohmann::json::array());
  EXPECT_EQ(emit_report({}, Format::Text), "");
}

TEST(Cli, MismatchReportRendering) {
  VerificationReport rep;
  rep.name = "x";
  rep.seed = 3;
  rep.order = 10;
  rep.outcome = Outcome::Mismatch;
  rep.mismatch_index = 4;
  rep.lhs_coeff = "1";
  rep.rhs_coeff = "2";
  const auto j = nlohmann::json::parse(emit_report({rep}, Format::Json));
  EXPECT_EQ(j[0]["outcome"], "mismatch");
  EXPECT_EQ(j[0]["mismatch_index"], 4);
  const std::string text = emit_report({rep}, Format::Text);
  EXPECT_EQ(text.rfind("FAIL x seed=3 N=10 [4]", 0), 0U) << text;
  EXPECT_NE(text.find("lhs=1"), std::string::npos);
}

TEST(Cli, OutputIndependentOfJobs) {
  const Result one = invoke({"verify-all", "--format", "json", "-j", "1", "--trials", "1", "-N", "20"});
  const Result many = invoke({"verify-all", "--format", "json", "-j", "3", "--trials", "1", "-N", "20"});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, many.out);
  EXPECT_EQ(nlohmann::json::parse(one.out).size(), 15U);
}

TEST(Cli, ListAndCrossChecks) {
  const Result list = invoke({"list"});
  EXPECT_EQ(list.code, 0);
  const auto ls = lines(list.out);
  ASSERT_EQ(ls.size(), 16U);
  EXPECT_EQ(ls.back().rfind("pairs: trivial", 0), 0U);
  const Result cc = invoke({"cross-checks", "--trials", "1"});
  EXPECT_EQ(cc.code, 0);
  EXPECT_EQ(lines(cc.out).size(), 4U);
}

}  // namespace
}  // namespace qv
