#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "record.hpp"

using namespace sumsq;
using namespace sumsq::cli;
using V = std::vector<std::int64_t>;

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

std::vector<OutputRecord> records(const std::string& text) {
  std::vector<OutputRecord> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(parse_record(line));
  }
  return out;
}

}  // namespace

TEST(ParseInteger, Forms) {
  EXPECT_EQ(parse_integer("123"), 123);
  EXPECT_EQ(parse_integer("-7"), -7);
  EXPECT_EQ(parse_integer("1_000_000"), 1'000'000);
  EXPECT_EQ(parse_integer("1e9"), 1'000'000'000);
  EXPECT_EQ(parse_integer("2.5e3"), 2500);
  EXPECT_EQ(parse_integer("1E12"), 1'000'000'000'000);
  EXPECT_EQ(parse_integer("9223372036854775807"), INT64_MAX);
  EXPECT_EQ(parse_integer("-9223372036854775808"), INT64_MIN);
  EXPECT_THROW(parse_integer("1.5"), UsageError);
  EXPECT_THROW(parse_integer(""), UsageError);
  EXPECT_THROW(parse_integer("abc"), UsageError);
  EXPECT_THROW(parse_integer("1e"), UsageError);
  EXPECT_THROW(parse_integer("1e19"), OverflowError);
  EXPECT_THROW(parse_integer("9223372036854775808"), OverflowError);
}

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("11:25"), (std::pair<std::int64_t, std::int64_t>{11, 25}));
  EXPECT_EQ(parse_range("7"), (std::pair<std::int64_t, std::int64_t>{7, 7}));
  EXPECT_EQ(parse_range("1:1e3"), (std::pair<std::int64_t, std::int64_t>{1, 1000}));
  EXPECT_THROW(parse_range("5:3"), UsageError);
  EXPECT_THROW(parse_range("5:"), UsageError);
}

TEST(ParseList, Forms) {
  EXPECT_EQ(parse_list("3,1,1,0"), (V{3, 1, 1, 0}));
  EXPECT_EQ(parse_list("-2"), (V{-2}));
  EXPECT_THROW(parse_list("1,,2"), UsageError);
}

TEST(ResolveBudget, FlagOverridesEnv) {
  EXPECT_EQ(resolve_budget(std::string("500"), "900").max_nodes, 500u);
  EXPECT_EQ(resolve_budget(std::nullopt, "900").max_nodes, 900u);
  EXPECT_EQ(resolve_budget(std::nullopt, nullptr).max_nodes, Budget{}.max_nodes);
  EXPECT_THROW(resolve_budget(std::string("0"), nullptr), UsageError);
}

TEST(Format, SymmetricAndFactored) {
  EXPECT_EQ(format_symmetric({0, 2, 8, 10}), "0 ±2 ±8 ±10");
  EXPECT_EQ(format_symmetric({1, 5, 11}), "±1 ±5 ±11");
  EXPECT_EQ(format_symmetric({}), "∅");
  EXPECT_EQ(format_factored(14), "2·7");
  EXPECT_EQ(format_factored(40), "2^3·5");
  EXPECT_EQ(format_factored(1), "1");
}

TEST(OutputRecord, RoundTrip) {
  OutputRecord r;
  r.command = "set";
  r.m = 12;
  r.n = 25;
  r.values = V{1, 3, 5};
  r.t_star = 5;
  r.parity = 1;
  r.full = false;
  r.method = "oracle";
  r.micros = 42;
  EXPECT_EQ(parse_record(serialize(r)), r);

  OutputRecord empty;
  empty.command = "set";
  empty.values = V{};
  const std::string line = serialize(empty);
  EXPECT_NE(line.find("\"t_star\":null"), std::string::npos);
  EXPECT_EQ(parse_record(line), empty);
}

TEST(Run, SetText) {
  const auto r = invoke({"set", "-m", "3", "-n", "42"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("S_3(42) = {0 ±2 ±8 ±10}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("T* = 10"), std::string::npos);
  EXPECT_NE(r.out.find("mordell_m3"), std::string::npos);

  const auto e = invoke({"set", "-m", "1", "-n", "5"});
  EXPECT_EQ(e.code, kOk);
  EXPECT_NE(e.out.find("∅"), std::string::npos);
}

TEST(Run, SetJson) {
  const auto r = invoke({"set", "-m", "12", "-n", "25", "--json"});
  ASSERT_EQ(r.code, kOk);
  const auto recs = records(r.out);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].values, (V{1, 3, 5, 7, 9, 11, 13, 15}));
  EXPECT_EQ(recs[0].t_star, 15);
  EXPECT_EQ(recs[0].parity, 1);
  EXPECT_EQ(recs[0].method, "oracle");

  const auto s = records(invoke({"set", "-m", "4", "-n", "36", "--json"}).out);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].t_star, 12);
  EXPECT_EQ(s[0].parity, 0);
}

TEST(Run, MemberAndTstar) {
  const auto no = records(invoke({"member", "-m", "3", "-n", "42", "-T", "4", "--json"}).out);
  ASSERT_EQ(no.size(), 1u);
  EXPECT_EQ(no[0].member, false);
  const auto yes = records(invoke({"member", "-m", "3", "-n", "75", "-T", "-3", "--json"}).out);
  ASSERT_EQ(yes.size(), 1u);
  EXPECT_EQ(yes[0].member, true);

  EXPECT_EQ(invoke({"tstar", "-m", "9", "-n", "19"}).code, kOk);
  EXPECT_EQ(invoke({"tstar", "-m", "2", "-n", "3"}).code, kMismatch);
}

TEST(Run, Table3) {
  const auto r = invoke({"table3", "-n", "43"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("(k,ℓ)=(0,1)"), std::string::npos);
  EXPECT_NE(r.out.find("S_3(43) = {±1 ±5 ±11}"), std::string::npos);
  std::size_t rows = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] >= '0' && line[0] <= '9') ++rows;
  }
  EXPECT_EQ(rows, 6u);
}

TEST(Run, ScanFullAndCrosscheck) {
  const auto scan = records(invoke({"scan-full", "-m", "10", "-r", "11:25", "--json"}).out);
  V found;
  for (const auto& rec : scan) {
    if (rec.n) found.push_back(*rec.n);
  }
  EXPECT_EQ(found, (V{17, 20, 23}));

  const auto cross = invoke({"crosscheck", "-m", "2:6", "-n", "1:60", "--threads", "3"});
  EXPECT_EQ(cross.code, kOk) << cross.out << cross.err;
  EXPECT_NE(cross.out.find("0 mismatches"), std::string::npos);
}

TEST(Run, LinearFormsAndCounts) {
  const auto lin = records(invoke({"linset", "-a", "2,1,1,1", "-n", "1", "--json"}).out);
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_EQ(lin[0].values, (V{1, 2}));
  EXPECT_EQ(invoke({"pow4", "-a", "3,1,1,0", "-r", "1:200"}).code, kOk);
  EXPECT_NE(invoke({"partition", "-m", "3", "-n", "42"}).out.find("P_3(42) = 1"), std::string::npos);
  EXPECT_EQ(invoke({"lehmer", "-m", "3", "-n", "1708"}).code, kOk);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(invoke({"bogus"}).code, kUsage);
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"set", "-m", "3"}).code, kUsage);
  EXPECT_EQ(invoke({"set", "-m", "0", "-n", "5"}).code, kUsage);
  EXPECT_EQ(invoke({"set", "-m", "3", "-n", "1.5"}).code, kUsage);
  EXPECT_EQ(invoke({"set", "-m", "4", "-n", "4e18"}).code, kOverflow);
  EXPECT_EQ(invoke({"set", "-m", "13", "-n", "100000", "--budget", "1000"}).code, kBudget);
}

TEST(Run, BudgetFromEnvironment) {
  ::setenv("SUMSQ_BUDGET", "1000", 1);
  const int code = invoke({"set", "-m", "13", "-n", "100000"}).code;
  const int overridden = invoke({"set", "-m", "13", "-n", "200", "--budget", "100000000"}).code;
  ::unsetenv("SUMSQ_BUDGET");
  EXPECT_EQ(code, kBudget);
  EXPECT_EQ(overridden, kOk);
}

TEST(ParallelMap, OrderAndErrors) {
  const auto squares = parallel_map(1000, 8, [](std::size_t i) { return static_cast<std::int64_t>(i * i); });
  ASSERT_EQ(squares.size(), 1000u);
  for (std::size_t i = 0; i < squares.size(); ++i) ASSERT_EQ(squares[i], static_cast<std::int64_t>(i * i));
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
  try {
    parallel_map(100, 4, [](std::size_t i) -> int {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}
