#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

using namespace eprod;
using nlohmann::json;
using testutil::close;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("eprod_test_" + name);
  std::ofstream(path) << content;
  return path;
}

Real value_of(const json& v) { return Real::parse(v.get<std::string>(), testutil::bits()); }

// Unsets EPROD_CONFIG for the duration of a test.
class Cli : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv(cli::kConfigEnv); }
  void TearDown() override { unsetenv(cli::kConfigEnv); }
};

}  // namespace

TEST_F(Cli, ComputeExpDelta) {
  const Outcome r = run({"compute", "exp(1)", "delta"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "compute");
  EXPECT_EQ(j["inputs"]["left"], "exp(1)");
  const std::string status = j["status"];
  EXPECT_TRUE(status == "AbelSummable" || status == "Convergent") << status;
  EXPECT_TRUE(close(value_of(j["value"]["re"]), Real(1, testutil::bits()), testutil::eps(20)));
  EXPECT_EQ(j["config"]["digits"], 60);
  EXPECT_TRUE(j.contains("wall_time_ms"));
  EXPECT_TRUE(j["n_terms_used"].get<unsigned long>() > 0);
  EXPECT_FALSE(j["diagnostics"]["abel_trace"].empty());
}

TEST_F(Cli, ComputeDeltaDeltaDiverges) {
  const Outcome r = run({"compute", "delta", "delta"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "Divergent");
  EXPECT_TRUE(j["value"].is_null());
  const double raabe = std::stod(j["diagnostics"]["raabe_estimate"].get<std::string>());
  EXPECT_NEAR(raabe, 0.5, 0.05);
}

TEST_F(Cli, ComputePhiPsiWithTermsFlag) {
  const Outcome r = run({"compute", "phi(2)", "psi(2)", "--terms", "400"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["config"]["max_terms"], 400);
  EXPECT_TRUE(close(value_of(j["value"]["re"]), Real(1, testutil::bits()), testutil::eps(12)));
}

TEST_F(Cli, ReportIsDeterministicAndRoundTrips) {
  auto strip = [](const std::string& text) {
    json j = json::parse(text);
    j.erase("wall_time_ms");
    return j.dump();
  };
  const Outcome a = run({"compute", "cos(1)", "delta", "--digits", "40"});
  const Outcome b = run({"compute", "cos(1)", "delta", "--digits", "40"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(strip(a.out), strip(b.out));
  const json j = json::parse(a.out);
  const std::string re = j["value"]["re"];
  const Real parsed = Real::parse(re, bits_for_digits(40));
  EXPECT_EQ(cli::decimal(parsed, 40), re);
}

TEST_F(Cli, OutputFormatsAndOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "eprod_test_out.txt";
  const Outcome csv = run({"compute", "sin(1)", "delta", "--format", "csv", "--out", path.string()});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "left,right,status,value_re,value_im,n_terms_used,certificate");
  EXPECT_NE(csv.out.find("ZeroByParity"), std::string::npos);
  std::ifstream in(path);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, csv.out);
  const Outcome text = run({"compute", "sin(1)", "delta", "--format", "text"});
  EXPECT_NE(text.out.find("status:      ZeroByParity"), std::string::npos);
}

TEST_F(Cli, ParseErrorsExitOneWithJsonOnStderr) {
  const Outcome r = run({"compute", "delta^(2", "delta"});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_TRUE(r.out.empty());
  const json e = json::parse(r.err)["error"];
  EXPECT_EQ(e["kind"], "parse");
  EXPECT_TRUE(e.contains("position"));

  const Outcome u = run({"compute", "foo", "delta"});
  EXPECT_EQ(u.code, cli::kExitFailure);
  EXPECT_EQ(json::parse(u.err)["error"]["kind"], "unknown_symbol");
  EXPECT_EQ(json::parse(u.err)["error"]["position"], 0);
}

TEST_F(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(run({"compute", "delta"}).code, cli::kExitFailure);
  EXPECT_EQ(run({"compute", "delta", "delta", "--bogus"}).code, cli::kExitFailure);
  EXPECT_EQ(run({"compute", "delta", "delta", "--format", "xml"}).code, cli::kExitFailure);
  EXPECT_EQ(run({"compute", "delta", "delta", "--digits", "10"}).code, cli::kExitFailure);
  EXPECT_EQ(run({}).code, cli::kExitFailure);
  const Outcome help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("compute"), std::string::npos);
  EXPECT_EQ(run({"compute", "--help"}).code, cli::kExitOk);
}

TEST_F(Cli, InconclusiveExitsThree) {
  const auto cfg = temp_file("inconclusive.json",
                             R"({"digits": 30, "tolerance": "1e-40", "abel_levels": 6, "partial_sum_cap": "1e4000",
                                 "abel_term_budget": 20000})");
  const Outcome r = run({"compute", "exp(1)", "delta", "--config", cfg.string()});
  EXPECT_EQ(r.code, cli::kExitInconclusive) << r.out << r.err;
  EXPECT_EQ(json::parse(r.out)["status"], "Inconclusive");
}

TEST_F(Cli, ConfigFileEnvironmentAndOverrides) {
  const auto cfg = temp_file("cfg.json", R"({"digits": 40, "max_terms": 3000})");
  setenv(cli::kConfigEnv, cfg.c_str(), 1);
  json j = json::parse(run({"compute", "delta", "e(2)"}).out);
  EXPECT_EQ(j["config"]["digits"], 40);
  EXPECT_EQ(j["config"]["max_terms"], 3000);
  j = json::parse(run({"compute", "delta", "e(2)", "--digits", "50"}).out);
  EXPECT_EQ(j["config"]["digits"], 50);
  EXPECT_EQ(j["config"]["max_terms"], 3000);

  const auto bad = temp_file("bad.json", R"({"digits": 40, "bogus": 1})");
  const Outcome r = run({"compute", "delta", "e(2)", "--config", bad.string()});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "usage");
  setenv(cli::kConfigEnv, "/nonexistent/eprod.json", 1);
  EXPECT_EQ(run({"compute", "delta", "e(2)"}).code, cli::kExitFailure);
}

TEST_F(Cli, Coeffs) {
  const Outcome r = run({"coeffs", "delta", "--n-max", "4", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["coefficients"].size(), 5u);
  EXPECT_EQ(j["parity"], "even");
  EXPECT_TRUE(value_of(j["coefficients"][1]["value"]["re"]).is_zero());
  const Real e0 = Real(1, testutil::bits()) / sqrt(sqrt(Real::pi(testutil::bits())));
  EXPECT_TRUE(close(value_of(j["coefficients"][0]["value"]["re"]), e0, testutil::eps(55)));
  EXPECT_EQ(run({"coeffs", "cos(1)", "--exact"}).code, cli::kExitFailure);
}

TEST_F(Cli, ReproduceTable) {
  const Outcome r = run({"reproduce", "ex2", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "identity,expected,got,tolerance,pass");
  const Outcome adj = run({"reproduce", "adjoint"});
  EXPECT_EQ(adj.code, 0) << adj.out;
  const json j = json::parse(adj.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["rows"].size(), 14u);
  EXPECT_EQ(run({"reproduce", "ex9"}).code, cli::kExitFailure);
}

TEST_F(Cli, SweepPhiPsiIsIdentity) {
  const Outcome r = run({"sweep", "phi", "psi", "--n-range", "0:4", "--m-range", "0:4", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json cells = json::parse(r.out)["cells"];
  ASSERT_EQ(cells.size(), 25u);
  std::size_t k = 0;
  for (unsigned n = 0; n <= 4; ++n)
    for (unsigned m = 0; m <= 4; ++m, ++k) {
      EXPECT_EQ(cells[k]["n"], n);
      EXPECT_EQ(cells[k]["m"], m);
      EXPECT_TRUE(close(value_of(cells[k]["value"]["re"]), Real(n == m ? 1 : 0, testutil::bits()), testutil::eps(12)))
          << n << m;
    }
}

TEST_F(Cli, SweepSameFamilyStatusPattern) {
  for (const char* family : {"phi", "psi"}) {
    const Outcome r = run({"sweep", family, family, "--n-range", "0:3", "--m-range", "0:3", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    for (unsigned n = 0; n <= 3; ++n)
      for (unsigned m = 0; m <= 3; ++m) {
        std::getline(lines, line);
        const std::string want = (n + m) % 2 ? ",ZeroByParity," : ",Divergent,";
        EXPECT_NE(line.find(want), std::string::npos) << family << " " << line;
      }
  }
}

TEST_F(Cli, SweepCapAndRanges) {
  EXPECT_EQ(run({"sweep", "phi", "psi", "--n-range", "0:20", "--cap", "16"}).code, cli::kExitFailure);
  EXPECT_EQ(run({"sweep", "phi", "psi", "--n-range", "3:1"}).code, cli::kExitFailure);
  EXPECT_EQ(run({"sweep", "phi", "zeta"}).code, cli::kExitFailure);
  EXPECT_EQ(cli::parse_range("2:5"), std::make_pair(2ul, 5ul));
  EXPECT_EQ(cli::parse_range("4"), std::make_pair(4ul, 4ul));
}
