#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "report.hpp"

namespace qtop::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json report() const { return nlohmann::json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qtop");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QTOP_DATA_DIR) + "/symbols/" + name; }

TEST(Cli, FactorizeCanonicalSlice) {
  const Outcome o = run_cli({"factorize", data("golden.json"), "--var", "1", "--param", "0.4"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto r = o.report();
  EXPECT_EQ(r["version"], kVersion);
  EXPECT_EQ(r["command"], "factorize");
  EXPECT_EQ(r["partial_indices"], nlohmann::json::array({0, 0}));
  EXPECT_LE(r["factorization"]["residual"].get<double>(), 1e-8);
}

TEST(Cli, FactorizeNonCanonicalExitsWithIndices) {
  const Outcome o = run_cli({"factorize", data("diag_z_zinv.json")});
  EXPECT_EQ(o.code, kObstruction);
  EXPECT_EQ(o.report()["partial_indices"], nlohmann::json::array({1, -1}));
  EXPECT_NE(o.err.find("[1,-1]"), std::string::npos);
}

TEST(Cli, FactorizeDumpsSeries) {
  const auto path = std::filesystem::temp_directory_path() / "qtop_cli_series.json";
  const Outcome o = run_cli({"factorize", data("golden.json"), "--trunc", "8", "--dump-series", path.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["num_vars"], 1);
  EXPECT_EQ(doc["band_dim"], 2);
  std::filesystem::remove(path);
}

TEST(Cli, IndexCrossCheckAgrees) {
  const Outcome o = run_cli({"index", data("golden.json"), "--sizes", "6,8", "--grid", "32,17,32", "--samples", "32"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto r = o.report();
  EXPECT_EQ(r["truncation"]["index"], 1);
  EXPECT_EQ(r["w3"]["rounded"], 1);
  EXPECT_EQ(r["agree"], true);
}

TEST(Cli, IndexOfOneVariableSymbol) {
  const Outcome w3 = run_cli({"index", data("diag_z_zinv.json"), "--mode", "w3"});
  EXPECT_EQ(w3.code, kInputError);
  const Outcome t = run_cli({"index", data("diag_z_zinv.json"), "--mode", "truncation", "--sizes", "8,12"});
  ASSERT_EQ(t.code, kOk) << t.err;
  // det = 1, so the one-variable Toeplitz index vanishes although the factorization is not canonical.
  EXPECT_EQ(t.report()["truncation"]["index"], 0);
}

TEST(Cli, CornerFromBlock) {
  const auto csv = std::filesystem::temp_directory_path() / "qtop_cli_spectrum.csv";
  const Outcome o = run_cli({"corner", data("golden.json"), "--from-block", "--size", "8", "--out", csv.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto r = o.report();
  EXPECT_EQ(r["spectrum"]["signed_count"], 1);
  EXPECT_EQ(r["w3"]["rounded"], 1);
  EXPECT_TRUE(std::filesystem::exists(csv));
  std::filesystem::remove(csv);
}

TEST(Cli, SymmetryPassAndFail) {
  EXPECT_EQ(run_cli({"symmetry", data("real_hamiltonian.json"), "--class", "AI"}).code, kOk);
  const Outcome bad = run_cli({"symmetry", data("golden.json"), "--class", "AI"});
  EXPECT_EQ(bad.code, kCheckFailed);
  EXPECT_EQ(bad.report()["result"]["pass"], false);
  EXPECT_EQ(run_cli({"symmetry", data("golden.json"), "--class", "Z7"}).code, kInputError);
}

TEST(Cli, ExtendEvaluatesChartPoint) {
  const Outcome o = run_cli({"extend", data("golden.json"), "--samples", "16", "--eval",
                             "chart=TD;theta=0;rho=0;phi=0"});
  ASSERT_EQ(o.code, kOk) << o.err;
  // f^E(1, 0) = [[2, 0], [0, 1]].
  const auto v = o.report()["value"];
  EXPECT_NEAR(v[0][0][0].get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(v[1][1][0].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(v[0][1][0].get<double>(), 0.0, 1e-10);
}

TEST(Cli, ExtendRejectsBadChartPoint) {
  EXPECT_EQ(run_cli({"extend", data("golden.json"), "--eval", "chart=QQ"}).code, kInputError);
  EXPECT_EQ(run_cli({"extend", data("golden.json")}).code, kInputError);
}

TEST(Cli, GapClosingFamilyIsAnObstruction) {
  const Outcome o = run_cli({"extend", data("gap_closing_family.json"), "--tvar", "2", "--tsamples", "16",
                             "--samples", "8", "--eval", "chart=TD;theta=0;rho=0.5;phi=0;t=0.1"});
  EXPECT_EQ(o.code, kObstruction);
  EXPECT_NE(o.err.find("t = 1.57"), std::string::npos) << o.err;
}

TEST(Cli, GappedReportForRealHamiltonian) {
  const Outcome o = run_cli({"gapped", data("real_hamiltonian.json"), "--class", "AI"});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_EQ(o.report()["result"]["invariant"], nullptr);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kInputError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kInputError);
  EXPECT_EQ(run_cli({"index", data("golden.json"), "--mode", "fourier"}).code, kInputError);
  EXPECT_EQ(run_cli({"factorize", data("missing.json")}).code, kInputError);
  EXPECT_EQ(run_cli({"--version"}).code, kOk);
}

}  // namespace
}  // namespace qtop::cli
