#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "onc/errors.hpp"
#include "onc_cli/cli.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using onc::cli::run;

enum class Col { kInt, kFloat, kOptInt, kText };

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parses_as(const std::string& v, Col c) {
  if (c == Col::kText) return !v.empty();
  if (c == Col::kOptInt && v.empty()) return true;
  if (v.empty()) return false;
  std::size_t used = 0;
  try {
    if (c == Col::kFloat) {
      std::stod(v, &used);
    } else {
      if (v.front() == '-') return false;
      std::stoull(v, &used);
    }
  } catch (const std::exception&) {
    return false;
  }
  return used == v.size();
}

// Exact header, consistent width, typed fields, trailing newline, at least one row.
void expect_csv(const fs::path& path, const std::string& header, const std::vector<Col>& cols) {
  const std::string text = slurp(path);
  ASSERT_FALSE(text.empty()) << path;
  ASSERT_EQ(text.back(), '\n') << path;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  ASSERT_EQ(line, header) << path;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto fields = split(line);
    ASSERT_EQ(fields.size(), cols.size()) << path << ": " << line;
    for (std::size_t i = 0; i < cols.size(); ++i) ASSERT_TRUE(parses_as(fields[i], cols[i])) << path << ": " << line;
  }
  EXPECT_GT(rows, 0u) << path;

  auto sidecar = path;
  sidecar.replace_extension(".meta.json");
  ASSERT_TRUE(fs::exists(sidecar)) << sidecar;
  const auto meta = nlohmann::json::parse(slurp(sidecar));
  EXPECT_TRUE(meta.contains("seed"));
  EXPECT_EQ(meta["rng"], "mt19937_64");
  EXPECT_EQ(meta["version"], onc::kVersion);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("onc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, SimulateDumpConfigRoundTrip) {
  ASSERT_EQ(call({"simulate", "--algorithm", "snc", "--receivers", "8", "--epsilons", "0.25", "--packets", "40",
                  "--threshold", "10", "--seed", "7", "--runs", "4", "--out", path("a.json"), "--dump-config",
                  path("cfg.json"), "--delays-csv", path("a.csv")}),
            0)
      << err_.str();
  ASSERT_EQ(call({"simulate", "--config", path("cfg.json"), "--out", path("b.json"), "--delays-csv", path("b.csv"),
                  "--threads", "2"}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const auto report = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(report["metadata"]["config"]["algorithm"], "snct");
  EXPECT_EQ(report["metadata"]["config"]["threshold"], 10);
  expect_csv(path("a.csv"), "run,receiver,packet,first_tx_slot,decode_slot,delay",
             {Col::kInt, Col::kInt, Col::kInt, Col::kInt, Col::kOptInt, Col::kOptInt});
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  ASSERT_EQ(call({"simulate", "--receivers", "3", "--epsilons", "0.1,0.2,0.3", "--packets", "20", "--out",
                  path("a.json"), "--dump-config", path("cfg.json")}),
            0);
  ASSERT_EQ(call({"simulate", "--config", path("cfg.json"), "--algorithm", "snc", "--out", path("b.json"),
                  "--dump-config", path("cfg2.json")}),
            0);
  const auto cfg = nlohmann::json::parse(slurp(path("cfg2.json")));
  EXPECT_EQ(cfg["algorithm"], "snc");
  EXPECT_EQ(cfg["epsilons"], (std::vector<double>{0.1, 0.2, 0.3}));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(call({"simulate", "--bogus"}), 2);
  EXPECT_EQ(call({"simulate", "--algorithm", "anct", "--out", path("x.json")}), 2);
  EXPECT_EQ(call({"simulate", "--receivers", "3", "--epsilons", "0.1,0.2", "--out", path("x.json")}), 2);
  EXPECT_EQ(call({"simulate", "--threshold", "soon", "--out", path("x.json")}), 2);
  EXPECT_EQ(call({"chain-pmf", "--eps1", "0", "--out", path("x.csv")}), 2);
  EXPECT_EQ(call({"preset", "fig9", "--out-dir", path("p")}), 2);
  EXPECT_EQ(call({}), 2);
  EXPECT_EQ(call({"trace", "--pattern", path("missing.pattern")}), 1);
  EXPECT_EQ(call({"simulate", "--packets", "50", "--max-slots", "5", "--out", path("x.json")}), 1);
  EXPECT_EQ(call({"--help"}), 0);
  EXPECT_EQ(call({"--version"}), 0);
}

TEST_F(Cli, ChainPmfWritesPmfAndAgreement) {
  ASSERT_EQ(call({"chain-pmf", "--eps1", "0.1", "--eps2", "0.4", "--tmax", "60", "--mc-runs", "20000", "--out",
                  path("pmf.csv")}),
            0)
      << err_.str();
  expect_csv(path("pmf.csv"), "value,probability_mass", {Col::kInt, Col::kFloat});
  expect_csv(path("pmf_mc.csv"), "value,probability_mass", {Col::kInt, Col::kFloat});
  const auto meta = nlohmann::json::parse(slurp(path("pmf.meta.json")));
  EXPECT_EQ(meta["t_max"], 60);
  EXPECT_TRUE(meta.contains("tail_mass"));
  EXPECT_GT(meta["agreement"]["bins_checked"].get<int>(), 0);
  EXPECT_NE(out_.str().find("agreement"), std::string::npos);
}

TEST_F(Cli, WalkWritesCdf) {
  ASSERT_EQ(call({"walk", "--epsilons", "0.25,0.2,0.1", "--slots", "100", "--runs", "50", "--out", path("w.csv")}),
            0);
  expect_csv(path("w.csv"), "delay,cumulative_probability", {Col::kInt, Col::kFloat});
  const auto meta = nlohmann::json::parse(slurp(path("w.meta.json")));
  EXPECT_EQ(meta["horizon"], 100);
  EXPECT_EQ(meta["runs"], 50);
}

TEST_F(Cli, TraceToStdoutAndFile) {
  const auto pattern = onc::test::data_path("snc_reference.pattern");
  ASSERT_EQ(call({"trace", "--algorithm", "snc", "--pattern", pattern}), 0);
  const std::string text = out_.str();
  EXPECT_NE(text.find("\n8,1+7,"), std::string::npos);
  ASSERT_EQ(call({"trace", "--algorithm", "snc", "--pattern", pattern, "--out", path("t.csv")}), 0);
  EXPECT_EQ(slurp(path("t.csv")), text);
  expect_csv(path("t.csv"), "slot,support,coefficients,reception,newly_seen,newly_decoded,queue_size,leaders",
             {Col::kInt, Col::kText, Col::kText, Col::kText, Col::kText, Col::kText, Col::kInt, Col::kText});
  ASSERT_EQ(call({"trace", "--pattern", pattern, "--format", "json", "--out", path("t.json")}), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("t.json"))).size(), 12u);
}

TEST_F(Cli, PresetRunWritesSummary) {
  ASSERT_EQ(call({"preset", "fig4", "--runs", "2", "--seed", "3", "--out-dir", dir_.string()}), 0) << err_.str();
  const auto summary = dir_ / "fig4" / "summary.csv";
  expect_csv(summary,
             "preset,scenario,algorithm,threshold,n_receivers,epsilons,runs,packets,throughput_mean,throughput_min,"
             "throughput_max,mean_delay,mean_max_delay,max_delay,zero_delay_fraction,queue_mean,queue_max,slots_mean",
             {Col::kText, Col::kText, Col::kText, Col::kOptInt, Col::kInt, Col::kText, Col::kInt, Col::kInt,
              Col::kFloat, Col::kFloat, Col::kFloat, Col::kFloat, Col::kFloat, Col::kInt, Col::kFloat, Col::kFloat,
              Col::kInt, Col::kFloat});
  const std::string text = slurp(summary);
  EXPECT_NE(text.find("fig4,n2,anc,,2,"), std::string::npos);
  EXPECT_NE(text.find("fig4,n16,snct,10,16,"), std::string::npos);
  expect_csv(dir_ / "fig4" / "n8_snct10_delay_cdf.csv", "delay,cumulative_probability", {Col::kInt, Col::kFloat});
  EXPECT_TRUE(fs::exists(dir_ / "fig4" / "n8_snct10.json"));
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv(onc::cli::kOutputDirEnv, dir_.c_str(), 1);
  const int code = call({"simulate", "--packets", "10"});
  ::unsetenv(onc::cli::kOutputDirEnv);
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "report.json"));
}

TEST(Presets, Expansion) {
  using onc::Algorithm;
  const auto fig3 = onc::cli::preset_expand("fig3", 7);
  ASSERT_EQ(fig3.size(), 12u);
  EXPECT_EQ(fig3[0].config.algorithm, Algorithm::kAnc);
  EXPECT_EQ(fig3[1].config.algorithm, Algorithm::kSnc);
  EXPECT_EQ(fig3[2].config.algorithm, Algorithm::kAnct);
  EXPECT_EQ(fig3[2].config.threshold, std::optional<std::uint32_t>{40});
  EXPECT_EQ(fig3[11].label, "snct2");
  for (const auto& e : fig3) {
    EXPECT_EQ(e.config.n_receivers, 8u);
    EXPECT_EQ(e.config.runs, onc::cli::kPresetRuns);
    EXPECT_EQ(e.config.seed, 7u);
    EXPECT_NO_THROW(e.config.validate());
  }

  const auto fig4 = onc::cli::preset_expand("fig4");
  ASSERT_EQ(fig4.size(), 16u);
  EXPECT_EQ(fig4.front().config.n_receivers, 2u);
  EXPECT_EQ(fig4.back().config.n_receivers, 16u);

  const auto fig5 = onc::cli::preset_expand("fig5");
  ASSERT_EQ(fig5.size(), 16u);
  std::vector<double> case1(7, 0.25);
  case1.push_back(0.15);
  EXPECT_EQ(fig5[0].config.epsilons, case1);
  EXPECT_EQ(fig5[4].config.epsilons, (std::vector<double>{0.25, 0.25, 0.2, 0.2, 0.15, 0.15, 0.1, 0.1}));
  EXPECT_EQ(fig5[4].scenario, "case2");
  EXPECT_EQ(fig5[15].config.epsilons, std::vector<double>(8, 0.1));

  EXPECT_THROW(onc::cli::preset_expand("fig9"), onc::ConfigError);
}

}  // namespace
