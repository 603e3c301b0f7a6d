#include <gtest/gtest.h>

#include <json.hpp>

#include "onc/errors.hpp"
#include "onc/simulator.hpp"
#include "onc/trace.hpp"
#include "test_util.hpp"

namespace {

using namespace onc;

SimConfig eight(Algorithm alg, std::uint64_t runs = 6) {
  SimConfig c;
  c.n_receivers = 8;
  c.epsilons.assign(8, 0.25);
  c.m_packets = 50;
  c.algorithm = alg;
  c.runs = runs;
  c.seed = 3;
  return c;
}

TEST(Simulation, LosslessSncIsPerfect) {
  SimConfig c;
  c.n_receivers = 3;
  c.epsilons = {0.0, 0.0, 0.0};
  c.algorithm = Algorithm::kSnc;
  const auto r = run_sim(c);
  EXPECT_EQ(r.slots, 100u);
  EXPECT_EQ(r.max_delay(), 0u);
  EXPECT_DOUBLE_EQ(r.throughput_mean(), 1.0);
  EXPECT_DOUBLE_EQ(r.zero_delay_fraction(), 1.0);
}

TEST(Simulation, GoldenTraces) {
  const std::vector<std::string> anc{"1", "1+2", "2+3", "3+4", "4+5", "4+6", "6+7", "7", "5+8", "8+9", "9", "9+10"};
  const std::vector<std::string> snc{"1", "2", "3", "4", "5", "6", "7", "1+7", "8", "9", "5+9", "10"};
  EXPECT_EQ(sent_column(golden_trace(Algorithm::kAnc, test::anc_reference_pattern())), anc);
  EXPECT_EQ(sent_column(golden_trace(Algorithm::kSnc, test::snc_reference_pattern())), snc);
  EXPECT_TRUE(golden_trace(Algorithm::kAnc, {}).empty());
}

TEST(Simulation, TraceCsvShape) {
  const auto& f = GaloisField::of(1);
  const auto csv = trace_to_csv(golden_trace(Algorithm::kAnc, test::anc_reference_pattern()), f);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "slot,support,coefficients,reception,newly_seen,newly_decoded,queue_size,leaders");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 13), "1,1,01,OK;E,1");
  const auto json = nlohmann::json::parse(trace_to_json(golden_trace(Algorithm::kSnc, test::snc_reference_pattern()), f));
  ASSERT_EQ(json.size(), 12u);
  EXPECT_EQ(json[7]["support"], (std::vector<int>{1, 7}));
}

TEST(Simulation, SingleRunBatchEqualsRunSim) {
  auto c = eight(Algorithm::kSnc, 1);
  const auto batch = run_batch(c, 1);
  const auto single = run_sim(c, 0);
  EXPECT_EQ(batch.runs.at(0).delay_histogram, single.delay_histogram);
  EXPECT_EQ(batch.runs.at(0).slots, single.slots);
  BatchAggregator agg;
  agg.add(single);
  EXPECT_EQ(report_to_json(agg.finalize()), report_to_json(batch.report));
}

TEST(Simulation, DeterministicAcrossThreadCounts) {
  const auto c = eight(Algorithm::kAnc);
  const auto a = report_to_json(run_batch(c, 1).report, &c);
  const auto b = report_to_json(run_batch(c, 3).report, &c);
  EXPECT_EQ(a, b);
  auto other = c;
  other.seed = 4;
  EXPECT_NE(a, report_to_json(run_batch(other, 1).report, &other));
}

TEST(Simulation, AggregatorMergeIsOrderIndependent) {
  const auto c = eight(Algorithm::kSnct);
  auto cfg = c;
  cfg.threshold = 10;
  const auto batch = run_batch(cfg, 1);
  BatchAggregator even, odd, forward, backward;
  for (const auto& r : batch.runs) (r.run % 2 ? odd : even).add(r);
  for (const auto& r : batch.runs) forward.add(r);
  for (auto it = batch.runs.rbegin(); it != batch.runs.rend(); ++it) backward.add(*it);
  BatchAggregator ab = even, ba = odd;
  ab.merge(odd);
  ba.merge(even);
  const auto reference = report_to_json(forward.finalize());
  EXPECT_EQ(report_to_json(ab.finalize()), reference);
  EXPECT_EQ(report_to_json(ba.finalize()), reference);
  EXPECT_EQ(report_to_json(backward.finalize()), reference);
  EXPECT_EQ(ab.size(), c.runs);
}

TEST(Simulation, ThroughputNearCapacity) {
  for (auto alg : {Algorithm::kAnc, Algorithm::kSnc}) {
    const auto r = run_batch(eight(alg, 10), 1).report;
    EXPECT_GT(r.throughput_mean, 0.65);
    EXPECT_LT(r.throughput_mean, 0.78);
    EXPECT_EQ(r.innovation_violations, 0u);
  }
}

TEST(Simulation, HorizonGuard) {
  auto c = eight(Algorithm::kAnc, 1);
  c.max_slots = 10;
  EXPECT_THROW(run_sim(c), HorizonExceeded);
}

TEST(Simulation, ReplayStopsWhenPatternEnds) {
  SimConfig c;
  c.epsilons = {0.0, 0.0};
  c.m_packets = 50;
  const auto r = run_sim(c, 0, test::anc_reference_pattern());
  EXPECT_FALSE(r.completed);
  EXPECT_EQ(r.slots, 12u);
}

TEST(Simulation, DiscardExpiredCountsLateDecodesAsLost) {
  auto c = eight(Algorithm::kAnct, 4);
  c.threshold = 3;
  c.discard_expired = true;
  const auto batch = run_batch(c, 1);
  EXPECT_GT(batch.report.lost, 0u);
  for (const auto& r : batch.runs) {
    for (const auto& rs : r.receivers) {
      EXPECT_EQ(rs.delivered + rs.lost, c.m_packets);
      EXPECT_LE(rs.delay_max, 3u);
    }
  }
}

TEST(Config, JsonRoundTrip) {
  auto c = eight(Algorithm::kSnct);
  c.threshold = 12;
  c.delta = 2;
  c.feedback = FeedbackModel{FeedbackKind::kLossy, 0.1, 3, LostReportPolicy::kRandom, 0.3};
  const auto text = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(text)), text);
  EXPECT_THROW(config_from_json(R"({"n_receivers": 2, "colour": 1})"), ConfigError);
}

TEST(Config, Validation) {
  SimConfig c;
  c.epsilons = {0.2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = SimConfig{};
  c.algorithm = Algorithm::kAnct;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(expand_epsilons({0.3}, 3), (std::vector<double>{0.3, 0.3, 0.3}));
  EXPECT_THROW(expand_epsilons({0.3, 0.2}, 3), ConfigError);
  EXPECT_FALSE(parse_threshold("none").has_value());
  EXPECT_EQ(parse_threshold("10"), std::optional<std::uint32_t>{10});
  EXPECT_THROW(parse_threshold("0"), ConfigError);
  EXPECT_EQ(SimConfig{}.effective_field_bits(), 1);
  EXPECT_EQ(eight(Algorithm::kAnc).effective_field_bits(), 8);
}

TEST(Metrics, DelayCsvAndReport) {
  auto c = eight(Algorithm::kSnc, 2);
  c.keep_records = true;
  const auto batch = run_batch(c, 1);
  const auto csv = delays_to_csv(batch.runs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "run,receiver,packet,first_tx_slot,decode_slot,delay");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 8 * 50);
  const auto report = nlohmann::json::parse(report_to_json(batch.report, &c));
  EXPECT_EQ(report["metadata"]["rng"], "mt19937_64");
  EXPECT_EQ(report["metadata"]["seed"], 3);
  const auto cdf = batch.report.delay_cdf();
  ASSERT_FALSE(cdf.empty());
  EXPECT_DOUBLE_EQ(cdf.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(cdf.begin(), cdf.end()));
}

}  // namespace
