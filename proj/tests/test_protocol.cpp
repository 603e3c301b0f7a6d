#include <gtest/gtest.h>

#include <random>
#include <set>

#include "onc/errors.hpp"
#include "onc/simulator.hpp"
#include "onc/trace.hpp"
#include "test_util.hpp"

namespace {

using namespace onc;
using onc::test::xor_of;

const GaloisField& gf2() { return GaloisField::of(1); }

SenderConfig plain(Algorithm alg) {
  SenderConfig c;
  c.algorithm = alg;
  c.total_packets = 10;
  return c;
}

ReceiverView view_of(const KnowledgeMatrix& k) { return ReceiverView{&k, &k, k.rank(), false}; }

// Replays the first `slots` slots of a pattern with tracing on.
Simulation replay(Algorithm alg, const std::vector<ReceptionBitmap>& pattern, std::size_t slots) {
  SimConfig c;
  c.n_receivers = 2;
  c.epsilons = {0.0, 0.0};
  c.m_packets = pattern.size();
  c.algorithm = alg;
  Simulation sim(c, 0, std::make_unique<ReplayChannel>(pattern, 2), true);
  for (std::size_t i = 0; i < slots; ++i) sim.step();
  return sim;
}

TEST(LeaderSet, Examples) {
  const std::vector<std::uint64_t> tie{8, 8}, one{9, 8}, single{3};
  EXPECT_EQ(leader_set(tie), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(leader_set(one), (std::vector<std::size_t>{0}));
  EXPECT_EQ(leader_set(single), (std::vector<std::size_t>{0}));
}

TEST(RequestedPacket, DeferralSkipsPacketWithoutSurvivingEncoding) {
  KnowledgeMatrix r2(gf2());
  for (const auto& p : {xor_of({1, 2}), xor_of({2, 3}), xor_of({3, 4}), xor_of({4, 6})}) r2.insert(p);
  EXPECT_EQ(requested_packet(r2, true, 6), 5u);   // p6
  EXPECT_EQ(requested_packet(r2, false, 6), 4u);  // p5
}

TEST(RequestedPacket, DeferredPacketReturnsOnceCaughtUp) {
  const auto sim = replay(Algorithm::kAnc, test::anc_reference_pattern(), 8);
  const auto& r2 = sim.receivers()[1].knowledge();
  EXPECT_EQ(r2.undecoded_row_count(), 0u);
  EXPECT_EQ(requested_packet(r2, true, sim.sender().next_new()), 4u);  // p5
}

TEST(RequestedPacket, FreshReceiverAsksForNextNew) {
  KnowledgeMatrix k(gf2());
  EXPECT_EQ(requested_packet(k, true, 0), 0u);
  EXPECT_EQ(requested_packet(k, true, 3), 0u);
}

TEST(AncSelect, ReferenceTraceSlots) {
  const auto sent = sent_column(golden_trace(Algorithm::kAnc, test::anc_reference_pattern()));
  ASSERT_EQ(sent.size(), 12u);
  EXPECT_EQ(sent[5], "4+6");
  EXPECT_EQ(sent[7], "7");
}

TEST(AncSelect, UpToDateReceiversGetNextNew) {
  SenderState s(plain(Algorithm::kAnc), gf2(), Rng(1));
  KnowledgeMatrix a(gf2()), b(gf2());
  const std::vector<ReceiverView> views{view_of(a), view_of(b)};
  EXPECT_EQ(s.select(1, views), xor_of({1}));
  EXPECT_EQ(s.next_new(), 1u);
}

TEST(SncSelect, ReferenceTraceRepairs) {
  const auto sent = sent_column(golden_trace(Algorithm::kSnc, test::snc_reference_pattern()));
  ASSERT_EQ(sent.size(), 12u);
  EXPECT_EQ(sent[7], "1+7");
  EXPECT_EQ(sent[10], "5+9");
  EXPECT_EQ(sent[11], "10");
}

TEST(ChooseCoefficients, Gf2PairIsXor) {
  KnowledgeMatrix r1(gf2()), r2(gf2());
  const std::vector<PacketId> support{3, 5};
  for (const auto& p : {xor_of({1}), xor_of({2}), xor_of({3}), xor_of({4}), xor_of({5})}) r1.insert(p);
  for (const auto& p : {xor_of({1, 2}), xor_of({2, 3}), xor_of({3, 4})}) r2.insert(p);
  const std::vector<const KnowledgeMatrix*> targets{&r1, &r2};
  Rng rng(1);
  EXPECT_EQ(choose_coefficients(support, targets, gf2(), rng), (std::vector<Symbol>{1, 1}));
  const std::vector<PacketId> single{6};
  EXPECT_EQ(choose_coefficients(single, targets, gf2(), rng), std::vector<Symbol>{1});
}

TEST(ChooseCoefficients, InnovativeForEightReceiversOverGf256) {
  const auto& f = GaloisField::of(8);
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<KnowledgeMatrix> mirrors(8, KnowledgeMatrix(f));
    for (auto& k : mirrors) {
      for (int i = 0; i < 12; ++i) {
        CodedPacket pkt;
        const PacketId lo = PacketId(gen() % 16);
        for (PacketId p = lo; p < lo + 3; ++p) pkt.terms.push_back(Term{p, Symbol(1 + gen() % 255)});
        k.insert(pkt);
      }
    }
    std::set<PacketId> wanted;
    std::vector<const KnowledgeMatrix*> targets;
    for (auto& k : mirrors) {
      wanted.insert(k.oldest_unseen());
      targets.push_back(&k);
    }
    const std::vector<PacketId> support(wanted.begin(), wanted.end());
    Rng rng(trial);
    const auto coeffs = choose_coefficients(support, targets, f, rng);
    ASSERT_EQ(coeffs.size(), support.size());
    CodedPacket pkt;
    for (std::size_t i = 0; i < support.size(); ++i) {
      ASSERT_NE(coeffs[i], 0);
      pkt.terms.push_back(Term{support[i], coeffs[i]});
    }
    for (const auto& k : mirrors) {
      auto copy = k;
      EXPECT_TRUE(copy.insert(pkt).innovative);
    }
  }
}

TEST(ChooseCoefficients, Gf2WithoutInnovativeXorIsExhausted) {
  // Over GF(2) the only candidate on {p1, p2} is p1+p2, which R1 already holds.
  KnowledgeMatrix r1(gf2());
  r1.insert(xor_of({1, 2}));
  const std::vector<PacketId> support{0, 1};
  const std::vector<const KnowledgeMatrix*> targets{&r1};
  Rng rng(1);
  EXPECT_THROW(choose_coefficients(support, targets, gf2(), rng), SearchExhausted);
}

TEST(QueueUpdate, AncDropsSeenSncKeepsUndecoded) {
  KnowledgeMatrix r1(gf2()), r2(gf2());
  r1.insert(xor_of({1}));
  r1.insert(xor_of({2}));
  r2.insert(xor_of({1, 2}));
  const std::vector<ReceiverView> after{view_of(r1), view_of(r2)};

  KnowledgeMatrix empty1(gf2()), empty2(gf2());
  const std::vector<ReceiverView> before{view_of(empty1), view_of(empty2)};

  SenderState anc(plain(Algorithm::kAnc), gf2(), Rng(1));
  anc.select(1, before);  // p1
  KnowledgeMatrix only_p1(gf2());
  only_p1.insert(xor_of({1}));
  const std::vector<ReceiverView> mid{view_of(only_p1), view_of(empty2)};
  EXPECT_EQ(anc.select(2, mid), xor_of({1, 2}));
  EXPECT_EQ(anc.queue_update(2, after), std::vector<PacketId>{0});
  EXPECT_EQ(anc.queue(), std::vector<PacketId>{1});

  SenderState snc(plain(Algorithm::kSnc), gf2(), Rng(1));
  snc.select(1, before);
  snc.select(2, before);
  EXPECT_TRUE(snc.queue_update(2, after).empty());
  EXPECT_EQ(snc.queue(), (std::vector<PacketId>{0, 1}));
  EXPECT_TRUE(snc.queue_update(3, after).empty());
}

SenderConfig snct(std::uint32_t threshold) {
  SenderConfig c = plain(Algorithm::kSnct);
  c.threshold = threshold;
  return c;
}

TEST(ThresholdWrap, RepeatsPacketInDanger) {
  SenderState s(snct(3), gf2(), Rng(1));
  KnowledgeMatrix r1(gf2()), r2(gf2());
  const std::vector<ReceiverView> views{view_of(r1), view_of(r2)};
  for (Slot t = 1; t <= 5; ++t) {
    const auto pkt = s.select(t, views);
    EXPECT_EQ(pkt, CodedPacket::uncoded(PacketId(t - 1)));
    r1.insert(pkt);
    if (t != 3) r2.insert(pkt);
  }
  EXPECT_EQ(s.select(6, std::vector<ReceiverView>{view_of(r1), view_of(r2)}), xor_of({3}));
  EXPECT_EQ(s.urgent(), std::optional<PacketId>{2});
  EXPECT_EQ(s.select(7, std::vector<ReceiverView>{view_of(r1), view_of(r2)}), xor_of({3}));
}

TEST(ThresholdWrap, NoDangerPassesThrough) {
  SenderState s(snct(3), gf2(), Rng(1));
  KnowledgeMatrix r1(gf2());
  const std::vector<ReceiverView> views{view_of(r1)};
  EXPECT_FALSE(s.threshold_wrap(views, 1).has_value());
}

TEST(ThresholdWrap, UniformReproduciblePickAmongDangers) {
  std::set<PacketId> picked;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    PacketId first = 0;
    for (int repeat = 0; repeat < 2; ++repeat) {
      SenderState s(snct(2), gf2(), Rng(seed));
      KnowledgeMatrix r1(gf2());
      const std::vector<ReceiverView> views{view_of(r1)};
      s.select(1, views);
      s.select(2, views);
      const auto pkt = s.select(10, views);
      ASSERT_TRUE(pkt.is_uncoded());
      if (repeat == 0) first = pkt.terms[0].packet;
      EXPECT_EQ(pkt.terms[0].packet, first);
    }
    picked.insert(first);
  }
  EXPECT_EQ(picked, (std::set<PacketId>{0, 1}));
}

TEST(Receiver, DelaysOnReferencePattern) {
  const auto sim = replay(Algorithm::kAnc, test::anc_reference_pattern(), 12);
  const auto& r2 = sim.receivers()[1];
  EXPECT_EQ(r2.decode_slot(0), 8u);
  EXPECT_EQ(r2.decode_slot(0) - sim.sender().first_tx()[0], 7u);
  EXPECT_EQ(sim.receivers()[0].decode_slot(0), 1u);  // same-slot decode, delay 0
}

TEST(Receiver, NonInnovativeDeliveryStillCounts) {
  ReceiverState r(gf2(), 3);
  const std::vector<Slot> first_tx{1, 2, 3};
  r.deliver(xor_of({1}), 1, first_tx);
  const auto report = r.deliver(xor_of({1}), 2, first_tx);
  EXPECT_FALSE(report.innovative);
  EXPECT_TRUE(report.newly_seen.empty());
  EXPECT_TRUE(report.newly_decoded.empty());
  EXPECT_EQ(r.received_count(), 2u);
}

TEST(ChainTracker, ReferencePatternReceiverTwo) {
  const auto sim = replay(Algorithm::kAnc, test::anc_reference_pattern(), 12);
  const auto& records = sim.receivers()[1].chains().records();
  ASSERT_FALSE(records.empty());
  EXPECT_EQ(records[0].start, 2u);
  EXPECT_EQ(records[0].break_slot, 8u);
  EXPECT_EQ(records[0].duration, 6u);
  EXPECT_EQ(records[0].size, 5u);
}

TEST(ChainTracker, NoErasuresNoChains) {
  SimConfig c;
  c.epsilons = {0.0, 0.0};
  const auto r = run_sim(c);
  for (const auto& per_receiver : r.chains) EXPECT_TRUE(per_receiver.empty());
}

class AlgorithmRuns : public ::testing::TestWithParam<Algorithm> {};

TEST_P(AlgorithmRuns, TerminatesAndSeenSetsOnlyGrow) {
  SimConfig c;
  c.n_receivers = 3;
  c.epsilons = {0.3, 0.2, 0.1};
  c.m_packets = 60;
  c.algorithm = GetParam();
  if (uses_threshold(c.algorithm)) c.threshold = 8;
  for (std::uint64_t run = 0; run < 5; ++run) {
    Simulation sim(c, run);
    std::vector<std::vector<PacketId>> seen(3);
    while (sim.step()) {
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& k = sim.receivers()[i].knowledge();
        for (PacketId p : seen[i]) ASSERT_TRUE(k.is_seen(p));
        seen[i] = k.seen_set();
        ASSERT_TRUE(k.is_reduced());
      }
    }
    const auto r = sim.result();
    EXPECT_TRUE(r.completed);
    for (const auto& rs : r.receivers) EXPECT_EQ(rs.delivered, c.m_packets);
    if (!uses_threshold(c.algorithm)) {
      EXPECT_EQ(r.innovation_violations, 0u);
      EXPECT_EQ(r.leader_violations, 0u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, AlgorithmRuns,
                         ::testing::Values(Algorithm::kAnc, Algorithm::kSnc, Algorithm::kAnct, Algorithm::kSnct),
                         [](const auto& info) { return to_string(info.param); });

TEST(Algorithm, NamesAndThresholdMapping) {
  EXPECT_EQ(parse_algorithm("SNC"), Algorithm::kSnc);
  EXPECT_EQ(resolve_algorithm("anc", 10u), Algorithm::kAnct);
  EXPECT_EQ(resolve_algorithm("snc", std::nullopt), Algorithm::kSnc);
  EXPECT_THROW(resolve_algorithm("snct", std::nullopt), std::invalid_argument);
  EXPECT_THROW(parse_algorithm("xnc"), std::invalid_argument);
}

}  // namespace
