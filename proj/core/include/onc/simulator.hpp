#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "onc/channel.hpp"
#include "onc/config.hpp"
#include "onc/feedback.hpp"
#include "onc/metrics.hpp"
#include "onc/receiver.hpp"
#include "onc/sender.hpp"

namespace onc {

/// One line of a trace: what was sent and what each receiver made of it.
struct SlotRecord {
  Slot slot = 0;
  CodedPacket sent;
  ReceptionBitmap reception;
  std::vector<std::vector<PacketId>> newly_seen;
  std::vector<std::vector<PacketId>> newly_decoded;
  std::size_t queue_size = 0;
  std::vector<std::size_t> leaders;  // after the slot
};

/// A single run, advanced one slot at a time.
///
/// Slot order: draw the erasure pattern, let the sender pick a packet, deliver
/// it, update chain bookkeeping, pass feedback to the sender, update the queue.
/// Under perfect feedback every reception by a receiver that still misses
/// packets is checked for innovation (ANC/SNC), and every receiver that led
/// after the previous slot and receives must end the slot with everything
/// sent so far decoded. Both checks count violations instead of throwing.
class Simulation {
 public:
  /// With no `source`, erasures are sampled from the config's epsilons and seed.
  Simulation(const SimConfig& config, std::uint64_t run, std::unique_ptr<BitmapSource> source = nullptr,
             bool record_trace = false);

  /// Advances one slot. Returns false once every receiver is done or a replayed
  /// pattern is exhausted. Throws HorizonExceeded at the max_slots guard.
  bool step();
  bool finished() const noexcept { return done_ || exhausted_; }

  /// Runs to completion and returns the measurements.
  RunResult run();
  /// Measurements so far (also valid after a replayed pattern ends early).
  RunResult result() const;

  Slot slot() const noexcept { return slot_; }
  const SenderState& sender() const noexcept { return sender_; }
  const std::vector<ReceiverState>& receivers() const noexcept { return receivers_; }
  const std::vector<SlotRecord>& trace() const noexcept { return trace_; }
  const std::optional<SlotRecord>& last_record() const noexcept { return last_; }
  const FeedbackChannel* feedback() const noexcept { return feedback_ ? &*feedback_ : nullptr; }

 private:
  std::vector<ReceiverView> views() const;
  bool receiver_done(std::size_t i, Slot slot) const;

  SimConfig config_;
  std::uint64_t run_;
  const GaloisField* field_;
  std::unique_ptr<BitmapSource> source_;
  SenderState sender_;
  std::vector<ReceiverState> receivers_;
  std::optional<FeedbackChannel> feedback_;
  bool record_trace_;
  bool check_innovation_;
  Slot slot_ = 0;
  bool done_ = false;
  bool exhausted_ = false;
  std::uint64_t queue_sum_ = 0;
  std::uint64_t queue_max_ = 0;
  std::vector<std::uint32_t> queue_trace_;
  std::uint64_t non_innovative_ = 0;
  std::uint64_t innovation_violations_ = 0;
  std::uint64_t leader_violations_ = 0;
  std::optional<SlotRecord> last_;
  std::vector<SlotRecord> trace_;
};

/// Single run `run` of `config`. A pattern replaces sampled erasures; the run
/// then stops when either the pattern or the session ends.
RunResult run_sim(const SimConfig& config, std::uint64_t run = 0,
                  const std::optional<std::vector<ReceptionBitmap>>& pattern = std::nullopt);

struct BatchResult {
  MetricsReport report;
  std::vector<RunResult> runs;  // ordered by run index
};

/// config.runs independent runs (run indices 0..runs-1) on up to `threads`
/// workers (0 = hardware concurrency). The result does not depend on `threads`.
BatchResult run_batch(const SimConfig& config, unsigned threads = 0);

/// Replays a pattern and returns the per-slot trace. Defaults follow the
/// worked examples: GF(2), deferral on, one packet per pattern slot available.
std::vector<SlotRecord> golden_trace(Algorithm algorithm, const std::vector<ReceptionBitmap>& pattern,
                                     int field_bits = 1, bool deferral = true, std::size_t m_packets = 0);

}  // namespace onc
