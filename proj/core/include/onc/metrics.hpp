#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "onc/knowledge_matrix.hpp"
#include "onc/receiver.hpp"

namespace onc {

struct SimConfig;

struct PacketRecord {
  std::uint32_t receiver;
  PacketId packet;
  Slot first_tx;
  Slot decode;  // kNever when the packet was lost
  Slot delay;
};

struct ReceiverRunStats {
  std::uint64_t delivered = 0;  // decoded in time
  std::uint64_t lost = 0;       // never decoded, or decoded after an expired deadline
  std::uint64_t delay_sum = 0;
  Slot delay_max = 0;
  Slot last_decode = 0;
  double throughput = 0.0;         // delivered / last_decode
  double throughput_global = 0.0;  // delivered / slots
};

/// Everything measured in one run.
struct RunResult {
  std::uint64_t run = 0;
  Slot slots = 0;
  bool completed = false;  // false when a replayed pattern ran out first
  std::vector<ReceiverRunStats> receivers;
  std::vector<std::uint64_t> delay_histogram;  // pooled over receivers, index = delay
  std::uint64_t queue_sum = 0;
  std::uint64_t queue_max = 0;
  std::vector<std::uint32_t> queue_trace;  // queue size after every slot
  std::vector<std::vector<ChainRecord>> chains;
  std::uint64_t non_innovative = 0;
  std::uint64_t innovation_violations = 0;
  std::uint64_t leader_violations = 0;
  std::vector<PacketRecord> records;  // filled when keep_records is set

  Slot max_delay() const;
  std::uint64_t delivered() const;
  double throughput_mean() const;
  double zero_delay_fraction() const;
};

struct ReceiverMetrics {
  double mean_delay = 0.0;
  Slot max_delay = 0;
  double throughput_mean = 0.0;
  double throughput_min = 0.0;
  double throughput_max = 0.0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
};

struct RunSpread {
  std::uint64_t run = 0;
  Slot slots = 0;
  double throughput_mean = 0.0;
  Slot max_delay = 0;
  double zero_delay_fraction = 0.0;
};

struct MetricsReport {
  std::uint64_t runs = 0;
  std::size_t n_receivers = 0;
  std::vector<ReceiverMetrics> per_receiver;
  double throughput_mean = 0.0;  // over every (run, receiver) pair
  double throughput_min = 0.0;
  double throughput_max = 0.0;
  double throughput_global_mean = 0.0;
  double mean_delay = 0.0;
  double mean_max_delay = 0.0;  // mean over runs of the run's worst delay
  Slot max_delay = 0;
  double zero_delay_fraction = 0.0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::vector<std::uint64_t> delay_histogram;
  double queue_mean = 0.0;
  std::uint64_t queue_max = 0;
  std::map<Slot, std::uint64_t> chain_histogram;  // duration -> count
  std::uint64_t chains = 0;
  double slots_mean = 0.0;
  Slot slots_max = 0;
  std::uint64_t non_innovative = 0;
  std::uint64_t innovation_violations = 0;
  std::uint64_t leader_violations = 0;
  std::vector<RunSpread> per_run;

  /// P(delay <= d) over every (receiver, packet) pair; lost pairs keep it below 1.
  std::vector<double> delay_cdf() const;
};

/// Order-independent reduction of run results, keyed by run index.
class BatchAggregator {
 public:
  void add(const RunResult& run);
  void merge(const BatchAggregator& other);
  MetricsReport finalize() const;
  std::size_t size() const noexcept { return runs_.size(); }

 private:
  struct Summary {
    Slot slots;
    std::vector<ReceiverRunStats> receivers;
    std::vector<std::uint64_t> delay_histogram;
    std::uint64_t queue_sum, queue_max;
    std::vector<Slot> chain_durations;
    std::uint64_t non_innovative, innovation_violations, leader_violations;
  };
  std::map<std::uint64_t, Summary> runs_;
};

/// JSON report; when `config` is given its parameters go into a metadata block.
std::string report_to_json(const MetricsReport& report, const SimConfig* config = nullptr);

/// Per-packet delay dump: run,receiver,packet,first_tx_slot,decode_slot,delay (1-based ids).
std::string delays_to_csv(const std::vector<RunResult>& runs);

}  // namespace onc
