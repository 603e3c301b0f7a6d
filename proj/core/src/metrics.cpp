#include "onc/metrics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "onc/config.hpp"
#include "onc/random.hpp"

namespace onc {

using nlohmann::ordered_json;

Slot RunResult::max_delay() const {
  Slot m = 0;
  for (const auto& r : receivers) m = std::max(m, r.delay_max);
  return m;
}

std::uint64_t RunResult::delivered() const {
  std::uint64_t n = 0;
  for (const auto& r : receivers) n += r.delivered;
  return n;
}

double RunResult::throughput_mean() const {
  if (receivers.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : receivers) s += r.throughput;
  return s / static_cast<double>(receivers.size());
}

double RunResult::zero_delay_fraction() const {
  const auto n = delivered();
  return (n == 0 || delay_histogram.empty()) ? 0.0 : static_cast<double>(delay_histogram[0]) / static_cast<double>(n);
}

std::vector<double> MetricsReport::delay_cdf() const {
  std::vector<double> out(delay_histogram.size(), 0.0);
  const double pairs = static_cast<double>(delivered + lost);
  std::uint64_t running = 0;
  for (std::size_t d = 0; d < delay_histogram.size(); ++d) {
    running += delay_histogram[d];
    out[d] = pairs > 0 ? static_cast<double>(running) / pairs : 0.0;
  }
  return out;
}

void BatchAggregator::add(const RunResult& run) {
  Summary s{run.slots, run.receivers, run.delay_histogram, run.queue_sum, run.queue_max, {},
            run.non_innovative, run.innovation_violations, run.leader_violations};
  for (const auto& per_receiver : run.chains) {
    for (const auto& c : per_receiver) s.chain_durations.push_back(c.duration);
  }
  runs_.insert_or_assign(run.run, std::move(s));
}

void BatchAggregator::merge(const BatchAggregator& other) {
  for (const auto& [k, v] : other.runs_) runs_.insert_or_assign(k, v);
}

MetricsReport BatchAggregator::finalize() const {
  MetricsReport r;
  r.runs = runs_.size();
  if (runs_.empty()) return r;
  r.n_receivers = runs_.begin()->second.receivers.size();
  r.per_receiver.resize(r.n_receivers);
  std::vector<std::uint64_t> delay_sums(r.n_receivers, 0);
  for (auto& pr : r.per_receiver) pr.throughput_min = std::numeric_limits<double>::infinity();
  r.throughput_min = std::numeric_limits<double>::infinity();

  double tp_sum = 0.0, tp_global_sum = 0.0, max_delay_sum = 0.0;
  std::uint64_t slots_sum = 0, queue_sum = 0, delay_total = 0;
  for (const auto& [index, s] : runs_) {
    Slot run_max = 0;
    double run_tp = 0.0;
    std::uint64_t run_delivered = 0;
    for (std::size_t i = 0; i < r.n_receivers; ++i) {
      const auto& st = s.receivers[i];
      auto& pr = r.per_receiver[i];
      pr.delivered += st.delivered;
      pr.lost += st.lost;
      pr.max_delay = std::max(pr.max_delay, st.delay_max);
      pr.throughput_mean += st.throughput;
      pr.throughput_min = std::min(pr.throughput_min, st.throughput);
      pr.throughput_max = std::max(pr.throughput_max, st.throughput);
      delay_sums[i] += st.delay_sum;
      run_max = std::max(run_max, st.delay_max);
      run_tp += st.throughput;
      run_delivered += st.delivered;
      tp_global_sum += st.throughput_global;
      r.throughput_min = std::min(r.throughput_min, st.throughput);
      r.throughput_max = std::max(r.throughput_max, st.throughput);
    }
    tp_sum += run_tp;
    max_delay_sum += static_cast<double>(run_max);
    r.max_delay = std::max(r.max_delay, run_max);
    if (s.delay_histogram.size() > r.delay_histogram.size()) r.delay_histogram.resize(s.delay_histogram.size(), 0);
    for (std::size_t d = 0; d < s.delay_histogram.size(); ++d) r.delay_histogram[d] += s.delay_histogram[d];
    slots_sum += s.slots;
    r.slots_max = std::max(r.slots_max, s.slots);
    queue_sum += s.queue_sum;
    r.queue_max = std::max(r.queue_max, s.queue_max);
    for (Slot d : s.chain_durations) ++r.chain_histogram[d];
    r.chains += s.chain_durations.size();
    r.non_innovative += s.non_innovative;
    r.innovation_violations += s.innovation_violations;
    r.leader_violations += s.leader_violations;
    const double zero = run_delivered ? static_cast<double>(s.delay_histogram.empty() ? 0 : s.delay_histogram[0]) /
                                            static_cast<double>(run_delivered)
                                      : 0.0;
    r.per_run.push_back(RunSpread{index, s.slots, run_tp / static_cast<double>(r.n_receivers), run_max, zero});
  }

  const double runs = static_cast<double>(r.runs);
  const double pairs = runs * static_cast<double>(r.n_receivers);
  for (std::size_t i = 0; i < r.n_receivers; ++i) {
    auto& pr = r.per_receiver[i];
    pr.throughput_mean /= runs;
    pr.mean_delay = pr.delivered ? static_cast<double>(delay_sums[i]) / static_cast<double>(pr.delivered) : 0.0;
    r.delivered += pr.delivered;
    r.lost += pr.lost;
    delay_total += delay_sums[i];
  }
  r.throughput_mean = tp_sum / pairs;
  r.throughput_global_mean = tp_global_sum / pairs;
  r.mean_delay = r.delivered ? static_cast<double>(delay_total) / static_cast<double>(r.delivered) : 0.0;
  r.mean_max_delay = max_delay_sum / runs;
  r.zero_delay_fraction = (r.delivered && !r.delay_histogram.empty())
                              ? static_cast<double>(r.delay_histogram[0]) / static_cast<double>(r.delivered)
                              : 0.0;
  r.slots_mean = static_cast<double>(slots_sum) / runs;
  r.queue_mean = slots_sum ? static_cast<double>(queue_sum) / static_cast<double>(slots_sum) : 0.0;
  return r;
}

std::string report_to_json(const MetricsReport& r, const SimConfig* config) {
  ordered_json j;
  if (config) {
    j["metadata"] = {{"version", kVersion},
                     {"rng", kRngName},
                     {"seed", config->seed},
                     {"runs", r.runs},
                     {"config", ordered_json::parse(config_to_json(*config))}};
  }
  j["runs"] = r.runs;
  j["n_receivers"] = r.n_receivers;
  j["throughput_mean"] = r.throughput_mean;
  j["throughput_min"] = r.throughput_min;
  j["throughput_max"] = r.throughput_max;
  j["throughput_global"] = r.throughput_global_mean;
  j["mean_delay"] = r.mean_delay;
  j["mean_max_delay"] = r.mean_max_delay;
  j["max_delay"] = r.max_delay;
  j["zero_delay_fraction"] = r.zero_delay_fraction;
  j["delivered"] = r.delivered;
  j["lost"] = r.lost;
  j["queue_mean"] = r.queue_mean;
  j["queue_max"] = r.queue_max;
  j["slots_mean"] = r.slots_mean;
  j["slots_max"] = r.slots_max;
  j["non_innovative_receptions"] = r.non_innovative;
  j["innovation_violations"] = r.innovation_violations;
  j["leader_violations"] = r.leader_violations;
  ordered_json receivers = ordered_json::array();
  for (std::size_t i = 0; i < r.per_receiver.size(); ++i) {
    const auto& pr = r.per_receiver[i];
    receivers.push_back({{"receiver", i + 1},
                         {"mean_delay", pr.mean_delay},
                         {"max_delay", pr.max_delay},
                         {"throughput_mean", pr.throughput_mean},
                         {"throughput_min", pr.throughput_min},
                         {"throughput_max", pr.throughput_max},
                         {"delivered", pr.delivered},
                         {"lost", pr.lost}});
  }
  j["per_receiver"] = std::move(receivers);
  ordered_json cdf = ordered_json::array();
  const auto values = r.delay_cdf();
  for (std::size_t d = 0; d < values.size(); ++d) cdf.push_back({{"delay", d}, {"cumulative_probability", values[d]}});
  j["delay_cdf"] = std::move(cdf);
  ordered_json chains = ordered_json::array();
  for (const auto& [duration, count] : r.chain_histogram) chains.push_back({{"duration", duration}, {"count", count}});
  j["chain_histogram"] = std::move(chains);
  ordered_json spread = ordered_json::array();
  for (const auto& s : r.per_run) {
    spread.push_back({{"run", s.run},
                      {"slots", s.slots},
                      {"throughput_mean", s.throughput_mean},
                      {"max_delay", s.max_delay},
                      {"zero_delay_fraction", s.zero_delay_fraction}});
  }
  j["per_run"] = std::move(spread);
  return j.dump(2) + "\n";
}

std::string delays_to_csv(const std::vector<RunResult>& runs) {
  std::ostringstream out;
  out << "run,receiver,packet,first_tx_slot,decode_slot,delay\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      out << run.run << ',' << rec.receiver + 1 << ',' << rec.packet + 1 << ',' << rec.first_tx << ',';
      if (rec.decode != kNever) out << rec.decode << ',' << rec.delay;
      else out << ',';
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace onc
