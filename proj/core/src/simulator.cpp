#include "onc/simulator.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "onc/errors.hpp"

namespace onc {

namespace {

std::unique_ptr<BitmapSource> sampled_source(const SimConfig& config, std::uint64_t run) {
  return std::make_unique<SampledChannel>(
      ChannelSet{config.epsilons, derive_seed(config.seed, run, Stream::kChannel)});
}

}  // namespace

Simulation::Simulation(const SimConfig& config, std::uint64_t run, std::unique_ptr<BitmapSource> source,
                       bool record_trace)
    : config_((config.validate(), config)),
      run_(run),
      field_(&GaloisField::of(config_.effective_field_bits())),
      source_(source ? std::move(source) : sampled_source(config_, run)),
      sender_(config_.sender_config(), *field_, make_rng(config_.seed, run, Stream::kSender)),
      receivers_(config_.n_receivers, ReceiverState(*field_, config_.m_packets)),
      record_trace_(record_trace),
      check_innovation_(config_.feedback.is_perfect() &&
                        (config_.algorithm == Algorithm::kAnc || config_.algorithm == Algorithm::kSnc)) {
  if (source_->receivers() != config_.n_receivers) {
    throw ConfigError("erasure source width does not match n_receivers");
  }
  if (!config_.feedback.is_perfect()) {
    feedback_.emplace(config_.feedback, config_.n_receivers, *field_, make_rng(config_.seed, run, Stream::kFeedback));
  }
}

std::vector<ReceiverView> Simulation::views() const {
  if (feedback_) return feedback_->views();
  std::vector<ReceiverView> out(receivers_.size());
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    const auto& k = receivers_[i].knowledge();
    out[i] = ReceiverView{&k, &k, receivers_[i].received_count(), false};
  }
  return out;
}

bool Simulation::receiver_done(std::size_t i, Slot slot) const {
  const auto& r = receivers_[i];
  if (r.all_decoded()) return true;
  if (!config_.discard_expired || sender_.next_new() < config_.m_packets) return false;
  const auto& k = r.knowledge();
  for (PacketId p = k.oldest_undecoded(); p < config_.m_packets; ++p) {
    if (!k.is_decoded(p) && !sender_.expired(p, slot + 1)) return false;
  }
  return true;
}

bool Simulation::step() {
  if (finished()) return false;
  if (slot_ >= config_.effective_max_slots()) {
    throw HorizonExceeded("run " + std::to_string(run_) + " hit max_slots = " +
                          std::to_string(config_.effective_max_slots()));
  }
  auto bitmap = source_->next();
  if (!bitmap) {
    exhausted_ = true;
    return false;
  }
  const Slot t = ++slot_;
  const std::size_t n = receivers_.size();

  std::vector<std::uint64_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = receivers_[i].received_count();
  const auto leaders_before = leader_set(counts);

  const auto before = views();
  const CodedPacket pkt = sender_.select(t, before);
  const bool idle = pkt.empty();

  SlotRecord rec;
  rec.slot = t;
  rec.sent = pkt;
  rec.reception = *bitmap;
  rec.newly_seen.resize(n);
  rec.newly_decoded.resize(n);
  std::size_t receptions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (idle || !(*bitmap)[i]) continue;
    ++receptions;
    const bool was_done = receivers_[i].all_decoded();
    DeliveryReport report = receivers_[i].deliver(pkt, t, sender_.first_tx());
    if (!report.innovative) {
      ++non_innovative_;
      if (check_innovation_ && !was_done) ++innovation_violations_;
    }
    rec.newly_seen[i] = std::move(report.newly_seen);
    for (const auto& d : report.newly_decoded) rec.newly_decoded[i].push_back(d.packet);
  }

  const PacketId transmitted = sender_.next_new();
  auto expired = [&](PacketId p) { return sender_.expired(p, t + 1); };
  for (std::size_t i = 0; i < n; ++i) {
    const bool erased = !idle && !(*bitmap)[i];
    const bool others = !idle && receptions > 0;
    receivers_[i].chains().end_slot(t, erased, others, receivers_[i].knowledge(), transmitted, expired);
  }

  if (feedback_) {
    feedback_->submit(t, pkt, *bitmap, receivers_);
    if (auto processed = feedback_->process(t)) sender_.observe(feedback_->views(), processed->outcomes);
  } else {
    std::vector<BelievedOutcome> outcomes(n);
    for (std::size_t i = 0; i < n; ++i) outcomes[i] = {true, (*bitmap)[i]};
    sender_.observe(views(), outcomes);
  }
  sender_.queue_update(t, views());

  if (config_.feedback.is_perfect() && !idle) {
    for (std::size_t i : leaders_before) {
      if ((*bitmap)[i] && receivers_[i].knowledge().decoded_count() != transmitted) ++leader_violations_;
    }
  }

  const std::size_t q = sender_.queue_size();
  queue_sum_ += q;
  queue_max_ = std::max<std::uint64_t>(queue_max_, q);
  queue_trace_.push_back(static_cast<std::uint32_t>(q));

  for (std::size_t i = 0; i < n; ++i) counts[i] = receivers_[i].received_count();
  rec.queue_size = q;
  rec.leaders = leader_set(counts);
  if (record_trace_) trace_.push_back(rec);
  last_ = std::move(rec);

  done_ = true;
  for (std::size_t i = 0; i < n && done_; ++i) done_ = receiver_done(i, t);
  return true;
}

RunResult Simulation::run() {
  while (step()) {
  }
  return result();
}

RunResult Simulation::result() const {
  RunResult out;
  out.run = run_;
  out.slots = slot_;
  out.completed = done_;
  out.queue_sum = queue_sum_;
  out.queue_max = queue_max_;
  out.queue_trace = queue_trace_;
  out.non_innovative = non_innovative_;
  out.innovation_violations = innovation_violations_;
  out.leader_violations = leader_violations_;
  out.receivers.resize(receivers_.size());
  const auto& first_tx = sender_.first_tx();
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    auto& st = out.receivers[i];
    const auto& decode = receivers_[i].decode_slots();
    for (PacketId p = 0; p < config_.m_packets; ++p) {
      const Slot d = decode[p];
      const bool on_time = d != kNever && !(config_.discard_expired && sender_.expired(p, d));
      if (!on_time) {
        ++st.lost;
        if (config_.keep_records) out.records.push_back(PacketRecord{static_cast<std::uint32_t>(i), p, first_tx[p], kNever, 0});
        continue;
      }
      const Slot delay = d - first_tx[p];
      ++st.delivered;
      st.delay_sum += delay;
      st.delay_max = std::max(st.delay_max, delay);
      st.last_decode = std::max(st.last_decode, d);
      if (delay >= out.delay_histogram.size()) out.delay_histogram.resize(delay + 1, 0);
      ++out.delay_histogram[delay];
      if (config_.keep_records) out.records.push_back(PacketRecord{static_cast<std::uint32_t>(i), p, first_tx[p], d, delay});
    }
    st.throughput = st.last_decode ? static_cast<double>(st.delivered) / static_cast<double>(st.last_decode) : 0.0;
    st.throughput_global = slot_ ? static_cast<double>(st.delivered) / static_cast<double>(slot_) : 0.0;
    out.chains.push_back(receivers_[i].chains().records());
  }
  return out;
}

RunResult run_sim(const SimConfig& config, std::uint64_t run, const std::optional<std::vector<ReceptionBitmap>>& pattern) {
  std::unique_ptr<BitmapSource> source;
  if (pattern) source = std::make_unique<ReplayChannel>(*pattern, config.n_receivers);
  Simulation sim(config, run, std::move(source));
  return sim.run();
}

BatchResult run_batch(const SimConfig& config, unsigned threads) {
  config.validate();
  const std::uint64_t runs = config.runs;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, runs));

  std::vector<RunResult> results(runs);
  std::vector<std::exception_ptr> errors(runs);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t r = w; r < runs; r += threads) {
          try {
            results[r] = run_sim(config, r);
          } catch (...) {
            errors[r] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BatchAggregator agg;
  for (const auto& r : results) agg.add(r);
  return BatchResult{agg.finalize(), std::move(results)};
}

std::vector<SlotRecord> golden_trace(Algorithm algorithm, const std::vector<ReceptionBitmap>& pattern, int field_bits,
                                     bool deferral, std::size_t m_packets) {
  if (pattern.empty()) return {};
  SimConfig config;
  config.n_receivers = pattern.front().size();
  config.epsilons.assign(config.n_receivers, 0.0);
  config.m_packets = m_packets ? m_packets : pattern.size();
  config.algorithm = algorithm;
  if (uses_threshold(algorithm)) throw std::invalid_argument("golden traces cover anc and snc only");
  config.field_bits = field_bits;
  config.deferral = deferral;
  config.max_slots = pattern.size() + 1;
  Simulation sim(config, 0, std::make_unique<ReplayChannel>(pattern, config.n_receivers), true);
  while (sim.step()) {
  }
  return sim.trace();
}

}  // namespace onc
