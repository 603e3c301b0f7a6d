#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onc/knowledge_matrix.hpp"
#include "onc/random.hpp"
#include "onc/receiver.hpp"

namespace onc {

enum class Algorithm { kAnc, kSnc, kAnct, kSnct };

std::string to_string(Algorithm a);
/// Accepts "anc", "snc", "anct", "snct" (case-insensitive). Throws std::invalid_argument.
Algorithm parse_algorithm(std::string_view name);
/// Maps a base name plus optional threshold onto the concrete algorithm:
/// anc/snc with a threshold become anct/snct; anct/snct require one.
Algorithm resolve_algorithm(std::string_view name, std::optional<std::uint32_t> threshold);
bool uses_threshold(Algorithm a) noexcept;
bool is_systematic(Algorithm a) noexcept;

struct SenderConfig {
  Algorithm algorithm = Algorithm::kAnc;
  std::size_t total_packets = 100;
  std::optional<std::uint32_t> threshold;
  std::uint32_t danger_margin = 0;
  bool deferral = true;
  bool discard_expired = false;
};

/// What the sender knows about one receiver.
struct ReceiverView {
  const KnowledgeMatrix* belief = nullptr;     // used for coding decisions
  const KnowledgeMatrix* confirmed = nullptr;  // last acknowledged state, used for queue drops
  std::uint64_t received_count = 0;
  bool excluded = false;                       // ignored until its next report arrives
};

/// Per-receiver believed outcome of one slot, as reconstructed from feedback.
struct BelievedOutcome {
  bool known = true;
  bool received = false;
};

/// Receivers holding the maximal received count.
std::vector<std::size_t> leader_set(std::span<const std::uint64_t> received_counts);

/// Packet a receiver asks for next. Values >= total packets mean "nothing left".
/// `first_live` is the oldest packet that has not expired (0 unless deadlines discard).
PacketId requested_packet(const KnowledgeMatrix& knowledge, bool deferral, PacketId next_new,
                          PacketId first_live = 0);

/// Nonzero coefficients over `support` (ascending) such that the combination is
/// innovative for every matrix in `targets`. Throws SearchExhausted.
std::vector<Symbol> choose_coefficients(std::span<const PacketId> support,
                                        std::span<const KnowledgeMatrix* const> targets,
                                        const GaloisField& field, Rng& rng);

class SenderState {
 public:
  static constexpr int kRandomDraws = 64;
  static constexpr std::size_t kSweepBudget = 65536;

  SenderState(SenderConfig config, const GaloisField& field, Rng rng);

  /// Packet for `slot`; empty when no receiver needs anything. Records first transmissions.
  CodedPacket select(Slot slot, std::span<const ReceiverView> views);

  /// Updates the leader-loss trigger from the believed outcomes of a processed slot.
  void observe(std::span<const ReceiverView> views, std::span<const BelievedOutcome> outcomes);

  /// Drops packets no longer needed by anyone; returns them in ascending order.
  std::vector<PacketId> queue_update(Slot slot, std::span<const ReceiverView> views);

  CodedPacket anc_select(std::span<const ReceiverView> views, bool deferral, Slot slot);
  CodedPacket snc_select(std::span<const ReceiverView> views, Slot slot);
  /// Uncoded send of a packet whose deadline is in danger, if any.
  std::optional<CodedPacket> threshold_wrap(std::span<const ReceiverView> views, Slot slot);

  const SenderConfig& config() const noexcept { return config_; }
  const GaloisField& field() const noexcept { return *field_; }
  PacketId next_new() const noexcept { return next_new_; }
  const std::vector<Slot>& first_tx() const noexcept { return first_tx_; }
  std::size_t queue_size() const noexcept { return queue_.size(); }
  const std::vector<PacketId>& queue() const noexcept { return queue_; }
  bool repair_pending() const noexcept { return repair_pending_; }
  std::optional<PacketId> urgent() const noexcept { return urgent_; }

  /// Deadline bookkeeping shared with the simulator.
  Slot deadline(PacketId p) const;
  bool expired(PacketId p, Slot slot) const;
  /// Oldest packet that has not expired by `slot` (0 unless discard_expired).
  PacketId first_live(Slot slot) const;

 private:
  CodedPacket combine(std::vector<PacketId> support, std::span<const ReceiverView> views, bool deferral,
                      PacketId first_live);
  void mark_sent(const CodedPacket& pkt, Slot slot);
  bool in_danger(std::span<const ReceiverView> views, PacketId p, Slot slot) const;

  SenderConfig config_;
  const GaloisField* field_;
  Rng rng_;
  PacketId next_new_ = 0;
  std::vector<Slot> first_tx_;
  std::vector<PacketId> queue_;
  bool repair_pending_ = false;
  std::optional<PacketId> urgent_;
};

}  // namespace onc
