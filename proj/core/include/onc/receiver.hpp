#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "onc/knowledge_matrix.hpp"

namespace onc {

/// Slots are numbered from 1; 0 means "never".
using Slot = std::uint64_t;
inline constexpr Slot kNever = 0;

struct DecodeEvent {
  PacketId packet;
  Slot slot;
  Slot delay;  // slot - first transmission slot
};

struct DeliveryReport {
  bool innovative = false;
  std::vector<PacketId> newly_seen;
  std::vector<DecodeEvent> newly_decoded;
};

struct ChainRecord {
  Slot start = 0;        // first slot counted in the chain
  Slot break_slot = 0;   // slot whose reception solved the chain
  Slot duration = 0;     // break_slot - start
  std::size_t size = 0;  // peak number of undecoded rows while the chain was open
};

/// Follows one receiver's chains. Every erasure suffered while some other
/// receiver got the packet leaves a mark; once the previous chain is solved,
/// the oldest mark opens the next chain, which lasts until the receiver's
/// oldest unseen packet at that moment is decoded.
class ChainTracker {
 public:
  /// Call once per slot after delivery. `transmitted` is the number of
  /// distinct packets sent so far; `expired(p)` reports whether p can no
  /// longer be delivered (always false unless deadlines discard packets).
  void end_slot(Slot slot, bool erased, bool others_received, const KnowledgeMatrix& knowledge,
                PacketId transmitted, const std::function<bool(PacketId)>& expired);

  const std::vector<ChainRecord>& records() const noexcept { return records_; }
  bool active() const noexcept { return target_.has_value(); }
  std::size_t pending_marks() const noexcept { return marks_.size(); }

 private:
  std::deque<Slot> marks_;
  std::optional<PacketId> target_;
  Slot start_ = 0;
  Slot last_break_ = 0;
  std::size_t peak_rows_ = 0;
  std::vector<ChainRecord> records_;
};

/// True state of one receiver.
class ReceiverState {
 public:
  ReceiverState(const GaloisField& field, std::size_t total_packets);

  /// Applies a received (not erased) packet. `first_tx` maps packet -> slot
  /// of its first transmission.
  DeliveryReport deliver(const CodedPacket& pkt, Slot slot, const std::vector<Slot>& first_tx);

  const KnowledgeMatrix& knowledge() const noexcept { return knowledge_; }
  std::uint64_t received_count() const noexcept { return received_count_; }
  Slot decode_slot(PacketId p) const { return decode_slot_[p]; }
  const std::vector<Slot>& decode_slots() const noexcept { return decode_slot_; }
  bool all_decoded() const noexcept { return knowledge_.decoded_count() == decode_slot_.size(); }

  ChainTracker& chains() noexcept { return chains_; }
  const ChainTracker& chains() const noexcept { return chains_; }

 private:
  KnowledgeMatrix knowledge_;
  std::uint64_t received_count_ = 0;
  std::vector<Slot> decode_slot_;
  ChainTracker chains_;
};

/// Chain (duration, size) pairs recorded so far.
std::vector<std::pair<Slot, std::size_t>> chain_lengths(const ReceiverState& receiver);

}  // namespace onc
