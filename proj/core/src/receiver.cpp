#include "onc/receiver.hpp"

#include <algorithm>
#include <stdexcept>

namespace onc {

void ChainTracker::end_slot(Slot slot, bool erased, bool others_received, const KnowledgeMatrix& knowledge,
                            PacketId transmitted, const std::function<bool(PacketId)>& expired) {
  if (erased && others_received) marks_.push_back(slot);

  if (target_) {
    peak_rows_ = std::max(peak_rows_, knowledge.undecoded_row_count());
    if (slot >= start_ && (knowledge.is_decoded(*target_) || expired(*target_))) {
      records_.push_back(ChainRecord{start_, slot, slot - start_, peak_rows_});
      target_.reset();
      last_break_ = slot;
    }
  }
  if (target_) return;

  if (knowledge.rank() == transmitted) {
    marks_.clear();
    return;
  }
  if (marks_.empty()) return;
  const Slot mark = marks_.front();
  marks_.pop_front();
  start_ = std::max(mark + 1, last_break_ + 1);
  target_ = knowledge.oldest_unseen();
  peak_rows_ = knowledge.undecoded_row_count();
}

ReceiverState::ReceiverState(const GaloisField& field, std::size_t total_packets)
    : knowledge_(field), decode_slot_(total_packets, kNever) {}

DeliveryReport ReceiverState::deliver(const CodedPacket& pkt, Slot slot, const std::vector<Slot>& first_tx) {
  ++received_count_;
  InsertOutcome outcome = knowledge_.insert(pkt);
  DeliveryReport report;
  report.innovative = outcome.innovative;
  report.newly_seen = std::move(outcome.newly_seen);
  report.newly_decoded.reserve(outcome.newly_decoded.size());
  for (PacketId p : outcome.newly_decoded) {
    if (p >= decode_slot_.size()) throw std::out_of_range("decoded packet outside the session");
    decode_slot_[p] = slot;
    report.newly_decoded.push_back(DecodeEvent{p, slot, slot - first_tx[p]});
  }
  return report;
}

std::vector<std::pair<Slot, std::size_t>> chain_lengths(const ReceiverState& receiver) {
  std::vector<std::pair<Slot, std::size_t>> out;
  for (const auto& r : receiver.chains().records()) out.emplace_back(r.duration, r.size);
  return out;
}

}  // namespace onc
