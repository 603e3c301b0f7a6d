#include "onc/sender.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "onc/errors.hpp"

namespace onc {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAnc: return "anc";
    case Algorithm::kSnc: return "snc";
    case Algorithm::kAnct: return "anct";
    case Algorithm::kSnct: return "snct";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "anc") return Algorithm::kAnc;
  if (lower == "snc") return Algorithm::kSnc;
  if (lower == "anct") return Algorithm::kAnct;
  if (lower == "snct") return Algorithm::kSnct;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

Algorithm resolve_algorithm(std::string_view name, std::optional<std::uint32_t> threshold) {
  const Algorithm a = parse_algorithm(name);
  if (threshold) {
    if (*threshold < 1) throw std::invalid_argument("threshold must be >= 1");
    if (a == Algorithm::kAnc) return Algorithm::kAnct;
    if (a == Algorithm::kSnc) return Algorithm::kSnct;
    return a;
  }
  if (uses_threshold(a)) throw std::invalid_argument(to_string(a) + " requires a threshold");
  return a;
}

bool uses_threshold(Algorithm a) noexcept { return a == Algorithm::kAnct || a == Algorithm::kSnct; }
bool is_systematic(Algorithm a) noexcept { return a == Algorithm::kSnc || a == Algorithm::kSnct; }

std::vector<std::size_t> leader_set(std::span<const std::uint64_t> received_counts) {
  std::vector<std::size_t> out;
  if (received_counts.empty()) return out;
  const auto best = *std::max_element(received_counts.begin(), received_counts.end());
  for (std::size_t i = 0; i < received_counts.size(); ++i) {
    if (received_counts[i] == best) out.push_back(i);
  }
  return out;
}

PacketId requested_packet(const KnowledgeMatrix& knowledge, bool deferral, PacketId next_new, PacketId first_live) {
  if (deferral) {
    if (first_live == 0) {
      if (auto p = knowledge.oldest_unseen_in_rows()) return *p;
    } else {
      for (PacketId p : knowledge.unseen_in_rows()) {
        if (p >= first_live) return p;
      }
    }
  }
  PacketId p = std::max(knowledge.oldest_unseen(), first_live);
  while (p < next_new && knowledge.is_seen(p)) ++p;
  return std::min(p, next_new);
}

std::vector<Symbol> choose_coefficients(std::span<const PacketId> support,
                                        std::span<const KnowledgeMatrix* const> targets,
                                        const GaloisField& field, Rng& rng) {
  if (support.empty()) throw std::invalid_argument("empty support");
  std::vector<Symbol> coeffs(support.size(), 1);
  if (support.size() == 1) return coeffs;

  CodedPacket probe;
  probe.terms.resize(support.size());
  auto accepted = [&] {
    for (std::size_t i = 0; i < support.size(); ++i) probe.terms[i] = Term{support[i], coeffs[i]};
    return std::all_of(targets.begin(), targets.end(), [&](const KnowledgeMatrix* m) { return m->is_innovative(probe); });
  };

  if (field.bits() == 1) {
    if (accepted()) return coeffs;
    throw SearchExhausted("no innovative combination over GF(2) for this support");
  }

  const std::uint64_t nonzero = field.order() - 1;
  for (int draw = 0; draw < SenderState::kRandomDraws; ++draw) {
    for (auto& c : coeffs) c = static_cast<Symbol>(1 + uniform_below(rng, nonzero));
    if (accepted()) return coeffs;
  }

  // Innovation is invariant under scaling, so the leading coefficient stays 1.
  std::fill(coeffs.begin(), coeffs.end(), Symbol{1});
  for (std::size_t tried = 0; tried < SenderState::kSweepBudget; ++tried) {
    if (accepted()) return coeffs;
    std::size_t i = coeffs.size() - 1;
    while (i > 0 && coeffs[i] == field.max_symbol()) coeffs[i--] = 1;
    if (i == 0) break;
    ++coeffs[i];
  }
  throw SearchExhausted("coefficient search exhausted; field GF(2^" + std::to_string(field.bits()) +
                        ") too small for " + std::to_string(targets.size()) + " receivers");
}

SenderState::SenderState(SenderConfig config, const GaloisField& field, Rng rng)
    : config_(std::move(config)), field_(&field), rng_(std::move(rng)), first_tx_(config_.total_packets, kNever) {
  if (config_.total_packets == 0) throw std::invalid_argument("total_packets must be >= 1");
  if (uses_threshold(config_.algorithm) && !config_.threshold) {
    throw std::invalid_argument("threshold algorithms need a threshold");
  }
}

Slot SenderState::deadline(PacketId p) const {
  if (first_tx_[p] == kNever || !config_.threshold) return kNever;
  return first_tx_[p] + *config_.threshold;
}

bool SenderState::expired(PacketId p, Slot slot) const {
  if (!config_.discard_expired || !config_.threshold || p >= next_new_) return false;
  return slot > first_tx_[p] + *config_.threshold;
}

PacketId SenderState::first_live(Slot slot) const {
  if (!config_.discard_expired || !config_.threshold) return 0;
  // First transmissions are nondecreasing in packet index.
  auto it = std::partition_point(first_tx_.begin(), first_tx_.begin() + next_new_,
                                 [&](Slot s) { return slot > s + *config_.threshold; });
  return static_cast<PacketId>(it - first_tx_.begin());
}

CodedPacket SenderState::combine(std::vector<PacketId> support, std::span<const ReceiverView> views, bool deferral,
                                 PacketId live) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<const KnowledgeMatrix*> targets;
  for (const auto& v : views) {
    if (v.excluded) continue;
    const PacketId r = requested_packet(*v.belief, deferral, next_new_, live);
    if (std::binary_search(support.begin(), support.end(), r)) targets.push_back(v.belief);
  }
  const auto coeffs = choose_coefficients(support, targets, *field_, rng_);
  CodedPacket pkt;
  pkt.terms.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) pkt.terms.push_back(Term{support[i], coeffs[i]});
  return pkt;
}

CodedPacket SenderState::anc_select(std::span<const ReceiverView> views, bool deferral, Slot slot) {
  const PacketId live = first_live(slot);
  std::vector<PacketId> support;
  for (const auto& v : views) {
    if (v.excluded) continue;
    const PacketId r = requested_packet(*v.belief, deferral, next_new_, live);
    if (r < config_.total_packets) support.push_back(r);
  }
  if (support.empty()) return {};
  return combine(std::move(support), views, deferral, live);
}

CodedPacket SenderState::snc_select(std::span<const ReceiverView> views, Slot slot) {
  if (repair_pending_) {
    repair_pending_ = false;
    const PacketId live = first_live(slot);
    std::vector<PacketId> support;
    for (const auto& v : views) {
      if (v.excluded) continue;
      const PacketId r = requested_packet(*v.belief, false, next_new_, live);
      if (r < next_new_) support.push_back(r);
    }
    if (!support.empty()) return combine(std::move(support), views, false, live);
  }
  if (next_new_ < config_.total_packets) return CodedPacket::uncoded(next_new_);
  return anc_select(views, false, slot);
}

bool SenderState::in_danger(std::span<const ReceiverView> views, PacketId p, Slot slot) const {
  if (p >= next_new_) return false;
  if (slot + config_.danger_margin < first_tx_[p] + *config_.threshold) return false;
  if (config_.discard_expired && slot > deadline(p)) return false;
  return std::any_of(views.begin(), views.end(),
                     [&](const ReceiverView& v) { return !v.excluded && !v.belief->is_decoded(p); });
}

std::optional<CodedPacket> SenderState::threshold_wrap(std::span<const ReceiverView> views, Slot slot) {
  if (urgent_ && in_danger(views, *urgent_, slot)) return CodedPacket::uncoded(*urgent_);
  urgent_.reset();

  const Slot reach = slot + config_.danger_margin;
  const PacketId live = first_live(slot);
  std::vector<PacketId> danger;
  for (const auto& v : views) {
    if (v.excluded) continue;
    for (PacketId p = std::max(v.belief->oldest_undecoded(), live);
         p < next_new_ && reach >= first_tx_[p] + *config_.threshold; ++p) {
      if (!v.belief->is_decoded(p)) danger.push_back(p);
    }
  }
  if (danger.empty()) return std::nullopt;
  std::sort(danger.begin(), danger.end());
  danger.erase(std::unique(danger.begin(), danger.end()), danger.end());
  urgent_ = danger[uniform_below(rng_, danger.size())];
  return CodedPacket::uncoded(*urgent_);
}

CodedPacket SenderState::select(Slot slot, std::span<const ReceiverView> views) {
  CodedPacket pkt;
  std::optional<CodedPacket> urgent;
  if (uses_threshold(config_.algorithm)) urgent = threshold_wrap(views, slot);
  if (urgent) {
    pkt = std::move(*urgent);
  } else if (is_systematic(config_.algorithm)) {
    pkt = snc_select(views, slot);
  } else {
    pkt = anc_select(views, config_.deferral, slot);
  }
  mark_sent(pkt, slot);
  return pkt;
}

void SenderState::mark_sent(const CodedPacket& pkt, Slot slot) {
  for (const auto& t : pkt.terms) {
    if (t.packet == next_new_) {
      first_tx_[t.packet] = slot;
      queue_.push_back(t.packet);
      ++next_new_;
    }
  }
}

void SenderState::observe(std::span<const ReceiverView> views, std::span<const BelievedOutcome> outcomes) {
  if (!is_systematic(config_.algorithm)) return;
  std::vector<std::uint64_t> counts;
  counts.reserve(views.size());
  for (const auto& v : views) counts.push_back(v.received_count);
  for (std::size_t i : leader_set(counts)) {
    const auto& v = views[i];
    if (v.excluded || !outcomes[i].known || outcomes[i].received) continue;
    if (v.belief->rank() < next_new_) {
      repair_pending_ = true;
      return;
    }
  }
}

std::vector<PacketId> SenderState::queue_update(Slot slot, std::span<const ReceiverView> views) {
  const bool by_seen = config_.algorithm == Algorithm::kAnc;
  std::vector<PacketId> dropped;
  std::erase_if(queue_, [&](PacketId p) {
    const bool gone = expired(p, slot) || std::all_of(views.begin(), views.end(), [&](const ReceiverView& v) {
                        return by_seen ? v.confirmed->is_seen(p) : v.confirmed->is_decoded(p);
                      });
    if (gone) dropped.push_back(p);
    return gone;
  });
  return dropped;
}

}  // namespace onc
