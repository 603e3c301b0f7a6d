#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "onc/channel.hpp"
#include "onc/knowledge_matrix.hpp"
#include "onc/random.hpp"
#include "onc/receiver.hpp"
#include "onc/sender.hpp"

namespace onc {

enum class FeedbackKind { kPerfect, kLossy };
enum class LostReportPolicy { kOptimistic, kPessimistic, kRandom, kIgnore };

std::string to_string(FeedbackKind k);
std::string to_string(LostReportPolicy p);
FeedbackKind parse_feedback_kind(std::string_view s);
LostReportPolicy parse_policy(std::string_view s);

struct FeedbackModel {
  FeedbackKind kind = FeedbackKind::kPerfect;
  double fb_loss = 0.0;
  std::uint32_t fb_delay = 0;
  LostReportPolicy policy = LostReportPolicy::kOptimistic;
  double random_q = 0.5;  // probability of assuming "received" under kRandom

  void validate() const;
  bool is_perfect() const noexcept { return kind == FeedbackKind::kPerfect; }
};

/// Sender-side reconstruction of receiver state from per-slot reports.
///
/// Each receiver reports after every slot with a cumulative snapshot of its
/// knowledge. A report is lost with probability fb_loss, otherwise it is
/// processed fb_delay slots later and resets both belief and confirmed state
/// to the snapshot. A lost report is noticed at the same moment and handled
/// by the policy. Reports still in flight carry no assumption.
class FeedbackChannel {
 public:
  FeedbackChannel(FeedbackModel model, std::size_t receivers, const GaloisField& field, Rng rng);

  /// Queues the reports generated at the end of `slot`.
  void submit(Slot slot, const CodedPacket& sent, const ReceptionBitmap& reception,
              const std::vector<ReceiverState>& truth);

  struct Processed {
    Slot slot = 0;  // generation slot of the processed reports
    std::vector<BelievedOutcome> outcomes;
  };

  /// Processes reports due at `now`; nullopt when none are due.
  std::optional<Processed> process(Slot now);

  std::vector<ReceiverView> views() const;

  const KnowledgeMatrix& belief(std::size_t i) const { return beliefs_[i]; }
  const KnowledgeMatrix& confirmed(std::size_t i) const { return confirmed_[i]; }
  std::uint64_t believed_count(std::size_t i) const { return believed_count_[i]; }
  bool excluded(std::size_t i) const { return excluded_[i] != 0; }
  const FeedbackModel& model() const noexcept { return model_; }

 private:
  struct Report {
    std::optional<KnowledgeMatrix> snapshot;  // nullopt when lost
    std::uint64_t received_count = 0;
    bool received = false;
  };
  struct Batch {
    Slot slot;
    CodedPacket sent;
    std::vector<Report> reports;
  };

  FeedbackModel model_;
  Rng rng_;
  std::vector<KnowledgeMatrix> beliefs_;
  std::vector<KnowledgeMatrix> confirmed_;
  std::vector<std::uint64_t> believed_count_;
  std::vector<std::uint8_t> excluded_;
  std::deque<Batch> in_flight_;
};

}  // namespace onc
