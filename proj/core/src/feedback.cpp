#include "onc/feedback.hpp"

#include <stdexcept>

namespace onc {

std::string to_string(FeedbackKind k) { return k == FeedbackKind::kPerfect ? "perfect" : "lossy"; }

std::string to_string(LostReportPolicy p) {
  switch (p) {
    case LostReportPolicy::kOptimistic: return "optimistic";
    case LostReportPolicy::kPessimistic: return "pessimistic";
    case LostReportPolicy::kRandom: return "random";
    case LostReportPolicy::kIgnore: return "ignore";
  }
  return "?";
}

FeedbackKind parse_feedback_kind(std::string_view s) {
  if (s == "perfect") return FeedbackKind::kPerfect;
  if (s == "lossy") return FeedbackKind::kLossy;
  throw std::invalid_argument("unknown feedback kind '" + std::string(s) + "'");
}

LostReportPolicy parse_policy(std::string_view s) {
  if (s == "optimistic") return LostReportPolicy::kOptimistic;
  if (s == "pessimistic") return LostReportPolicy::kPessimistic;
  if (s == "random") return LostReportPolicy::kRandom;
  if (s == "ignore") return LostReportPolicy::kIgnore;
  throw std::invalid_argument("unknown feedback policy '" + std::string(s) + "'");
}

void FeedbackModel::validate() const {
  if (!(fb_loss >= 0.0 && fb_loss <= 1.0)) throw std::invalid_argument("fb_loss must lie in [0, 1]");
  if (!(random_q >= 0.0 && random_q <= 1.0)) throw std::invalid_argument("random_q must lie in [0, 1]");
  if (kind == FeedbackKind::kPerfect && (fb_loss != 0.0 || fb_delay != 0)) {
    throw std::invalid_argument("perfect feedback requires fb_loss = 0 and fb_delay = 0");
  }
}

FeedbackChannel::FeedbackChannel(FeedbackModel model, std::size_t receivers, const GaloisField& field, Rng rng)
    : model_(model),
      rng_(std::move(rng)),
      beliefs_(receivers, KnowledgeMatrix(field)),
      confirmed_(receivers, KnowledgeMatrix(field)),
      believed_count_(receivers, 0),
      excluded_(receivers, 0) {
  model_.validate();
}

void FeedbackChannel::submit(Slot slot, const CodedPacket& sent, const ReceptionBitmap& reception,
                             const std::vector<ReceiverState>& truth) {
  Batch batch{slot, sent, {}};
  batch.reports.resize(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& r = batch.reports[i];
    r.received = reception[i];
    r.received_count = truth[i].received_count();
    if (!bernoulli(rng_, model_.fb_loss)) r.snapshot = truth[i].knowledge();
  }
  in_flight_.push_back(std::move(batch));
}

std::optional<FeedbackChannel::Processed> FeedbackChannel::process(Slot now) {
  if (in_flight_.empty() || in_flight_.front().slot + model_.fb_delay > now) return std::nullopt;
  Batch batch = std::move(in_flight_.front());
  in_flight_.pop_front();

  Processed out{batch.slot, std::vector<BelievedOutcome>(batch.reports.size())};
  for (std::size_t i = 0; i < batch.reports.size(); ++i) {
    auto& r = batch.reports[i];
    auto& outcome = out.outcomes[i];
    if (r.snapshot) {
      beliefs_[i] = *r.snapshot;
      confirmed_[i] = std::move(*r.snapshot);
      believed_count_[i] = r.received_count;
      excluded_[i] = 0;
      outcome = {true, r.received};
      continue;
    }
    bool assume_received = false;
    switch (model_.policy) {
      case LostReportPolicy::kOptimistic: assume_received = true; break;
      case LostReportPolicy::kPessimistic: break;
      case LostReportPolicy::kRandom: assume_received = bernoulli(rng_, model_.random_q); break;
      case LostReportPolicy::kIgnore:
        excluded_[i] = 1;
        outcome = {false, false};
        continue;
    }
    if (assume_received && !batch.sent.empty()) {
      beliefs_[i].insert(batch.sent);
      ++believed_count_[i];
    }
    outcome = {true, assume_received};
  }
  return out;
}

std::vector<ReceiverView> FeedbackChannel::views() const {
  std::vector<ReceiverView> out(beliefs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ReceiverView{&beliefs_[i], &confirmed_[i], believed_count_[i], excluded_[i] != 0};
  }
  return out;
}

}  // namespace onc
