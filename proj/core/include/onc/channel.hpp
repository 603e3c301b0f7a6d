#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onc/random.hpp"

namespace onc {

/// Per-slot outcome: received[i] is true when receiver i got the packet (OK), false on erasure (E).
struct ReceptionBitmap {
  std::vector<bool> received;

  std::size_t size() const noexcept { return received.size(); }
  bool operator[](std::size_t i) const { return received[i]; }

  /// "OK,E" style line, one token per receiver.
  std::string to_line() const;

  friend bool operator==(const ReceptionBitmap&, const ReceptionBitmap&) = default;
};

/// N independent erasure channels; one Bernoulli draw per receiver per slot,
/// receiver 0 first.
struct ChannelSet {
  std::vector<double> epsilons;
  std::uint64_t rng_seed = 0;

  void validate() const;  // each epsilon in [0, 1)
};

/// Probability of observing `bitmap` in one slot: product of eps_i (E) or 1 - eps_i (OK).
/// Throws std::invalid_argument on length mismatch.
double event_probability(const ReceptionBitmap& bitmap, const std::vector<double>& epsilons);

/// Draws one slot from `rng`. Deterministic given the generator state.
ReceptionBitmap sample_slot(const ChannelSet& channels, Rng& rng);

/// Supplies one bitmap per slot, either sampled or replayed from a pattern.
class BitmapSource {
 public:
  virtual ~BitmapSource() = default;
  /// Next slot's outcome; std::nullopt once a replayed pattern is exhausted.
  virtual std::optional<ReceptionBitmap> next() = 0;
  virtual std::size_t receivers() const = 0;
};

class SampledChannel final : public BitmapSource {
 public:
  /// Seeds the stream from channels.rng_seed as given (no further derivation).
  explicit SampledChannel(ChannelSet channels);
  std::optional<ReceptionBitmap> next() override;
  std::size_t receivers() const override { return channels_.epsilons.size(); }

 private:
  ChannelSet channels_;
  Rng rng_;
};

class ReplayChannel final : public BitmapSource {
 public:
  ReplayChannel(std::vector<ReceptionBitmap> pattern, std::size_t receivers);
  std::optional<ReceptionBitmap> next() override;
  std::size_t receivers() const override { return receivers_; }

 private:
  std::vector<ReceptionBitmap> pattern_;
  std::size_t receivers_;
  std::size_t cursor_ = 0;
};

/// Parses a pattern file body: one line per slot, comma-separated OK/E tokens.
/// Blank lines and lines starting with '#' are skipped. Every slot line must
/// have the same number of tokens (and `expected_receivers` of them, if given).
/// Throws PatternParseError with the offending line number.
std::vector<ReceptionBitmap> parse_pattern(std::string_view text,
                                           std::optional<std::size_t> expected_receivers = std::nullopt);
std::vector<ReceptionBitmap> read_pattern_file(const std::string& path,
                                               std::optional<std::size_t> expected_receivers = std::nullopt);

}  // namespace onc
