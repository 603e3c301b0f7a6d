#pragma once

#include <cstdint>
#include <vector>

#include "onc/channel.hpp"

namespace onc {

/// x[k] = (packets received by receiver 1) - (packets received by receiver k + 2).
struct WalkState {
  std::vector<std::int64_t> x;

  static WalkState origin(std::size_t receivers) { return WalkState{std::vector<std::int64_t>(receivers - 1, 0)}; }
  /// Receiver 1 is a leader exactly when no coordinate is negative.
  bool is_leader() const noexcept;

  friend bool operator==(const WalkState&, const WalkState&) = default;
};

/// One slot of the walk. Throws std::invalid_argument when bitmap.size() != x.size() + 1.
WalkState rw_step(const WalkState& state, const ReceptionBitmap& bitmap);

struct DelayBoundCdf {
  std::vector<double> cdf;            // cdf[d] = fraction of samples with bound <= d, d = 0..horizon
  std::uint64_t samples = 0;
  std::uint64_t censored_samples = 0; // samples from excursions still open at the horizon
  std::uint64_t runs = 0;
  std::uint64_t horizon = 0;
  std::vector<double> epsilons;
};

/// Per-slot delay bounds for receiver 1: 0 for slots where it receives while
/// leading, t2 - t1 for every slot of a non-leader excursion [t1, t2], and
/// horizon - t1 for an excursion still open when the run ends. Run r uses the
/// analysis stream derived from (seed, r); `threads` = 0 picks the hardware count.
DelayBoundCdf rw_delay_bound_cdf(const std::vector<double>& epsilons, std::uint64_t slots, std::uint64_t runs,
                                 std::uint64_t seed, unsigned threads = 0);

}  // namespace onc
