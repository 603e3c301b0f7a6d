#include "onc/random_walk.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "onc/random.hpp"

namespace onc {

bool WalkState::is_leader() const noexcept {
  return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v >= 0; });
}

WalkState rw_step(const WalkState& state, const ReceptionBitmap& bitmap) {
  if (bitmap.size() != state.x.size() + 1) throw std::invalid_argument("walk dimension does not match bitmap");
  WalkState out = state;
  const bool tagged = bitmap[0];
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    const bool other = bitmap[k + 1];
    if (tagged && !other) ++out.x[k];
    if (!tagged && other) --out.x[k];
  }
  return out;
}

namespace {

// Histogram of bounds (index = bound, clipped to horizon) for one run.
void walk_run(const ChannelSet& channels, std::uint64_t slots, std::uint64_t seed, std::uint64_t run,
              std::vector<std::uint64_t>& hist, std::uint64_t& censored) {
  Rng rng = make_rng(seed, run, Stream::kAnalysis);
  WalkState walk = WalkState::origin(channels.epsilons.size());
  std::uint64_t excursion_start = 0;
  bool outside = false;
  for (std::uint64_t t = 1; t <= slots; ++t) {
    const ReceptionBitmap bm = sample_slot(channels, rng);
    walk = rw_step(walk, bm);
    if (walk.is_leader()) {
      if (outside) {
        hist[t - 1 - excursion_start] += t - excursion_start;  // slots t1..t-1, bound (t-1) - t1
        outside = false;
      }
      if (bm[0]) ++hist[0];
    } else if (!outside) {
      outside = true;
      excursion_start = t;
    }
  }
  if (outside) {
    const std::uint64_t count = slots - excursion_start + 1;
    hist[slots - excursion_start] += count;
    censored += count;
  }
}

}  // namespace

DelayBoundCdf rw_delay_bound_cdf(const std::vector<double>& epsilons, std::uint64_t slots, std::uint64_t runs,
                                 std::uint64_t seed, unsigned threads) {
  if (epsilons.size() < 2) throw std::invalid_argument("the walk needs at least two receivers");
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  ChannelSet channels{epsilons, seed};
  channels.validate();

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(runs, 1)));
  std::vector<std::vector<std::uint64_t>> hists(threads, std::vector<std::uint64_t>(slots + 1, 0));
  std::vector<std::uint64_t> censored(threads, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t run = w; run < runs; run += threads) walk_run(channels, slots, seed, run, hists[w], censored[w]);
      });
    }
  }

  DelayBoundCdf out;
  out.runs = runs;
  out.horizon = slots;
  out.epsilons = epsilons;
  std::vector<std::uint64_t> hist(slots + 1, 0);
  for (unsigned w = 0; w < threads; ++w) {
    for (std::size_t d = 0; d <= slots; ++d) hist[d] += hists[w][d];
    out.censored_samples += censored[w];
  }
  for (auto c : hist) out.samples += c;
  out.cdf.resize(slots + 1, 0.0);
  std::uint64_t running = 0;
  for (std::size_t d = 0; d <= slots; ++d) {
    running += hist[d];
    out.cdf[d] = out.samples ? static_cast<double>(running) / static_cast<double>(out.samples) : 1.0;
  }
  return out;
}

}  // namespace onc
