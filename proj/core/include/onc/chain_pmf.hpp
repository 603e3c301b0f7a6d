#pragma once

#include <cstdint>
#include <vector>

#include "onc/random.hpp"

namespace onc {

/// Distribution over nonnegative integers truncated at mass.size() - 1;
/// `tail` holds the probability of every larger value.
struct DiscreteDistribution {
  std::vector<double> mass;  // mass[v] = P(value == v)
  double tail = 0.0;

  double total() const;
  double mean() const;  // mean of the truncated part, ignoring the tail
};

/// How the event-pair sum is weighted.
enum class ChainPmfTerms {
  /// Every arrangement of the both-lost slots and of the lossy blocks is
  /// counted; this is the distribution of the chain-breaking process.
  kCounted,
  /// One ordering per combination of event counts, i.e. unit multiplicities.
  /// Does not normalize; kept for comparison.
  kSingleOrdering,
};

/// Chain-duration law at the receiver whose erasure opened the chain.
/// mass[T] for T = 1..t_max (mass[0] = 0).
struct ChainDurationPmf {
  double eps1 = 0.0;
  double eps2 = 0.0;
  std::uint32_t t_max = 0;
  ChainPmfTerms terms = ChainPmfTerms::kCounted;
  DiscreteDistribution dist;

  double at(std::uint32_t t) const { return t < dist.mass.size() ? dist.mass[t] : 0.0; }
  double tail() const noexcept { return dist.tail; }
};

/// Chain at receiver 2 (the one hit by the opening erasure while receiver 1 got the packet).
/// Requires eps1, eps2 in (0, 1) and t_max >= 1; throws std::domain_error otherwise.
ChainDurationPmf chain_duration_pmf(double eps1, double eps2, std::uint32_t t_max,
                                    ChainPmfTerms terms = ChainPmfTerms::kCounted);
/// Chain at receiver 1: roles of the two erasure probabilities swapped.
ChainDurationPmf chain_duration_pmf_r1(double eps1, double eps2, std::uint32_t t_max,
                                       ChainPmfTerms terms = ChainPmfTerms::kCounted);

/// Term-by-term evaluation of the double sum in log space. O(t_max^3); used
/// to cross-check the linear-time recursion behind chain_duration_pmf.
ChainDurationPmf chain_duration_pmf_direct(double eps1, double eps2, std::uint32_t t_max,
                                           ChainPmfTerms terms = ChainPmfTerms::kCounted);

struct EmpiricalPmf {
  std::vector<std::uint64_t> counts;  // counts[T]
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;         // trials still unbroken at the slot cap

  double probability(std::uint32_t t) const;
};

/// Monte Carlo oracle: simulates the two-receiver event process from the
/// opening erasure until the chain breaks. T counts the slots up to and
/// including the one whose erasure pattern arms the break. eps2 == 0 returns
/// an empty histogram; eps1 == 0 is a std::domain_error (chains never break).
EmpiricalPmf mc_chain_duration(double eps1, double eps2, std::uint64_t runs, Rng& rng,
                               std::uint64_t slot_cap = 1'000'000);

struct PmfAgreement {
  std::size_t bins_checked = 0;  // bins with expected count >= min_expected
  std::size_t violations = 0;    // bins whose count is more than `sigmas` binomial sds off
  double max_abs_z = 0.0;

  double violation_fraction() const { return bins_checked ? double(violations) / double(bins_checked) : 0.0; }
};

/// Per-bin binomial comparison of an empirical histogram against an analytic law.
PmfAgreement compare_pmf(const DiscreteDistribution& analytic, const EmpiricalPmf& empirical,
                         double min_expected = 25.0, double sigmas = 3.0);

/// Law of the sum of k + 1 independent draws from `dist`, truncated at
/// `max_value` (default: (k + 1) * largest tracked value).
DiscreteDistribution multi_chain_delay(const DiscreteDistribution& dist, std::uint32_t k,
                                       std::size_t max_value = 0);

}  // namespace onc
