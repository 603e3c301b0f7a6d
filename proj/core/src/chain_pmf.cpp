#include "onc/chain_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace onc {

namespace {

void check_domain(double eps1, double eps2, std::uint32_t t_max) {
  if (!(eps1 > 0.0 && eps1 < 1.0) || !(eps2 > 0.0 && eps2 < 1.0)) {
    throw std::domain_error("erasure probabilities must lie in (0, 1)");
  }
  if (t_max < 1) throw std::domain_error("t_max must be >= 1");
}

// Joint per-slot event probabilities for the pair (receiver 1, receiver 2).
struct Events {
  double both_ok, r2_lost, r1_lost, both_lost;
  Events(double e1, double e2)
      : both_ok((1 - e1) * (1 - e2)), r2_lost((1 - e1) * e2), r1_lost(e1 * (1 - e2)), both_lost(e1 * e2) {}
};

ChainDurationPmf finish(double eps1, double eps2, std::uint32_t t_max, ChainPmfTerms terms,
                        std::vector<double> mass) {
  ChainDurationPmf out{eps1, eps2, t_max, terms, {}};
  const double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
  out.dist.mass = std::move(mass);
  out.dist.tail = 1.0 - sum;
  return out;
}

}  // namespace

double DiscreteDistribution::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0) + tail; }

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t v = 0; v < mass.size(); ++v) m += static_cast<double>(v) * mass[v];
  return m;
}

ChainDurationPmf chain_duration_pmf(double eps1, double eps2, std::uint32_t t_max, ChainPmfTerms terms) {
  check_domain(eps1, eps2, t_max);
  const Events ev(eps1, eps2);
  const double head = ev.r1_lost * (1 - eps2);
  std::vector<double> mass(t_max + 1, 0.0);

  if (terms == ChainPmfTerms::kCounted) {
    // idle: no pending break; armed: receiver 1 lost a packet receiver 2 got,
    // so receiver 2's next reception solves the chain.
    double idle = 1.0, armed = 0.0;
    for (std::uint32_t t = 1; t <= t_max; ++t) {
      const double next_idle = idle * (1 - ev.r1_lost) + armed * ev.r2_lost;
      const double next_armed = idle * ev.r1_lost + armed * ev.both_lost;
      idle = next_idle;
      armed = next_armed;
      mass[t] = armed * (1 - eps2);
    }
  } else {
    // g(n) = sum over 2a + b = n of pair^a * single^b; h(n) = sum_k both^k g(n - k).
    const double pair = ev.r1_lost * ev.r2_lost;
    const double single = 1 - eps1;
    double g = 1.0, h = 1.0, pair_pow = 1.0;
    mass[1] = head;
    for (std::uint32_t n = 1; n + 1 <= t_max; ++n) {
      double even_term = 0.0;
      if (n % 2 == 0) {
        pair_pow *= pair;
        even_term = pair_pow;
      }
      g = single * g + even_term;
      h = ev.both_lost * h + g;
      mass[n + 1] = head * h;
    }
  }
  return finish(eps1, eps2, t_max, terms, std::move(mass));
}

ChainDurationPmf chain_duration_pmf_r1(double eps1, double eps2, std::uint32_t t_max, ChainPmfTerms terms) {
  auto out = chain_duration_pmf(eps2, eps1, t_max, terms);
  out.eps1 = eps1;
  out.eps2 = eps2;
  return out;
}

ChainDurationPmf chain_duration_pmf_direct(double eps1, double eps2, std::uint32_t t_max, ChainPmfTerms terms) {
  check_domain(eps1, eps2, t_max);
  const Events ev(eps1, eps2);
  const double log_head = std::log(ev.r1_lost * (1 - eps2));
  const double log_both = std::log(ev.both_lost);
  const double log_pair = std::log(ev.r1_lost * ev.r2_lost);
  const double log_single = std::log(1 - eps1);
  const bool counted = terms == ChainPmfTerms::kCounted;
  auto log_choose = [](double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };

  std::vector<double> mass(t_max + 1, 0.0);
  for (std::uint32_t t = 1; t <= t_max; ++t) {
    double sum = 0.0;
    for (std::uint32_t both = 0; both <= t - 1; ++both) {
      const std::uint32_t rest = t - 1 - both;
      for (std::uint32_t pairs = 0; 2 * pairs <= rest; ++pairs) {
        const std::uint32_t singles = rest - 2 * pairs;
        double log_term = both * log_both + pairs * log_pair + singles * log_single;
        if (counted) log_term += log_choose(t, both) + log_choose(pairs + singles, pairs);
        sum += std::exp(log_term);
      }
    }
    mass[t] = std::exp(log_head) * sum;
  }
  return finish(eps1, eps2, t_max, terms, std::move(mass));
}

double EmpiricalPmf::probability(std::uint32_t t) const {
  if (trials == 0 || t >= counts.size()) return 0.0;
  return static_cast<double>(counts[t]) / static_cast<double>(trials);
}

EmpiricalPmf mc_chain_duration(double eps1, double eps2, std::uint64_t runs, Rng& rng, std::uint64_t slot_cap) {
  if (!(eps1 >= 0.0 && eps1 < 1.0) || !(eps2 >= 0.0 && eps2 < 1.0)) {
    throw std::domain_error("erasure probabilities must lie in [0, 1)");
  }
  EmpiricalPmf out;
  if (eps2 == 0.0) return out;
  if (eps1 == 0.0) throw std::domain_error("eps1 = 0: chains at receiver 2 never break");

  for (std::uint64_t run = 0; run < runs; ++run) {
    bool armed = false;
    bool broken = false;
    for (std::uint64_t slot = 1; slot <= slot_cap + 1; ++slot) {
      const bool r1_lost = bernoulli(rng, eps1);
      const bool r2_lost = bernoulli(rng, eps2);
      if (armed && !r2_lost) {
        const std::uint64_t t = slot - 1;
        if (t >= out.counts.size()) out.counts.resize(t + 1, 0);
        ++out.counts[t];
        broken = true;
        break;
      }
      if (armed) {
        armed = r1_lost;  // both lost keeps the break pending; receiver 2 alone losing disarms it
      } else {
        armed = r1_lost && !r2_lost;
      }
    }
    ++out.trials;
    if (!broken) ++out.censored;
  }
  return out;
}

PmfAgreement compare_pmf(const DiscreteDistribution& analytic, const EmpiricalPmf& empirical, double min_expected,
                         double sigmas) {
  PmfAgreement out;
  const double n = static_cast<double>(empirical.trials);
  for (std::size_t v = 0; v < analytic.mass.size(); ++v) {
    const double p = analytic.mass[v];
    if (n * p < min_expected) continue;
    const double observed = v < empirical.counts.size() ? static_cast<double>(empirical.counts[v]) : 0.0;
    const double z = std::abs(observed - n * p) / std::sqrt(n * p * (1 - p));
    ++out.bins_checked;
    if (z > sigmas) ++out.violations;
    out.max_abs_z = std::max(out.max_abs_z, z);
  }
  return out;
}

DiscreteDistribution multi_chain_delay(const DiscreteDistribution& dist, std::uint32_t k, std::size_t max_value) {
  if (dist.mass.empty()) return dist;
  const std::size_t top = dist.mass.size() - 1;
  if (max_value == 0) max_value = top * (static_cast<std::size_t>(k) + 1);

  std::vector<double> acc(dist.mass.begin(), dist.mass.begin() + std::min(top, max_value) + 1);
  for (std::uint32_t step = 0; step < k; ++step) {
    std::vector<double> next(std::min(acc.size() - 1 + top, max_value) + 1, 0.0);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      if (acc[a] == 0.0) continue;
      for (std::size_t b = 0; b <= top && a + b < next.size(); ++b) next[a + b] += acc[a] * dist.mass[b];
    }
    acc = std::move(next);
  }
  DiscreteDistribution out;
  out.tail = 1.0 - std::accumulate(acc.begin(), acc.end(), 0.0);
  out.mass = std::move(acc);
  return out;
}

}  // namespace onc
