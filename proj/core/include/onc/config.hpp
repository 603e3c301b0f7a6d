#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onc/feedback.hpp"
#include "onc/sender.hpp"

namespace onc {

inline constexpr const char* kVersion = "1.0.0";

struct SimConfig {
  std::size_t n_receivers = 2;
  std::vector<double> epsilons{0.25, 0.25};
  std::size_t m_packets = 100;
  Algorithm algorithm = Algorithm::kAnc;
  std::optional<std::uint32_t> threshold;
  std::uint32_t delta = 0;
  int field_bits = 0;  // 0 = automatic
  bool deferral = true;
  bool discard_expired = false;
  FeedbackModel feedback;
  std::uint64_t seed = 1;
  std::uint64_t runs = 1;
  std::uint64_t max_slots = 0;  // 0 = 200 * m_packets
  bool keep_records = false;    // keep per-packet delay records for CSV dumps

  /// Throws ConfigError on any inconsistency.
  void validate() const;

  /// GF(2) for two receivers, GF(2^8) otherwise, unless field_bits is set.
  int effective_field_bits() const noexcept;
  std::uint64_t effective_max_slots() const noexcept;
  SenderConfig sender_config() const;
};

/// Broadcasts a single value to n receivers, or checks the list length.
std::vector<double> expand_epsilons(const std::vector<double>& values, std::size_t n);

/// Parses "none" (no threshold) or a positive integer.
std::optional<std::uint32_t> parse_threshold(std::string_view text);
/// "none" for no threshold.
std::string threshold_label(const std::optional<std::uint32_t>& threshold);

/// JSON round trip using the SimConfig field names.
std::string config_to_json(const SimConfig& config);
SimConfig config_from_json(std::string_view text);

}  // namespace onc
