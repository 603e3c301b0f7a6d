#include "onc/config.hpp"

#include <charconv>

#include <json.hpp>

#include "onc/errors.hpp"

namespace onc {

using nlohmann::ordered_json;

void SimConfig::validate() const {
  if (n_receivers < 1) throw ConfigError("n_receivers must be >= 1");
  if (epsilons.size() != n_receivers) throw ConfigError("epsilons length must equal n_receivers");
  for (double e : epsilons) {
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("epsilons must lie in [0, 1)");
  }
  if (m_packets < 1) throw ConfigError("m_packets must be >= 1");
  if (threshold && *threshold < 1) throw ConfigError("threshold must be >= 1");
  if (uses_threshold(algorithm) != threshold.has_value()) {
    throw ConfigError(to_string(algorithm) + (threshold ? " does not take a threshold" : " requires a threshold"));
  }
  if (field_bits < 0 || field_bits > 16) throw ConfigError("field_bits must be 0 (auto) or 1..16");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  try {
    feedback.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int SimConfig::effective_field_bits() const noexcept {
  if (field_bits > 0) return field_bits;
  return n_receivers == 2 ? 1 : 8;
}

std::uint64_t SimConfig::effective_max_slots() const noexcept {
  return max_slots ? max_slots : 200 * static_cast<std::uint64_t>(m_packets);
}

SenderConfig SimConfig::sender_config() const {
  return SenderConfig{algorithm, m_packets, threshold, delta, deferral, discard_expired};
}

std::vector<double> expand_epsilons(const std::vector<double>& values, std::size_t n) {
  if (values.size() == 1) return std::vector<double>(n, values.front());
  if (values.size() != n) {
    throw ConfigError("expected 1 or " + std::to_string(n) + " erasure probabilities, got " +
                      std::to_string(values.size()));
  }
  return values;
}

std::optional<std::uint32_t> parse_threshold(std::string_view text) {
  if (text == "none" || text.empty()) return std::nullopt;
  std::uint32_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 1) {
    throw ConfigError("threshold must be 'none' or a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::string threshold_label(const std::optional<std::uint32_t>& threshold) {
  return threshold ? std::to_string(*threshold) : "none";
}

std::string config_to_json(const SimConfig& c) {
  ordered_json j;
  j["n_receivers"] = c.n_receivers;
  j["epsilons"] = c.epsilons;
  j["m_packets"] = c.m_packets;
  j["algorithm"] = to_string(c.algorithm);
  j["threshold"] = c.threshold ? ordered_json(*c.threshold) : ordered_json(nullptr);
  j["delta"] = c.delta;
  j["field_bits"] = c.field_bits;
  j["deferral"] = c.deferral;
  j["discard_expired"] = c.discard_expired;
  j["feedback"] = {{"kind", to_string(c.feedback.kind)},
                   {"fb_loss", c.feedback.fb_loss},
                   {"fb_delay", c.feedback.fb_delay},
                   {"policy", to_string(c.feedback.policy)},
                   {"random_q", c.feedback.random_q}};
  j["seed"] = c.seed;
  j["runs"] = c.runs;
  j["max_slots"] = c.max_slots;
  j["keep_records"] = c.keep_records;
  return j.dump(2) + "\n";
}

SimConfig config_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  SimConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_receivers") c.n_receivers = value.get<std::size_t>();
      else if (key == "epsilons") c.epsilons = value.get<std::vector<double>>();
      else if (key == "m_packets") c.m_packets = value.get<std::size_t>();
      else if (key == "algorithm") c.algorithm = parse_algorithm(value.get<std::string>());
      else if (key == "threshold") c.threshold = value.is_null() ? std::nullopt : std::optional(value.get<std::uint32_t>());
      else if (key == "delta") c.delta = value.get<std::uint32_t>();
      else if (key == "field_bits") c.field_bits = value.get<int>();
      else if (key == "deferral") c.deferral = value.get<bool>();
      else if (key == "discard_expired") c.discard_expired = value.get<bool>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "runs") c.runs = value.get<std::uint64_t>();
      else if (key == "max_slots") c.max_slots = value.get<std::uint64_t>();
      else if (key == "keep_records") c.keep_records = value.get<bool>();
      else if (key == "feedback") {
        for (const auto& [fk, fv] : value.items()) {
          if (fk == "kind") c.feedback.kind = parse_feedback_kind(fv.get<std::string>());
          else if (fk == "fb_loss") c.feedback.fb_loss = fv.get<double>();
          else if (fk == "fb_delay") c.feedback.fb_delay = fv.get<std::uint32_t>();
          else if (fk == "policy") c.feedback.policy = parse_policy(fv.get<std::string>());
          else if (fk == "random_q") c.feedback.random_q = fv.get<double>();
          else throw ConfigError("unknown feedback key '" + fk + "'");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

}  // namespace onc
