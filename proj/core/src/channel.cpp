#include "onc/channel.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "onc/errors.hpp"

namespace onc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string ReceptionBitmap::to_line() const {
  std::string out;
  for (std::size_t i = 0; i < received.size(); ++i) {
    if (i > 0) out += ',';
    out += received[i] ? "OK" : "E";
  }
  return out;
}

void ChannelSet::validate() const {
  for (double e : epsilons) {
    if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("erasure probabilities must lie in [0, 1)");
  }
}

double event_probability(const ReceptionBitmap& bitmap, const std::vector<double>& epsilons) {
  if (bitmap.size() != epsilons.size()) {
    throw std::invalid_argument("bitmap and epsilon vector lengths differ");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < epsilons.size(); ++i) p *= bitmap[i] ? (1.0 - epsilons[i]) : epsilons[i];
  return p;
}

ReceptionBitmap sample_slot(const ChannelSet& channels, Rng& rng) {
  ReceptionBitmap out;
  out.received.resize(channels.epsilons.size());
  for (std::size_t i = 0; i < channels.epsilons.size(); ++i) {
    out.received[i] = !bernoulli(rng, channels.epsilons[i]);
  }
  return out;
}

SampledChannel::SampledChannel(ChannelSet channels) : channels_(std::move(channels)), rng_(channels_.rng_seed) {
  channels_.validate();
}

std::optional<ReceptionBitmap> SampledChannel::next() { return sample_slot(channels_, rng_); }

ReplayChannel::ReplayChannel(std::vector<ReceptionBitmap> pattern, std::size_t receivers)
    : pattern_(std::move(pattern)), receivers_(receivers) {
  for (const auto& b : pattern_) {
    if (b.size() != receivers_) throw std::invalid_argument("pattern width does not match receiver count");
  }
}

std::optional<ReceptionBitmap> ReplayChannel::next() {
  if (cursor_ >= pattern_.size()) return std::nullopt;
  return pattern_[cursor_++];
}

std::vector<ReceptionBitmap> parse_pattern(std::string_view text, std::optional<std::size_t> expected_receivers) {
  std::vector<ReceptionBitmap> out;
  std::size_t line_no = 0;
  std::size_t width = expected_receivers.value_or(0);
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    ReceptionBitmap bitmap;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view token = trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (token == "OK") {
        bitmap.received.push_back(true);
      } else if (token == "E") {
        bitmap.received.push_back(false);
      } else {
        throw PatternParseError(line_no, "expected OK or E, got '" + std::string(token) + "'");
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (width == 0) width = bitmap.size();
    if (bitmap.size() != width) {
      throw PatternParseError(line_no, "expected " + std::to_string(width) + " tokens, got " +
                                           std::to_string(bitmap.size()));
    }
    out.push_back(std::move(bitmap));
  }
  return out;
}

std::vector<ReceptionBitmap> read_pattern_file(const std::string& path,
                                               std::optional<std::size_t> expected_receivers) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pattern file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_pattern(body.str(), expected_receivers);
}

}  // namespace onc
