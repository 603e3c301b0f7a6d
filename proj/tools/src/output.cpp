#include "output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "onc/config.hpp"
#include "onc/random.hpp"

namespace onc::cli {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta.json");
  return p;
}

Json base_metadata(std::uint64_t seed) {
  Json j;
  j["version"] = kVersion;
  j["rng"] = kRngName;
  j["seed"] = seed;
  return j;
}

void write_csv(const std::filesystem::path& path, const std::string& csv, const Json& metadata) {
  write_file(path, csv);
  write_file(sidecar_path(path), metadata.dump(2) + "\n");
}

}  // namespace onc::cli
