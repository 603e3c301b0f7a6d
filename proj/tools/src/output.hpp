#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace onc::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-tripping decimal for a double.
std::string format_double(double value);

void write_file(const std::filesystem::path& path, const std::string& text);

/// Sidecar path for a CSV: "x.csv" -> "x.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Base metadata every sidecar carries.
Json base_metadata(std::uint64_t seed);

/// Writes the CSV and its JSON sidecar.
void write_csv(const std::filesystem::path& path, const std::string& csv, const Json& metadata);

}  // namespace onc::cli
